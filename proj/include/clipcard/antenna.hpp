#pragma once

#include <cstdint>
#include <vector>

namespace clipcard {

/// Rectangular spiral coil on a dielectric substrate. All lengths are
/// millimeters; the trace winds inward from the outer rectangle with a pitch
/// of trace_width + spacing per side pair.
struct AntennaGeometry {
    double outer_length = 0.0;
    double outer_width = 0.0;
    double trace_width = 0.0;
    double spacing = 0.0;
    int turns = 0;
    double trace_thickness = 0.0;
    double substrate_thickness = 0.0;
    double substrate_relative_permittivity = 0.0;

    /// Throws ValidationError unless turns >= 1, all dimensions > 0 and the
    /// spiral fits: (trace_width + spacing) * turns * 2 < min(outer sides).
    void validate() const;
};

/// Tag/joint connection matrix. tag_present holds one 0/1 indicator per tag;
/// joints has one row per tag, one column per joint.
struct CommunicationGate {
    std::vector<int> tag_present;
    std::vector<std::vector<int>> joints;

    void validate() const;
};

struct AntennaReport {
    double inductance_h = 0.0;
    double tuning_capacitance_f = 0.0;
    double resonant_frequency_hz = 0.0;
    double reflection_coefficient_db = 0.0;
    double trace_length_mm = 0.0;
};

/// Sum over tags i and joints j of tag_present[i] * joints[i][j]. Zero exactly
/// when every present tag has all its joints open, which is the condition for
/// the card to be mute.
[[nodiscard]] long long communication_process(const CommunicationGate& gate);

/// Total centerline length of the spiral, millimeters.
[[nodiscard]] double trace_length(const AntennaGeometry& g);

/// Self-inductance of the spiral by segment summation: one self term per
/// straight segment plus signed mutual terms over every parallel segment
/// pair (geometric-mean-distance corrected). Henries.
[[nodiscard]] double inductance_greenhouse(const AntennaGeometry& g);

/// Closed-form current-sheet estimate:
///   L = K1 * mu0 * n^2 * d_avg / (1 + K2 * rho),  K1 = 2.34, K2 = 2.75
/// with the side length taken as the mean of the two outer sides and
/// rho = (d_out - d_in) / (d_out + d_in). Henries.
[[nodiscard]] double inductance_wheeler(const AntennaGeometry& g);

/// Series capacitance that resonates the given inductance at the target
/// frequency: C = 1 / ((2*pi*f)^2 * L). Farads.
[[nodiscard]] double tuning_capacitance(double inductance_h, double target_frequency_hz);

[[nodiscard]] double resonant_frequency(double inductance_h, double capacitance_f);

/// |S11| of a series RLC branch against the reference impedance, in dB,
/// floored at -100. Always <= 0 for passive inputs.
[[nodiscard]] double reflection_estimate(double inductance_h, double capacitance_f,
                                         double series_resistance_ohm, double frequency_hz,
                                         double reference_impedance_ohm);

/// DC resistance of the spiral trace (copper, 1.68e-8 ohm*m). Ohms.
[[nodiscard]] double trace_resistance(const AntennaGeometry& g);

/// Full characterization at the given operating frequency: greenhouse
/// inductance, tuning capacitance, resulting resonance, and the reflection
/// estimate using the DC trace resistance.
[[nodiscard]] AntennaReport analyze(const AntennaGeometry& g, double frequency_hz = 13.56e6,
                                    double reference_impedance_ohm = 50.0);

/// One straight side of the spiral centerline walk. Horizontal segments run
/// along x at height `perp`; vertical ones along y at offset `perp`. `lo`/`hi`
/// bound the segment on its axis and `dir` is +1/-1 for current flow toward
/// +axis/-axis. Millimeters.
struct SpiralSegment {
    bool horizontal;
    double lo, hi;
    double perp;
    double dir;
};

[[nodiscard]] std::vector<SpiralSegment> spiral_segments(const AntennaGeometry& g);

/// Self-inductance of a straight flat conductor (length, width, thickness in
/// meters), henries:  L = 2e-7 * l * (ln(2l/(w+t)) + 0.50049 + (w+t)/(3l)).
[[nodiscard]] double straight_self_inductance(double length_m, double width_m, double thickness_m);

/// Mutual inductance magnitude of two parallel filaments sharing an axis,
/// spans [s1,e1] and [s2,e2] (meters) at perpendicular distance d. Henries.
[[nodiscard]] double parallel_mutual(double s1, double e1, double s2, double e2, double d_m);

} // namespace clipcard
