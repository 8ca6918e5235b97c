#include "clipcard/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "clipcard/errors.hpp"

namespace clipcard {

namespace {

constexpr double kMu0 = 4.0e-7 * std::numbers::pi;
constexpr double kCopperResistivity = 1.68e-8; // ohm*m, DC
constexpr double kReflectionFloorDb = -100.0;
constexpr double kMm = 1e-3;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void AntennaGeometry::validate() const {
    if (turns < 1)
        throw ValidationError("antenna geometry: turns must be >= 1");
    for (double v : {outer_length, outer_width, trace_width, spacing, trace_thickness,
                     substrate_thickness, substrate_relative_permittivity}) {
        if (!finite_positive(v))
            throw ValidationError("antenna geometry: all dimensions must be positive");
    }
    const double pitch = trace_width + spacing;
    if (pitch * turns * 2.0 >= std::min(outer_length, outer_width))
        throw ValidationError("antenna geometry: spiral does not fit inside the outer rectangle");
}

void CommunicationGate::validate() const {
    if (joints.size() != tag_present.size())
        throw ValidationError("gate: joint row count must equal tag count");
    for (int r : tag_present) {
        if (r != 0 && r != 1)
            throw ValidationError("gate: tag indicators must be 0 or 1");
    }
    const std::size_t cols = joints.empty() ? 0 : joints.front().size();
    for (const auto& row : joints) {
        if (row.size() != cols)
            throw ValidationError("gate: ragged joint matrix");
        for (int a : row) {
            if (a != 0 && a != 1)
                throw ValidationError("gate: joint states must be 0 or 1");
        }
    }
}

long long communication_process(const CommunicationGate& gate) {
    gate.validate();
    long long total = 0;
    for (std::size_t i = 0; i < gate.tag_present.size(); ++i) {
        for (int a : gate.joints[i])
            total += static_cast<long long>(gate.tag_present[i]) * a;
    }
    return total;
}

std::vector<SpiralSegment> spiral_segments(const AntennaGeometry& g) {
    g.validate();
    const double w = g.trace_width;
    const double pitch = g.trace_width + g.spacing;
    double xlo = w / 2.0, xhi = g.outer_length - w / 2.0;
    double ylo = w / 2.0, yhi = g.outer_width - w / 2.0;
    double x = xlo, y = ylo;

    std::vector<SpiralSegment> segs;
    segs.reserve(static_cast<std::size_t>(4 * g.turns));
    for (int k = 0; k < 4 * g.turns; ++k) {
        double nx = x, ny = y;
        SpiralSegment s{};
        switch (k % 4) {
        case 0: // east along the bottom
            nx = xhi;
            s = {true, std::min(x, nx), std::max(x, nx), y, nx > x ? 1.0 : -1.0};
            ylo += pitch;
            break;
        case 1: // north along the right
            ny = yhi;
            s = {false, std::min(y, ny), std::max(y, ny), x, ny > y ? 1.0 : -1.0};
            xhi -= pitch;
            break;
        case 2: // west along the top
            nx = xlo;
            s = {true, std::min(x, nx), std::max(x, nx), y, nx > x ? 1.0 : -1.0};
            yhi -= pitch;
            break;
        default: // south along the left
            ny = ylo;
            s = {false, std::min(y, ny), std::max(y, ny), x, ny > y ? 1.0 : -1.0};
            xlo += pitch;
            break;
        }
        if (s.hi - s.lo <= 0.0)
            throw ValidationError("antenna geometry: spiral walk produced a non-positive segment");
        segs.push_back(s);
        x = nx;
        y = ny;
    }
    return segs;
}

double trace_length(const AntennaGeometry& g) {
    double total = 0.0;
    for (const auto& s : spiral_segments(g))
        total += s.hi - s.lo;
    return total;
}

double straight_self_inductance(double length_m, double width_m, double thickness_m) {
    const double wt = width_m + thickness_m;
    return 2e-7 * length_m *
           (std::log(2.0 * length_m / wt) + 0.50049 + wt / (3.0 * length_m));
}

double parallel_mutual(double s1, double e1, double s2, double e2, double d_m) {
    const auto f = [d_m](double u) {
        return u * std::asinh(u / d_m) - std::sqrt(u * u + d_m * d_m);
    };
    return 1e-7 * (f(e2 - s1) + f(s2 - e1) - f(s2 - s1) - f(e2 - e1));
}

namespace {

// Geometric mean distance of two parallel strips of width w at centerline
// distance d (Grover's log series, valid for d >= w).
double strip_gmd(double d, double w) {
    const double r = (w / d) * (w / d);
    return d * std::exp(-(r / 12.0 + r * r / 60.0 + r * r * r / 168.0));
}

} // namespace

double inductance_greenhouse(const AntennaGeometry& g) {
    const auto segs = spiral_segments(g);
    const double w = g.trace_width * kMm;
    const double t = g.trace_thickness * kMm;

    double total = 0.0;
    for (const auto& s : segs)
        total += straight_self_inductance((s.hi - s.lo) * kMm, w, t);

    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const auto& a = segs[i];
            const auto& b = segs[j];
            if (a.horizontal != b.horizontal)
                continue; // perpendicular pairs do not couple
            const double d = std::abs(a.perp - b.perp) * kMm;
            if (d <= 0.0)
                continue;
            const double m = parallel_mutual(a.lo * kMm, a.hi * kMm, b.lo * kMm, b.hi * kMm,
                                             strip_gmd(d, w));
            total += 2.0 * a.dir * b.dir * m;
        }
    }
    return total;
}

double inductance_wheeler(const AntennaGeometry& g) {
    g.validate();
    constexpr double kK1 = 2.34, kK2 = 2.75;
    const double d_out = 0.5 * (g.outer_length + g.outer_width) * kMm;
    const double depth = (g.turns * g.trace_width + (g.turns - 1) * g.spacing) * kMm;
    const double d_in = d_out - 2.0 * depth;
    const double d_avg = 0.5 * (d_out + d_in);
    const double rho = (d_out - d_in) / (d_out + d_in);
    const double n = static_cast<double>(g.turns);
    return kK1 * kMu0 * n * n * d_avg / (1.0 + kK2 * rho);
}

double tuning_capacitance(double inductance_h, double target_frequency_hz) {
    if (!finite_positive(inductance_h) || !finite_positive(target_frequency_hz))
        throw ValidationError("tuning_capacitance: inputs must be positive");
    const double omega = 2.0 * std::numbers::pi * target_frequency_hz;
    return 1.0 / (omega * omega * inductance_h);
}

double resonant_frequency(double inductance_h, double capacitance_f) {
    if (!finite_positive(inductance_h) || !finite_positive(capacitance_f))
        throw ValidationError("resonant_frequency: inputs must be positive");
    return 1.0 / (2.0 * std::numbers::pi * std::sqrt(inductance_h * capacitance_f));
}

double reflection_estimate(double inductance_h, double capacitance_f,
                           double series_resistance_ohm, double frequency_hz,
                           double reference_impedance_ohm) {
    for (double v : {inductance_h, capacitance_f, series_resistance_ohm, frequency_hz,
                     reference_impedance_ohm}) {
        if (!finite_positive(v))
            throw ValidationError("reflection_estimate: inputs must be positive");
    }
    const double omega = 2.0 * std::numbers::pi * frequency_hz;
    const std::complex<double> z{series_resistance_ohm,
                                 omega * inductance_h - 1.0 / (omega * capacitance_f)};
    const double mag = std::abs((z - reference_impedance_ohm) / (z + reference_impedance_ohm));
    if (mag <= 0.0)
        return kReflectionFloorDb;
    const double db = 20.0 * std::log10(mag);
    return std::max(std::min(db, 0.0), kReflectionFloorDb);
}

double trace_resistance(const AntennaGeometry& g) {
    const double length_m = trace_length(g) * kMm;
    const double area = (g.trace_width * kMm) * (g.trace_thickness * kMm);
    return kCopperResistivity * length_m / area;
}

AntennaReport analyze(const AntennaGeometry& g, double frequency_hz,
                      double reference_impedance_ohm) {
    AntennaReport rep;
    rep.trace_length_mm = trace_length(g);
    rep.inductance_h = inductance_greenhouse(g);
    rep.tuning_capacitance_f = tuning_capacitance(rep.inductance_h, frequency_hz);
    rep.resonant_frequency_hz = resonant_frequency(rep.inductance_h, rep.tuning_capacitance_f);
    rep.reflection_coefficient_db =
        reflection_estimate(rep.inductance_h, rep.tuning_capacitance_f, trace_resistance(g),
                            frequency_hz, reference_impedance_ohm);
    return rep;
}

} // namespace clipcard
