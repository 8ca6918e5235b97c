#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clipcard/config.hpp"
#include "clipcard/events.hpp"
#include "clipcard/fingerprint.hpp"

namespace clipcard {

enum class AttackKind {
    TagManipulation,
    ClipBridgeCable,
    ClipInject5v,
    ForgedFilmFingerprint,
    UnauthorizedRead,
    CloneAttempt,
    RelayAttack,
    Skimming,
    ClandestineTracking,
};

/// Knobs a scenario may set; which ones apply depends on the kind (the suite
/// loader schema-checks that). Sweep grids default to distances 0..100 mm in
/// 5 mm steps by angles 0..90 degrees in 15 degree steps.
struct ScenarioParams {
    std::vector<double> distances_mm;
    std::vector<double> angles_deg;
    int rounds = 50;
    bool during_active_session = false;
    bool tamper_shield_breached = false;
    std::optional<bool> allow_injection_success;
};

struct AttackScenario {
    AttackKind kind = AttackKind::TagManipulation;
    ScenarioParams params;
    std::optional<bool> expect_mitigated;
};

struct AttackOutcome {
    bool mitigated = false;
    int responses_observed = 0;
    std::vector<AccessEvent> trace;
    std::string notes;
};

struct MatrixRow {
    std::string threat;
    bool mitigated = false;
    std::string scenario;
    std::string note;
};

/// Runs the risk-assessment scenarios against an isolated card+reader world
/// built from the config. Scenarios never share state; results depend only on
/// (config, scenario, seed).
class Harness {
public:
    explicit Harness(const SimulationConfig& cfg);
    Harness(SimulationConfig cfg, TemplateStore store);

    [[nodiscard]] AttackOutcome run_scenario(const AttackScenario& scenario,
                                             std::uint64_t seed) const;

    /// One verdict row per physical-layer threat, each backed by a scenario
    /// run under default flags. The relay-attack threat is reported twice:
    /// against a shielded card and during an open session.
    [[nodiscard]] std::vector<MatrixRow> countermeasure_matrix(std::uint64_t seed) const;

    [[nodiscard]] static std::vector<AttackScenario> default_suite();

private:
    SimulationConfig cfg_;
    TemplateStore store_;
};

/// Parses a suite file: a JSON array of {kind, parameters, expect_mitigated}
/// records. Unknown kinds, unknown parameter keys or values inapplicable to
/// the kind are validation errors.
std::vector<AttackScenario> load_suite(const std::filesystem::path& file);

AttackKind attack_kind_from_string(const std::string& name);
const char* to_string(AttackKind kind);

} // namespace clipcard
