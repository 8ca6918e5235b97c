#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clipcard/rng.hpp"

namespace clipcard {

enum class MinutiaKind { RidgeEnding, Bifurcation };

/// A ridge feature in sensor-normalized coordinates.
struct MinutiaPoint {
    double x = 0.0;           // [0,1]
    double y = 0.0;           // [0,1]
    double orientation = 0.0; // degrees, [0,360)
    MinutiaKind kind = MinutiaKind::RidgeEnding;

    void validate() const;
};

enum class Role {
    AuthorizedWithPermission,
    AuthorizedWithoutPermission,
    Unauthorized,
    UnauthorizedFlagged,
};

constexpr std::size_t kMinTemplatePoints = 4;
constexpr std::size_t kMaxTemplatePoints = 40;

struct FingerprintTemplate {
    char label = '?';
    Role role = Role::Unauthorized;
    std::vector<MinutiaPoint> points;
};

/// One sensor reading. `live` is false for a replica (e.g. a lifted film
/// print); a non-live scan never verifies.
struct Scan {
    std::vector<MinutiaPoint> points;
    bool live = true;
    char claimed_source = '?';
};

/// Enrolled templates, unique by label. Single writer; reads are safe once
/// enrollment is done.
class TemplateStore {
public:
    /// Validates point count (4..40) and ranges; duplicate label -> ConflictError.
    const FingerprintTemplate& enroll(std::vector<MinutiaPoint> points, char label, Role role);

    [[nodiscard]] const FingerprintTemplate* find(char label) const;
    [[nodiscard]] const std::vector<FingerprintTemplate>& all() const { return templates_; }
    [[nodiscard]] std::vector<const FingerprintTemplate*> by_role(Role role) const;
    [[nodiscard]] std::size_t size() const { return templates_.size(); }

    static TemplateStore load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

private:
    std::vector<FingerprintTemplate> templates_;
};

/// Sensor model: each point survives dropout with probability
/// 1 - dropout_probability, then gets gaussian x/y noise (clamped to [0,1])
/// and an orientation perturbation of stddev*200 degrees clamped to +-10.
Scan capture(const FingerprintTemplate& tmpl, double noise_stddev, double dropout_probability,
             bool live, Rng& rng);
Scan capture(const FingerprintTemplate& tmpl, double noise_stddev, double dropout_probability,
             bool live, std::uint64_t seed);

constexpr double kMatchDistanceTol = 0.05;
constexpr double kMatchAngleTolDeg = 15.0;
constexpr double kDefaultMatchThreshold = 0.6;

/// Greedy nearest-first one-to-one pairing. A scan point pairs with a
/// template point when they are within kMatchDistanceTol euclidean and
/// kMatchAngleTolDeg of orientation. Score = pairs / max(|scan|, |template|).
/// Empty scan scores 0; empty template -> ValidationError.
[[nodiscard]] double match_score(const Scan& scan, const FingerprintTemplate& tmpl);

/// true iff scan.live and match_score >= threshold.
[[nodiscard]] bool verify(const Scan& scan, const FingerprintTemplate& tmpl,
                          double threshold = kDefaultMatchThreshold);

struct ErrorRates {
    double far = 0.0;
    double frr = 0.0;
};

/// Seeded FAR/FRR estimate over the store: genuine trials are noisy live
/// self-captures (trials_per_pair per template); impostor trials capture X
/// and verify against Y for every ordered pair X != Y.
ErrorRates far_frr(const TemplateStore& store, double threshold, int trials_per_pair,
                   std::uint64_t seed);

Role role_from_string(const std::string& name);
const char* to_string(Role role);
MinutiaKind minutia_kind_from_string(const std::string& name);
const char* to_string(MinutiaKind kind);

} // namespace clipcard
