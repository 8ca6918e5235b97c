#include "clipcard/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "clipcard/errors.hpp"

namespace clipcard {

namespace {

// far_frr sensor model; deliberately noisier than the live sensor defaults so
// the rejection curve has a visible shape.
constexpr double kEvalNoiseStddev = 0.03;
constexpr double kEvalDropout = 0.1;

double angle_diff_deg(double a, double b) {
    double d = std::fmod(std::abs(a - b), 360.0);
    return std::min(d, 360.0 - d);
}

void validate_point_set(const std::vector<MinutiaPoint>& points) {
    if (points.size() < kMinTemplatePoints || points.size() > kMaxTemplatePoints)
        throw ValidationError("fingerprint: point count must be within 4..40");
    for (const auto& p : points)
        p.validate();
}

} // namespace

void MinutiaPoint::validate() const {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0 || !std::isfinite(y) || y < 0.0 || y > 1.0)
        throw ValidationError("minutia: coordinates must be within [0,1]");
    if (!std::isfinite(orientation) || orientation < 0.0 || orientation >= 360.0)
        throw ValidationError("minutia: orientation must be within [0,360)");
}

const FingerprintTemplate& TemplateStore::enroll(std::vector<MinutiaPoint> points, char label,
                                                 Role role) {
    validate_point_set(points);
    if (find(label) != nullptr)
        throw ConflictError(std::string("label already enrolled: ") + label);
    templates_.push_back(FingerprintTemplate{label, role, std::move(points)});
    return templates_.back();
}

const FingerprintTemplate* TemplateStore::find(char label) const {
    for (const auto& t : templates_) {
        if (t.label == label)
            return &t;
    }
    return nullptr;
}

std::vector<const FingerprintTemplate*> TemplateStore::by_role(Role role) const {
    std::vector<const FingerprintTemplate*> out;
    for (const auto& t : templates_) {
        if (t.role == role)
            out.push_back(&t);
    }
    return out;
}

TemplateStore TemplateStore::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ValidationError("template store: cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("template store: bad JSON: " + std::string(e.what()));
    }
    if (!doc.is_array())
        throw ValidationError("template store: top level must be an array");
    TemplateStore store;
    for (const auto& jt : doc) {
        const std::string label = jt.at("label").get<std::string>();
        if (label.size() != 1)
            throw ValidationError("template store: label must be a single letter");
        std::vector<MinutiaPoint> points;
        for (const auto& jp : jt.at("points")) {
            points.push_back(MinutiaPoint{
                jp.at("x").get<double>(), jp.at("y").get<double>(),
                jp.at("orientation").get<double>(),
                minutia_kind_from_string(jp.at("kind").get<std::string>())});
        }
        store.enroll(std::move(points), label[0],
                     role_from_string(jt.at("role").get<std::string>()));
    }
    return store;
}

void TemplateStore::save(const std::filesystem::path& file) const {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& t : templates_) {
        nlohmann::json jt;
        jt["label"] = std::string(1, t.label);
        jt["role"] = to_string(t.role);
        jt["points"] = nlohmann::json::array();
        for (const auto& p : t.points) {
            jt["points"].push_back({{"x", p.x},
                                    {"y", p.y},
                                    {"orientation", p.orientation},
                                    {"kind", to_string(p.kind)}});
        }
        doc.push_back(std::move(jt));
    }
    std::ofstream out(file);
    if (!out)
        throw ValidationError("template store: cannot write " + file.string());
    out << doc.dump(2) << '\n';
}

Scan capture(const FingerprintTemplate& tmpl, double noise_stddev, double dropout_probability,
             bool live, Rng& rng) {
    if (!(noise_stddev >= 0.0))
        throw ValidationError("capture: noise stddev must be >= 0");
    if (!(dropout_probability >= 0.0 && dropout_probability <= 1.0))
        throw ValidationError("capture: dropout probability must be within [0,1]");

    Scan scan;
    scan.live = live;
    scan.claimed_source = tmpl.label;
    for (const auto& p : tmpl.points) {
        if (rng.uniform01() < dropout_probability)
            continue;
        MinutiaPoint q = p;
        if (noise_stddev > 0.0) {
            q.x = std::clamp(p.x + rng.normal(noise_stddev), 0.0, 1.0);
            q.y = std::clamp(p.y + rng.normal(noise_stddev), 0.0, 1.0);
            const double da = std::clamp(rng.normal(noise_stddev * 200.0), -10.0, 10.0);
            q.orientation = std::fmod(p.orientation + da + 360.0, 360.0);
        }
        scan.points.push_back(q);
    }
    return scan;
}

Scan capture(const FingerprintTemplate& tmpl, double noise_stddev, double dropout_probability,
             bool live, std::uint64_t seed) {
    Rng rng(seed);
    return capture(tmpl, noise_stddev, dropout_probability, live, rng);
}

double match_score(const Scan& scan, const FingerprintTemplate& tmpl) {
    if (tmpl.points.empty())
        throw ValidationError("match_score: empty template");
    if (scan.points.empty())
        return 0.0;

    struct Candidate {
        double dist;
        std::size_t scan_idx;
        std::size_t tmpl_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        for (std::size_t j = 0; j < tmpl.points.size(); ++j) {
            const auto& s = scan.points[i];
            const auto& t = tmpl.points[j];
            const double d = std::hypot(s.x - t.x, s.y - t.y);
            if (d <= kMatchDistanceTol &&
                angle_diff_deg(s.orientation, t.orientation) <= kMatchAngleTolDeg)
                candidates.push_back({d, i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.dist, a.scan_idx, a.tmpl_idx) < std::tie(b.dist, b.scan_idx, b.tmpl_idx);
    });

    std::vector<bool> scan_used(scan.points.size(), false);
    std::vector<bool> tmpl_used(tmpl.points.size(), false);
    std::size_t pairs = 0;
    for (const auto& c : candidates) {
        if (scan_used[c.scan_idx] || tmpl_used[c.tmpl_idx])
            continue;
        scan_used[c.scan_idx] = true;
        tmpl_used[c.tmpl_idx] = true;
        ++pairs;
    }
    return static_cast<double>(pairs) /
           static_cast<double>(std::max(scan.points.size(), tmpl.points.size()));
}

bool verify(const Scan& scan, const FingerprintTemplate& tmpl, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw ValidationError("verify: threshold must be within [0,1]");
    if (!scan.live)
        return false;
    return match_score(scan, tmpl) >= threshold;
}

ErrorRates far_frr(const TemplateStore& store, double threshold, int trials_per_pair,
                   std::uint64_t seed) {
    if (store.size() < 2)
        throw ValidationError("far_frr: store needs at least two templates");
    if (trials_per_pair < 1)
        throw ValidationError("far_frr: trials must be >= 1");

    Rng rng(seed);
    long long genuine_rejected = 0, genuine_total = 0;
    for (const auto& t : store.all()) {
        for (int i = 0; i < trials_per_pair; ++i) {
            const Scan s = capture(t, kEvalNoiseStddev, kEvalDropout, true, rng);
            ++genuine_total;
            if (!verify(s, t, threshold))
                ++genuine_rejected;
        }
    }

    long long impostor_accepted = 0, impostor_total = 0;
    for (const auto& x : store.all()) {
        for (const auto& y : store.all()) {
            if (x.label == y.label)
                continue;
            for (int i = 0; i < trials_per_pair; ++i) {
                const Scan s = capture(x, kEvalNoiseStddev, kEvalDropout, true, rng);
                ++impostor_total;
                if (verify(s, y, threshold))
                    ++impostor_accepted;
            }
        }
    }

    return ErrorRates{static_cast<double>(impostor_accepted) / impostor_total,
                      static_cast<double>(genuine_rejected) / genuine_total};
}

Role role_from_string(const std::string& name) {
    if (name == "authorized_with_permission") return Role::AuthorizedWithPermission;
    if (name == "authorized_without_permission") return Role::AuthorizedWithoutPermission;
    if (name == "unauthorized") return Role::Unauthorized;
    if (name == "unauthorized_flagged") return Role::UnauthorizedFlagged;
    throw ValidationError("unknown role: " + name);
}

const char* to_string(Role role) {
    switch (role) {
    case Role::AuthorizedWithPermission: return "authorized_with_permission";
    case Role::AuthorizedWithoutPermission: return "authorized_without_permission";
    case Role::Unauthorized: return "unauthorized";
    case Role::UnauthorizedFlagged: return "unauthorized_flagged";
    }
    return "?";
}

MinutiaKind minutia_kind_from_string(const std::string& name) {
    if (name == "ridge_ending") return MinutiaKind::RidgeEnding;
    if (name == "bifurcation") return MinutiaKind::Bifurcation;
    throw ValidationError("unknown minutia kind: " + name);
}

const char* to_string(MinutiaKind kind) {
    switch (kind) {
    case MinutiaKind::RidgeEnding: return "ridge_ending";
    case MinutiaKind::Bifurcation: return "bifurcation";
    }
    return "?";
}

} // namespace clipcard
