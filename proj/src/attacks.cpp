#include "clipcard/attacks.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "clipcard/errors.hpp"
#include "clipcard/hex.hpp"
#include "clipcard/reader.hpp"

namespace clipcard {

namespace {

std::vector<double> default_distances() {
    std::vector<double> d;
    for (int mm = 0; mm <= 100; mm += 5)
        d.push_back(mm);
    return d;
}

std::vector<double> default_angles() {
    std::vector<double> a;
    for (int deg = 0; deg <= 90; deg += 15)
        a.push_back(deg);
    return a;
}

struct World {
    Card card;
    AttackOutcome out;
    const SimulationConfig* cfg;

    void record_decision(const std::optional<Uid>& uid, const std::string& context) {
        if (uid) {
            ++out.responses_observed;
            out.trace.push_back(
                {card.now(), EventKind::Response, context + ": uid=" + to_hex(*uid)});
            const Permission p = access_decision(uid, cfg->acl);
            if (p == Permission::Granted && card.state().mode != CardMode::Active)
                throw std::logic_error("harness: grant without an active card");
            out.trace.push_back({card.now(),
                                 p == Permission::Granted ? EventKind::AccessGranted
                                                          : EventKind::AccessDenied,
                                 context});
        }
    }

    void interrogate_card(const LinkConditions& link, const std::string& context) {
        record_decision(interrogate(card, link, cfg->channel), context);
    }

    void sweep(const std::vector<double>& distances, const std::vector<double>& angles) {
        for (double d : distances) {
            for (double a : angles)
                interrogate_card(LinkConditions{d, a, 0.0}, "sweep");
        }
    }

    void scan_from(char label, bool live, Rng& rng) {
        const FingerprintTemplate* tmpl = nullptr;
        for (const auto& t : *store)
            if (t.label == label)
                tmpl = &t;
        if (!tmpl)
            throw ConfigError(std::string("scenario needs template ") + label);
        const Scan s = capture(*tmpl, cfg->sensor.noise_stddev, cfg->sensor.dropout_probability,
                               live, rng);
        append(out.trace, card.on_scan(s, card.now()).events);
    }

    const std::vector<FingerprintTemplate>* store = nullptr;
};

void validate_grid(const ScenarioParams& p) {
    if (p.distances_mm.empty() || p.angles_deg.empty())
        throw ValidationError("scenario: sweep grid must not be empty");
    for (double d : p.distances_mm)
        if (d < 0.0)
            throw ValidationError("scenario: distances must be >= 0");
    for (double a : p.angles_deg)
        if (a < 0.0 || a > 90.0)
            throw ValidationError("scenario: angles must be within [0,90]");
}

} // namespace

Harness::Harness(const SimulationConfig& cfg)
    : cfg_(cfg), store_(TemplateStore::load(cfg.store_path)) {}

Harness::Harness(SimulationConfig cfg, TemplateStore store)
    : cfg_(std::move(cfg)), store_(std::move(store)) {}

AttackOutcome Harness::run_scenario(const AttackScenario& scenario, std::uint64_t seed) const {
    ScenarioParams p = scenario.params;
    if (p.distances_mm.empty())
        p.distances_mm = default_distances();
    if (p.angles_deg.empty())
        p.angles_deg = default_angles();
    validate_grid(p);
    if (p.rounds < 1)
        throw ValidationError("scenario: rounds must be >= 1");

    CardConfig card_cfg = cfg_.card;
    if (p.allow_injection_success)
        card_cfg.allow_injection_success = *p.allow_injection_success;

    Rng rng(seed);
    World w{Card(card_cfg, store_), AttackOutcome{}, &cfg_};
    w.store = &store_.all();

    switch (scenario.kind) {
    case AttackKind::TagManipulation: {
        // Unauthenticated card waved at the reader over the whole grid.
        w.sweep(p.distances_mm, p.angles_deg);
        w.out.mitigated = w.out.responses_observed == 0;
        w.out.notes = std::to_string(p.distances_mm.size() * p.angles_deg.size()) +
                      " placements, " + std::to_string(w.out.responses_observed) + " responses";
        break;
    }
    case AttackKind::ClipBridgeCable: {
        append(w.out.trace, w.card.tamper(TamperKind::CableBridge, card_cfg.tamper_shield_breached));
        w.sweep(p.distances_mm, p.angles_deg);
        w.out.mitigated = w.out.responses_observed == 0;
        w.out.notes = "cable bridge cannot recreate the antenna path";
        break;
    }
    case AttackKind::ClipInject5v: {
        append(w.out.trace,
               w.card.tamper(TamperKind::VoltageInjection5v, p.tamper_shield_breached));
        w.sweep(p.distances_mm, p.angles_deg);
        w.out.mitigated = w.out.responses_observed == 0;
        w.out.notes = w.card.state().mode == CardMode::Alarm
                          ? "injection detected, card in alarm"
                          : "what-if breach: joint forced closed";
        break;
    }
    case AttackKind::ForgedFilmFingerprint: {
        bool joint_ever_closed = false;
        w.scan_from('A', /*live=*/false, rng);
        joint_ever_closed |= w.card.state().joint_closed;
        append(w.out.trace, w.card.tick(500));
        w.scan_from('B', /*live=*/false, rng);
        joint_ever_closed |= w.card.state().joint_closed;
        w.sweep(p.distances_mm, p.angles_deg);
        w.out.mitigated = !joint_ever_closed && w.out.responses_observed == 0;
        w.out.notes = "film replica fails live-finger detection";
        break;
    }
    case AttackKind::UnauthorizedRead:
    case AttackKind::Skimming:
    case AttackKind::ClandestineTracking: {
        for (int i = 0; i < p.rounds; ++i) {
            w.interrogate_card(LinkConditions{10.0, 0.0, 0.0}, "silent read");
            append(w.out.trace, w.card.tick(1000));
        }
        w.out.mitigated = w.out.responses_observed == 0;
        w.out.notes = std::to_string(p.rounds) + " silent reads, " +
                      std::to_string(w.out.responses_observed) + " responses";
        break;
    }
    case AttackKind::CloneAttempt: {
        // The UID alone, copied to a bare tag with no joint in the way.
        const Uid cloned = card_cfg.uid;
        const Responder plain_tag = [&cloned](const Frame& f) -> std::optional<Frame> {
            if (f.kind == FrameKind::Reqa)
                return Frame{FrameDirection::CardToReader, FrameKind::Atqa, {0x04, 0x00}};
            if (f.kind == FrameKind::Select)
                return Frame{FrameDirection::CardToReader, FrameKind::UidResponse, cloned};
            return std::nullopt;
        };
        const LinkConditions link{10.0, 0.0, 0.0};
        const auto clone_uid = interrogate(plain_tag, link, /*gate_value=*/1, cfg_.channel);
        if (clone_uid) {
            ++w.out.responses_observed;
            w.out.trace.push_back(
                {w.card.now(), EventKind::Response, "clone: uid=" + to_hex(*clone_uid)});
            w.out.trace.push_back({w.card.now(),
                                   access_decision(clone_uid, cfg_.acl) == Permission::Granted
                                       ? EventKind::AccessGranted
                                       : EventKind::AccessDenied,
                                   "clone"});
        }
        const auto genuine_uid = interrogate(w.card, link, cfg_.channel);
        w.out.mitigated = false; // the UID copy itself is not prevented
        w.out.notes = genuine_uid
                          ? "gated card answered with its joint open (unexpected)"
                          : "clone grants on a bare tag; the gated card stays silent while open";
        break;
    }
    case AttackKind::RelayAttack: {
        if (p.during_active_session) {
            w.scan_from('A', /*live=*/true, rng);
            append(w.out.trace, w.card.tick(500));
            w.scan_from('B', /*live=*/true, rng);
        }
        // Mole loop close to the card; remote leg treated as a clean wire.
        const LinkConditions mole_link{5.0, 0.0, 0.0};
        const Responder forwarded = [&](const Frame& f) -> std::optional<Frame> {
            const auto to_card = transmit(f, mole_link, w.card.gate_value(), cfg_.channel);
            if (!to_card)
                return std::nullopt;
            const auto reply = w.card.respond(*to_card);
            if (!reply)
                return std::nullopt;
            return transmit(*reply, mole_link, w.card.gate_value(), cfg_.channel);
        };
        const auto uid = interrogate(forwarded, LinkConditions{0.0, 0.0, 0.0},
                                     w.card.gate_value(), cfg_.channel);
        w.record_decision(uid, "relayed interrogation");
        w.out.mitigated = !uid.has_value();
        w.out.notes = p.during_active_session
                          ? "forwarded frames ride the open session; not mitigated"
                          : "no session, relay sees a shielded tag";
        break;
    }
    }

    if (w.out.mitigated) {
        for (const auto& ev : w.out.trace) {
            if (ev.kind == EventKind::AccessGranted)
                throw std::logic_error("harness: mitigated outcome contains a grant");
        }
    }
    return w.out;
}

std::vector<AttackScenario> Harness::default_suite() {
    std::vector<AttackScenario> suite;
    const auto add = [&suite](AttackKind kind, bool expected) {
        AttackScenario s;
        s.kind = kind;
        s.expect_mitigated = expected;
        suite.push_back(std::move(s));
    };
    add(AttackKind::TagManipulation, true);
    add(AttackKind::ClipBridgeCable, true);
    add(AttackKind::ClipInject5v, true);
    add(AttackKind::ForgedFilmFingerprint, true);
    add(AttackKind::UnauthorizedRead, true);
    add(AttackKind::Skimming, true);
    add(AttackKind::ClandestineTracking, true);
    add(AttackKind::CloneAttempt, false);
    add(AttackKind::RelayAttack, true);
    AttackScenario relay_active;
    relay_active.kind = AttackKind::RelayAttack;
    relay_active.params.during_active_session = true;
    relay_active.expect_mitigated = false;
    suite.push_back(std::move(relay_active));
    return suite;
}

std::vector<MatrixRow> Harness::countermeasure_matrix(std::uint64_t seed) const {
    const auto run = [this, seed](AttackKind kind, bool active_session = false) {
        AttackScenario s;
        s.kind = kind;
        s.params.during_active_session = active_session;
        return run_scenario(s, seed);
    };

    const auto tag_manip = run(AttackKind::TagManipulation);
    const auto film = run(AttackKind::ForgedFilmFingerprint);
    const auto silent = run(AttackKind::UnauthorizedRead);
    const auto clone = run(AttackKind::CloneAttempt);
    const auto relay_shielded = run(AttackKind::RelayAttack);
    const auto relay_active = run(AttackKind::RelayAttack, /*active_session=*/true);
    const auto skim = run(AttackKind::Skimming);
    const auto track = run(AttackKind::ClandestineTracking);

    std::vector<MatrixRow> rows;
    rows.push_back({"unauthorized card reading", silent.mitigated, "unauthorized_read",
                    silent.notes});
    rows.push_back({"unauthorized card use", tag_manip.mitigated && film.mitigated,
                    "tag_manipulation + forged_film_fingerprint",
                    "joint stays open without two live enrolled fingers"});
    rows.push_back({"tag cloning", clone.mitigated, "clone_attempt", clone.notes});
    rows.push_back({"relay attack (shielded)", relay_shielded.mitigated, "relay_attack",
                    relay_shielded.notes});
    rows.push_back({"relay attack (active session)", relay_active.mitigated, "relay_attack",
                    relay_active.notes});
    rows.push_back({"skimming", skim.mitigated, "skimming", skim.notes});
    rows.push_back({"spoofing", film.mitigated, "forged_film_fingerprint", film.notes});
    rows.push_back({"unauthorized killing", silent.mitigated, "unauthorized_read",
                    "kill commands cannot reach an unpowered tag"});
    rows.push_back({"clandestine tracking", track.mitigated, "clandestine_tracking",
                    track.notes});
    return rows;
}

std::vector<AttackScenario> load_suite(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ValidationError("cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(file.string() + ": bad JSON: " + e.what());
    }
    if (!doc.is_array())
        throw ValidationError(file.string() + ": suite must be an array");

    std::vector<AttackScenario> suite;
    for (const auto& js : doc) {
        if (!js.is_object())
            throw ValidationError("suite: each scenario must be an object");
        for (const auto& [key, value] : js.items()) {
            if (key != "kind" && key != "parameters" && key != "expect_mitigated")
                throw ValidationError("suite: unknown key '" + key + "'");
        }
        AttackScenario s;
        s.kind = attack_kind_from_string(js.at("kind").get<std::string>());
        if (js.contains("expect_mitigated"))
            s.expect_mitigated = js.at("expect_mitigated").get<bool>();

        std::set<std::string> allowed;
        switch (s.kind) {
        case AttackKind::TagManipulation:
        case AttackKind::ClipBridgeCable:
            allowed = {"distances_mm", "angles_deg"};
            break;
        case AttackKind::ClipInject5v:
            allowed = {"distances_mm", "angles_deg", "tamper_shield_breached",
                       "allow_injection_success"};
            break;
        case AttackKind::ForgedFilmFingerprint:
            allowed = {"distances_mm", "angles_deg"};
            break;
        case AttackKind::UnauthorizedRead:
        case AttackKind::Skimming:
        case AttackKind::ClandestineTracking:
            allowed = {"rounds"};
            break;
        case AttackKind::CloneAttempt:
            allowed = {};
            break;
        case AttackKind::RelayAttack:
            allowed = {"during_active_session"};
            break;
        }

        if (js.contains("parameters")) {
            const auto& jp = js.at("parameters");
            if (!jp.is_object())
                throw ValidationError("suite: parameters must be an object");
            try {
                for (const auto& [key, value] : jp.items()) {
                    if (!allowed.contains(key))
                        throw ValidationError("suite: parameter '" + key +
                                              "' does not apply to kind " +
                                              to_string(s.kind));
                    if (key == "distances_mm")
                        s.params.distances_mm = value.get<std::vector<double>>();
                    else if (key == "angles_deg")
                        s.params.angles_deg = value.get<std::vector<double>>();
                    else if (key == "rounds")
                        s.params.rounds = value.get<int>();
                    else if (key == "during_active_session")
                        s.params.during_active_session = value.get<bool>();
                    else if (key == "tamper_shield_breached")
                        s.params.tamper_shield_breached = value.get<bool>();
                    else if (key == "allow_injection_success")
                        s.params.allow_injection_success = value.get<bool>();
                }
            } catch (const nlohmann::json::exception& e) {
                throw ValidationError("suite: bad parameter value: " + std::string(e.what()));
            }
        }
        suite.push_back(std::move(s));
    }
    return suite;
}

AttackKind attack_kind_from_string(const std::string& name) {
    if (name == "tag_manipulation") return AttackKind::TagManipulation;
    if (name == "clip_bridge_cable") return AttackKind::ClipBridgeCable;
    if (name == "clip_inject_5v") return AttackKind::ClipInject5v;
    if (name == "forged_film_fingerprint") return AttackKind::ForgedFilmFingerprint;
    if (name == "unauthorized_read") return AttackKind::UnauthorizedRead;
    if (name == "clone_attempt") return AttackKind::CloneAttempt;
    if (name == "relay_attack") return AttackKind::RelayAttack;
    if (name == "skimming") return AttackKind::Skimming;
    if (name == "clandestine_tracking") return AttackKind::ClandestineTracking;
    throw ValidationError("unknown attack kind: " + name);
}

const char* to_string(AttackKind kind) {
    switch (kind) {
    case AttackKind::TagManipulation: return "tag_manipulation";
    case AttackKind::ClipBridgeCable: return "clip_bridge_cable";
    case AttackKind::ClipInject5v: return "clip_inject_5v";
    case AttackKind::ForgedFilmFingerprint: return "forged_film_fingerprint";
    case AttackKind::UnauthorizedRead: return "unauthorized_read";
    case AttackKind::CloneAttempt: return "clone_attempt";
    case AttackKind::RelayAttack: return "relay_attack";
    case AttackKind::Skimming: return "skimming";
    case AttackKind::ClandestineTracking: return "clandestine_tracking";
    }
    return "?";
}

} // namespace clipcard
