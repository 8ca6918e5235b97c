#include "clipcard/script.hpp"

#include <sstream>
#include <string>

#include "clipcard/errors.hpp"
#include "clipcard/hex.hpp"
#include "clipcard/reader.hpp"

namespace clipcard {

std::vector<AccessEvent> run_script(const SimulationConfig& cfg, const TemplateStore& store,
                                    std::istream& script) {
    Card card(cfg.card, store);
    Rng rng(cfg.seed);
    std::vector<AccessEvent> trace;

    std::string line;
    int line_no = 0;
    while (std::getline(script, line)) {
        ++line_no;
        const auto fail = [&](const std::string& msg) {
            throw ValidationError("script line " + std::to_string(line_no) + ": " + msg);
        };
        std::istringstream words(line);
        std::string step;
        if (!(words >> step) || step[0] == '#')
            continue;

        if (step == "scan") {
            std::string label, mode;
            if (!(words >> label >> mode) || label.size() != 1)
                fail("expected: scan <label> live|film");
            if (mode != "live" && mode != "film")
                fail("scan mode must be live or film");
            const FingerprintTemplate* tmpl = store.find(label[0]);
            if (!tmpl)
                fail("no template enrolled for label " + label);
            const Scan s = capture(*tmpl, cfg.sensor.noise_stddev,
                                   cfg.sensor.dropout_probability, mode == "live", rng);
            append(trace, card.on_scan(s, card.now()).events);
        } else if (step == "wait") {
            long long ms = -1;
            if (!(words >> ms) || ms < 0)
                fail("expected: wait <ms>");
            append(trace, card.tick(ms));
        } else if (step == "interrogate") {
            double distance = -1.0, angle = -1.0;
            if (!(words >> distance >> angle))
                fail("expected: interrogate <distance_mm> <angle_deg>");
            const auto uid = interrogate(card, LinkConditions{distance, angle, 0.0}, cfg.channel);
            if (uid)
                trace.push_back({card.now(), EventKind::Response, "uid=" + to_hex(*uid)});
            const Permission p = access_decision(uid, cfg.acl);
            trace.push_back({card.now(),
                             p == Permission::Granted ? EventKind::AccessGranted
                                                      : EventKind::AccessDenied,
                             uid ? "uid=" + to_hex(*uid) : "no uid delivered"});
        } else if (step == "tamper") {
            std::string kind;
            if (!(words >> kind))
                fail("expected: tamper <kind>");
            if (kind == "cable_bridge")
                append(trace, card.tamper(TamperKind::CableBridge,
                                          cfg.card.tamper_shield_breached));
            else if (kind == "voltage_injection_5v")
                append(trace, card.tamper(TamperKind::VoltageInjection5v,
                                          cfg.card.tamper_shield_breached));
            else
                fail("unknown tamper kind: " + kind);
        } else if (step == "reset") {
            append(trace, card.reset());
        } else {
            fail("unknown step: " + step);
        }
    }
    return trace;
}

} // namespace clipcard
