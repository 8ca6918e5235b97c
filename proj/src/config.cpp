#include "clipcard/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "clipcard/errors.hpp"
#include "clipcard/hex.hpp"

namespace clipcard {

namespace {

nlohmann::json load_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ValidationError("cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(file.string() + ": bad JSON: " + e.what());
    }
    return doc;
}

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key))
            throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

} // namespace

SimulationConfig load_config(const std::filesystem::path& file) {
    const auto doc = load_json(file);
    if (!doc.is_object())
        throw ValidationError(file.string() + ": config must be an object");
    reject_unknown_keys(doc, {"seed", "store", "card", "channel", "sensor", "acl"},
                        file.string());

    SimulationConfig cfg;
    if (!doc.contains("seed"))
        throw ValidationError(file.string() + ": seed is mandatory");
    cfg.seed = doc.at("seed").get<std::uint64_t>();

    if (!doc.contains("store"))
        throw ValidationError(file.string() + ": store path is mandatory");
    std::filesystem::path store = doc.at("store").get<std::string>();
    if (store.is_relative())
        store = file.parent_path() / store;
    if (!std::filesystem::exists(store))
        throw ValidationError("template store not found: " + store.string());
    cfg.store_path = store;

    if (doc.contains("card")) {
        const auto& jc = doc.at("card");
        reject_unknown_keys(jc,
                            {"uid", "match_threshold", "pairing_window_ms", "session_timeout_ms",
                             "relay", "tamper_shield_breached", "allow_injection_success"},
                            "card");
        if (jc.contains("uid"))
            cfg.card.uid = from_hex(jc.at("uid").get<std::string>());
        if (jc.contains("match_threshold"))
            cfg.card.match_threshold = jc.at("match_threshold").get<double>();
        if (jc.contains("pairing_window_ms"))
            cfg.card.pairing_window_ms = jc.at("pairing_window_ms").get<std::int64_t>();
        if (jc.contains("session_timeout_ms"))
            cfg.card.session_timeout_ms = jc.at("session_timeout_ms").get<std::int64_t>();
        if (jc.contains("tamper_shield_breached"))
            cfg.card.tamper_shield_breached = jc.at("tamper_shield_breached").get<bool>();
        if (jc.contains("allow_injection_success"))
            cfg.card.allow_injection_success = jc.at("allow_injection_success").get<bool>();
        if (jc.contains("relay")) {
            const auto& jr = jc.at("relay");
            reject_unknown_keys(
                jr, {"coil_voltage", "max_current", "coil_resistance", "actuation_delay_ms"},
                "relay");
            if (jr.contains("coil_voltage"))
                cfg.card.relay.coil_voltage_v = jr.at("coil_voltage").get<double>();
            if (jr.contains("max_current"))
                cfg.card.relay.max_current_a = jr.at("max_current").get<double>();
            if (jr.contains("coil_resistance"))
                cfg.card.relay.coil_resistance_ohm = jr.at("coil_resistance").get<double>();
            if (jr.contains("actuation_delay_ms"))
                cfg.card.relay.actuation_delay_ms = jr.at("actuation_delay_ms").get<std::int64_t>();
        }
    }
    cfg.card.validate();

    if (doc.contains("channel")) {
        const auto& jn = doc.at("channel");
        reject_unknown_keys(jn, {"k0", "d0_mm", "k_min"}, "channel");
        if (jn.contains("k0"))
            cfg.channel.k0 = jn.at("k0").get<double>();
        if (jn.contains("d0_mm"))
            cfg.channel.d0_mm = jn.at("d0_mm").get<double>();
        if (jn.contains("k_min"))
            cfg.channel.k_min = jn.at("k_min").get<double>();
        if (cfg.channel.k0 <= 0.0 || cfg.channel.k0 > 1.0 || cfg.channel.d0_mm <= 0.0 ||
            cfg.channel.k_min <= 0.0)
            throw ValidationError("channel: k0 in (0,1], d0 and k_min positive");
    }

    if (doc.contains("sensor")) {
        const auto& js = doc.at("sensor");
        reject_unknown_keys(js, {"noise_stddev", "dropout_probability"}, "sensor");
        if (js.contains("noise_stddev"))
            cfg.sensor.noise_stddev = js.at("noise_stddev").get<double>();
        if (js.contains("dropout_probability"))
            cfg.sensor.dropout_probability = js.at("dropout_probability").get<double>();
        if (cfg.sensor.noise_stddev < 0.0 || cfg.sensor.dropout_probability < 0.0 ||
            cfg.sensor.dropout_probability > 1.0)
            throw ValidationError("sensor: noise >= 0, dropout within [0,1]");
    }

    if (doc.contains("acl")) {
        for (const auto& [uid_hex, perm] : doc.at("acl").items()) {
            const std::string p = perm.get<std::string>();
            if (p != "granted" && p != "denied")
                throw ValidationError("acl: permission must be granted or denied");
            cfg.acl.entries[to_hex(from_hex(uid_hex))] =
                p == "granted" ? Permission::Granted : Permission::Denied;
        }
    } else {
        cfg.acl.entries[to_hex(cfg.card.uid)] = Permission::Granted;
    }
    return cfg;
}

AntennaGeometry load_geometry(const std::filesystem::path& file) {
    const auto doc = load_json(file);
    if (!doc.is_object())
        throw ValidationError(file.string() + ": geometry must be an object");
    reject_unknown_keys(doc,
                        {"outer_length", "outer_width", "trace_width", "spacing", "turns",
                         "trace_thickness", "substrate_thickness",
                         "substrate_relative_permittivity"},
                        file.string());
    AntennaGeometry g;
    try {
        g.outer_length = doc.at("outer_length").get<double>();
        g.outer_width = doc.at("outer_width").get<double>();
        g.trace_width = doc.at("trace_width").get<double>();
        g.spacing = doc.at("spacing").get<double>();
        g.turns = doc.at("turns").get<int>();
        g.trace_thickness = doc.at("trace_thickness").get<double>();
        g.substrate_thickness = doc.at("substrate_thickness").get<double>();
        g.substrate_relative_permittivity =
            doc.at("substrate_relative_permittivity").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(file.string() + ": " + e.what());
    }
    g.validate();
    return g;
}

} // namespace clipcard
