#include "clipcard/card.hpp"

#include <algorithm>
#include <cmath>

#include "clipcard/antenna.hpp"
#include "clipcard/errors.hpp"
#include "clipcard/hex.hpp"

namespace clipcard {

void RelayParameters::validate() const {
    for (double v : {coil_voltage_v, max_current_a, coil_resistance_ohm}) {
        if (!std::isfinite(v) || v <= 0.0)
            throw ValidationError("relay: parameters must be positive");
    }
    if (actuation_delay_ms <= 0)
        throw ValidationError("relay: actuation delay must be positive");
    if (coil_voltage_v / coil_resistance_ohm > max_current_a)
        throw ValidationError("relay: coil current exceeds the rated maximum");
}

void CardConfig::validate() const {
    relay.validate();
    if (uid.empty() || uid.size() > kMaxFramePayload)
        throw ValidationError("card: uid must be 1..32 bytes");
    if (!(match_threshold >= 0.0 && match_threshold <= 1.0))
        throw ValidationError("card: match threshold must be within [0,1]");
    if (pairing_window_ms <= 0 || session_timeout_ms <= 0)
        throw ValidationError("card: windows must be positive");
}

Card::Card(CardConfig cfg, const TemplateStore& store) : cfg_(std::move(cfg)), store_(&store) {
    cfg_.validate();
    if (store.by_role(Role::AuthorizedWithPermission).size() != 2)
        throw ConfigError("card: store must hold exactly one authorized_with_permission pair");
}

AccessEvent Card::event(std::int64_t t, EventKind kind, std::string detail) const {
    return AccessEvent{t, kind, std::move(detail)};
}

void Card::enter_shielded() {
    state_.mode = CardMode::Shielded;
    state_.joint_closed = false;
    state_.session_remaining_ms = 0;
    state_.first_factor_label.reset();
    pairing_remaining_ms_ = 0;
}

void Card::enter_active(std::vector<AccessEvent>& out, std::int64_t t, const std::string& why) {
    state_.mode = CardMode::Active;
    state_.joint_closed = true;
    state_.session_remaining_ms = cfg_.session_timeout_ms;
    state_.first_factor_label.reset();
    state_.indicator = Indicator::Green;
    pairing_remaining_ms_ = 0;
    const std::int64_t closed_at = t + cfg_.relay.actuation_delay_ms;
    out.push_back(event(closed_at, EventKind::JointClosed, why));
    now_ms_ = closed_at;
}

std::vector<AccessEvent> Card::tick(std::int64_t elapsed_ms) {
    if (elapsed_ms < 0)
        throw ValidationError("tick: elapsed must be >= 0");
    std::vector<AccessEvent> out;
    if (state_.mode == CardMode::Active) {
        if (elapsed_ms >= state_.session_remaining_ms) {
            const std::int64_t expiry = now_ms_ + state_.session_remaining_ms;
            enter_shielded();
            state_.indicator = Indicator::Off;
            out.push_back(event(expiry, EventKind::Timeout, "session expired"));
            out.push_back(event(expiry, EventKind::JointOpened, "relay released"));
        } else {
            state_.session_remaining_ms -= elapsed_ms;
        }
    } else if (state_.mode == CardMode::FirstFactorAccepted) {
        if (elapsed_ms >= pairing_remaining_ms_) {
            const std::int64_t expiry = now_ms_ + pairing_remaining_ms_;
            enter_shielded();
            state_.indicator = Indicator::Off;
            out.push_back(event(expiry, EventKind::Timeout, "pairing window expired"));
        } else {
            pairing_remaining_ms_ -= elapsed_ms;
        }
    }
    now_ms_ += elapsed_ms;
    return out;
}

Card::ScanOutcome Card::on_scan(const Scan& scan, std::int64_t clock_ms) {
    if (clock_ms < now_ms_)
        throw ValidationError("on_scan: clock must not run backwards");
    if (scan.points.size() > kMaxTemplatePoints)
        throw ValidationError("on_scan: scan has too many points");
    for (const auto& p : scan.points)
        p.validate();

    ScanOutcome result;
    append(result.events, tick(clock_ms - now_ms_));
    const std::int64_t t = now_ms_;

    // Best-verifying template; ties broken toward the lower label.
    const FingerprintTemplate* best = nullptr;
    double best_score = -1.0;
    for (const auto& tmpl : store_->all()) {
        if (!verify(scan, tmpl, cfg_.match_threshold))
            continue;
        const double score = match_score(scan, tmpl);
        if (score > best_score || (score == best_score && best && tmpl.label < best->label)) {
            best = &tmpl;
            best_score = score;
        }
    }

    if (state_.mode == CardMode::Alarm) {
        state_.indicator = Indicator::Red;
        result.events.push_back(event(t, EventKind::ScanRejected, "card is in alarm"));
        result.indicator = state_.indicator;
        return result;
    }

    if (best == nullptr) {
        // Unrecognized or non-live finger: treated as an unauthorized user.
        const bool was_active = state_.mode == CardMode::Active;
        enter_shielded();
        state_.indicator = Indicator::Blue;
        result.events.push_back(event(t, EventKind::ScanRejected, "no enrolled finger verified"));
        if (was_active)
            result.events.push_back(event(t, EventKind::JointOpened, "session revoked"));
        result.indicator = state_.indicator;
        return result;
    }

    const char label = best->label;
    switch (best->role) {
    case Role::AuthorizedWithPermission: {
        if (state_.mode == CardMode::Active) {
            state_.indicator = Indicator::Green;
            result.events.push_back(
                event(t, EventKind::ScanAccepted, std::string("session already active: ") + label));
        } else if (state_.mode == CardMode::FirstFactorAccepted &&
                   state_.first_factor_label != label) {
            result.events.push_back(
                event(t, EventKind::ScanAccepted, std::string("second factor: ") + label));
            enter_active(result.events, t, "two-factor authentication complete");
        } else if (state_.mode == CardMode::FirstFactorAccepted) {
            state_.indicator = Indicator::Off;
            result.events.push_back(
                event(t, EventKind::ScanAccepted, std::string("first factor repeated: ") + label));
        } else { // Shielded
            state_.mode = CardMode::FirstFactorAccepted;
            state_.first_factor_label = label;
            pairing_remaining_ms_ = cfg_.pairing_window_ms;
            state_.indicator = Indicator::Off;
            result.events.push_back(
                event(t, EventKind::ScanAccepted, std::string("first factor: ") + label));
        }
        break;
    }
    case Role::AuthorizedWithoutPermission: {
        const bool was_active = state_.mode == CardMode::Active;
        enter_shielded();
        state_.indicator = Indicator::Yellow;
        result.events.push_back(
            event(t, EventKind::ScanRejected, std::string("access denied: ") + label));
        if (was_active)
            result.events.push_back(event(t, EventKind::JointOpened, "session revoked"));
        break;
    }
    case Role::Unauthorized: {
        const bool was_active = state_.mode == CardMode::Active;
        enter_shielded();
        state_.indicator = Indicator::Blue;
        result.events.push_back(
            event(t, EventKind::ScanRejected, std::string("unauthorized finger: ") + label));
        if (was_active)
            result.events.push_back(event(t, EventKind::JointOpened, "session revoked"));
        break;
    }
    case Role::UnauthorizedFlagged: {
        const bool was_closed = state_.joint_closed;
        enter_shielded();
        state_.mode = CardMode::Alarm;
        state_.indicator = Indicator::Red;
        result.events.push_back(
            event(t, EventKind::ScanRejected, std::string("flagged finger: ") + label));
        if (was_closed)
            result.events.push_back(event(t, EventKind::JointOpened, "session revoked"));
        result.events.push_back(event(t, EventKind::Alarm, "further warning indicated"));
        break;
    }
    }
    result.indicator = state_.indicator;
    return result;
}

std::vector<AccessEvent> Card::tamper(TamperKind kind, bool shield_breached) {
    std::vector<AccessEvent> out;
    const std::int64_t t = now_ms_;
    if (kind == TamperKind::CableBridge) {
        // A bridge across the open joint does not recreate the antenna path.
        out.push_back(event(t, EventKind::Tamper, "cable bridge across the joint"));
        return out;
    }

    if (shield_breached && cfg_.allow_injection_success) {
        out.push_back(event(t, EventKind::Tamper, "5v injection: shield breached, joint forced"));
        enter_active(out, t, "joint forced by injection");
        return out;
    }

    const bool was_closed = state_.joint_closed;
    enter_shielded();
    state_.mode = CardMode::Alarm;
    state_.indicator = Indicator::Red;
    out.push_back(event(t, EventKind::Tamper, "5v injection detected"));
    if (was_closed)
        out.push_back(event(t, EventKind::JointOpened, "session revoked"));
    out.push_back(event(t, EventKind::Alarm, "injection attempt"));
    return out;
}

std::vector<AccessEvent> Card::reset() {
    std::vector<AccessEvent> out;
    const bool was_closed = state_.joint_closed;
    enter_shielded();
    state_.indicator = Indicator::Off;
    out.push_back(event(now_ms_, EventKind::Reset, "administrative reset"));
    if (was_closed)
        out.push_back(event(now_ms_, EventKind::JointOpened, "relay released"));
    return out;
}

std::optional<Frame> Card::respond(const Frame& frame) const {
    frame.validate();
    if (frame.direction != FrameDirection::ReaderToCard)
        throw ValidationError("respond: frame must travel reader-to-card");
    if (state_.mode != CardMode::Active)
        return std::nullopt; // unpowered tag
    switch (frame.kind) {
    case FrameKind::Reqa:
        return Frame{FrameDirection::CardToReader, FrameKind::Atqa, {0x04, 0x00}};
    case FrameKind::Select:
        return Frame{FrameDirection::CardToReader, FrameKind::UidResponse, cfg_.uid};
    default:
        return std::nullopt;
    }
}

CommunicationGate Card::gate() const {
    return CommunicationGate{{1}, {{state_.joint_closed ? 1 : 0}}};
}

long long Card::gate_value() const {
    return communication_process(gate());
}

const char* to_string(CardMode mode) {
    switch (mode) {
    case CardMode::Shielded: return "Shielded";
    case CardMode::FirstFactorAccepted: return "FirstFactorAccepted";
    case CardMode::Active: return "Active";
    case CardMode::Alarm: return "Alarm";
    }
    return "?";
}

const char* to_string(Indicator indicator) {
    switch (indicator) {
    case Indicator::Off: return "off";
    case Indicator::Green: return "green";
    case Indicator::Yellow: return "yellow";
    case Indicator::Blue: return "blue";
    case Indicator::Red: return "red";
    }
    return "?";
}

const char* to_string(TamperKind kind) {
    switch (kind) {
    case TamperKind::CableBridge: return "cable_bridge";
    case TamperKind::VoltageInjection5v: return "voltage_injection_5v";
    }
    return "?";
}

} // namespace clipcard
