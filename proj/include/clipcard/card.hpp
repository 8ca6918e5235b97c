#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clipcard/channel.hpp"
#include "clipcard/events.hpp"
#include "clipcard/fingerprint.hpp"

namespace clipcard {

struct CommunicationGate;

/// The joint actuator: a miniature relay (defaults 5 V, 1 A, 166 ohm coil).
struct RelayParameters {
    double coil_voltage_v = 5.0;
    double max_current_a = 1.0;
    double coil_resistance_ohm = 166.0;
    std::int64_t actuation_delay_ms = 5;

    void validate() const;
};

enum class CardMode { Shielded, FirstFactorAccepted, Active, Alarm };

enum class Indicator { Off, Green, Yellow, Blue, Red };

/// joint_closed holds exactly in Active; session_remaining is positive only
/// in Active. Outside Active the indicator is a momentary cue, not a steady
/// output.
struct CardState {
    CardMode mode = CardMode::Shielded;
    Indicator indicator = Indicator::Off;
    bool joint_closed = false;
    std::int64_t session_remaining_ms = 0;
    std::optional<char> first_factor_label;
};

enum class TamperKind { CableBridge, VoltageInjection5v };

struct CardConfig {
    std::vector<std::uint8_t> uid{0x04, 0xA1, 0xB2, 0xC3};
    double match_threshold = kDefaultMatchThreshold;
    std::int64_t pairing_window_ms = 10'000;
    std::int64_t session_timeout_ms = 10'000;
    RelayParameters relay;
    // What-if switches for red-team runs: model a breached tamper shield and
    // let a 5 V injection actually close the joint.
    bool tamper_shield_breached = false;
    bool allow_injection_success = false;

    void validate() const;
};

/// Control unit of the card. Grants a session only after two distinct
/// enrolled permission-holding fingers verify within the pairing window;
/// drives the joint relay and the indicator LEDs; absorbs into Alarm on a
/// flagged finger or a detected injection.
///
/// A Card is a single logical actor: drive it from one thread at a time.
class Card {
public:
    /// Requires the store to hold exactly one authorized_with_permission
    /// pair; throws ConfigError otherwise.
    Card(CardConfig cfg, const TemplateStore& store);

    struct ScanOutcome {
        Indicator indicator = Indicator::Off;
        std::vector<AccessEvent> events;
    };

    /// Advances the clock to `clock_ms`, then matches the scan against the
    /// store and transitions. The scan verifies against the template with the
    /// highest passing score; its role decides the branch.
    ScanOutcome on_scan(const Scan& scan, std::int64_t clock_ms);

    /// Advances time: counts down the Active session and the pairing window,
    /// opening the joint / dropping back to Shielded on expiry.
    std::vector<AccessEvent> tick(std::int64_t elapsed_ms);

    std::vector<AccessEvent> tamper(TamperKind kind, bool shield_breached);

    /// Administrative reset: the only exit from Alarm.
    std::vector<AccessEvent> reset();

    /// Air-interface behaviour: answers REQA with ATQA and SELECT with the
    /// UID, but only in Active; everywhere else the tag is unpowered.
    [[nodiscard]] std::optional<Frame> respond(const Frame& frame) const;

    [[nodiscard]] const CardState& state() const { return state_; }
    [[nodiscard]] std::int64_t now() const { return now_ms_; }
    [[nodiscard]] const std::vector<std::uint8_t>& uid() const { return cfg_.uid; }
    [[nodiscard]] const CardConfig& config() const { return cfg_; }

    /// The R_i / A_ij view of this card: one tag, one joint.
    [[nodiscard]] CommunicationGate gate() const;
    [[nodiscard]] long long gate_value() const;

private:
    AccessEvent event(std::int64_t t, EventKind kind, std::string detail) const;
    void enter_shielded();
    void enter_active(std::vector<AccessEvent>& out, std::int64_t t, const std::string& why);

    CardConfig cfg_;
    const TemplateStore* store_;
    CardState state_;
    std::int64_t now_ms_ = 0;
    std::int64_t pairing_remaining_ms_ = 0;
};

const char* to_string(CardMode mode);
const char* to_string(Indicator indicator);
const char* to_string(TamperKind kind);

} // namespace clipcard
