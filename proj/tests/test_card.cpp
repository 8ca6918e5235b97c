#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "clipcard/card.hpp"
#include "clipcard/errors.hpp"
#include "test_support.hpp"

using namespace clipcard;
using namespace test_support;

namespace {

const TemplateStore& store() {
    static const TemplateStore s = make_store_abcde();
    return s;
}

Card fresh_card() {
    return Card(CardConfig{}, store());
}

Scan exact(char label, bool live) {
    return scan_of(*store().find(label), live);
}

bool has_event(const std::vector<AccessEvent>& events, EventKind kind) {
    for (const auto& ev : events)
        if (ev.kind == kind)
            return true;
    return false;
}

void check_state_consistent(const Card& card) {
    const CardState& st = card.state();
    CHECK(st.joint_closed == (st.mode == CardMode::Active));
    CHECK((st.session_remaining_ms > 0) == (st.mode == CardMode::Active));
    if (st.mode == CardMode::Shielded)
        CHECK_FALSE(st.joint_closed);
}

} // namespace

TEST_CASE("A then B grants: relay closed, green, gate open for traffic") {
    Card card = fresh_card();
    auto first = card.on_scan(exact('A', true), 0);
    CHECK(card.state().mode == CardMode::FirstFactorAccepted);
    CHECK(card.state().first_factor_label == 'A');
    CHECK(has_event(first.events, EventKind::ScanAccepted));
    CHECK_FALSE(card.state().joint_closed);

    auto second = card.on_scan(exact('B', true), 500);
    CHECK(card.state().mode == CardMode::Active);
    CHECK(card.state().joint_closed);
    CHECK(second.indicator == Indicator::Green);
    CHECK(has_event(second.events, EventKind::JointClosed));
    CHECK(card.gate_value() == 1);
    // relay actuation shows up in the event clock
    CHECK(card.now() == 500 + CardConfig{}.relay.actuation_delay_ms);
    check_state_consistent(card);
}

TEST_CASE("order is insensitive: B then A also grants") {
    Card card = fresh_card();
    card.on_scan(exact('B', true), 0);
    auto out = card.on_scan(exact('A', true), 100);
    CHECK(card.state().mode == CardMode::Active);
    CHECK(out.indicator == Indicator::Green);
}

TEST_CASE("indicator mapping: C yellow, D blue, E red") {
    {
        Card card = fresh_card();
        auto out = card.on_scan(exact('C', true), 0);
        CHECK(out.indicator == Indicator::Yellow);
        CHECK(card.state().mode == CardMode::Shielded);
        CHECK(has_event(out.events, EventKind::ScanRejected));
    }
    {
        Card card = fresh_card();
        auto out = card.on_scan(exact('D', true), 0);
        CHECK(out.indicator == Indicator::Blue);
        CHECK(card.state().mode == CardMode::Shielded);
    }
    {
        Card card = fresh_card();
        auto out = card.on_scan(exact('E', true), 0);
        CHECK(out.indicator == Indicator::Red);
        CHECK(card.state().mode == CardMode::Alarm);
        CHECK(has_event(out.events, EventKind::Alarm));
    }
}

TEST_CASE("unknown finger maps to the unauthorized branch") {
    Card card = fresh_card();
    Rng rng(1234);
    Scan stranger{random_points(rng, 8), true, 'Z'};
    auto out = card.on_scan(stranger, 0);
    CHECK(out.indicator == Indicator::Blue);
    CHECK(card.state().mode == CardMode::Shielded);
}

TEST_CASE("film replicas never close the joint") {
    Card card = fresh_card();
    card.on_scan(exact('A', false), 0);
    CHECK(card.state().mode == CardMode::Shielded);
    card.on_scan(exact('B', false), 500);
    CHECK(card.state().mode == CardMode::Shielded);
    CHECK_FALSE(card.state().joint_closed);
    CHECK(card.gate_value() == 0);
}

TEST_CASE("repeating the same finger is not a second factor") {
    Card card = fresh_card();
    card.on_scan(exact('A', true), 0);
    card.on_scan(exact('A', true), 100);
    CHECK(card.state().mode == CardMode::FirstFactorAccepted);
    CHECK_FALSE(card.state().joint_closed);
}

TEST_CASE("pairing window: inside grants, past the boundary does not") {
    {
        Card card = fresh_card();
        card.on_scan(exact('A', true), 0);
        card.on_scan(exact('B', true), 9999);
        CHECK(card.state().mode == CardMode::Active);
    }
    {
        Card card = fresh_card();
        card.on_scan(exact('A', true), 0);
        auto events = card.tick(10001);
        CHECK(card.state().mode == CardMode::Shielded);
        CHECK(has_event(events, EventKind::Timeout));
        card.on_scan(exact('B', true), 10001);
        CHECK(card.state().mode == CardMode::FirstFactorAccepted); // starts over
    }
}

TEST_CASE("session expiry: exact remaining time opens the joint") {
    Card card = fresh_card();
    card.on_scan(exact('A', true), 0);
    card.on_scan(exact('B', true), 100);
    REQUIRE(card.state().mode == CardMode::Active);

    auto events = card.tick(card.state().session_remaining_ms - 500);
    CHECK(card.state().mode == CardMode::Active);
    CHECK(events.empty());

    events = card.tick(500);
    CHECK(card.state().mode == CardMode::Shielded);
    CHECK_FALSE(card.state().joint_closed);
    CHECK(has_event(events, EventKind::Timeout));
    CHECK(has_event(events, EventKind::JointOpened));
    check_state_consistent(card);
}

TEST_CASE("tick on a shielded card is a no-op") {
    Card card = fresh_card();
    CHECK(card.tick(5000).empty());
    CHECK(card.state().mode == CardMode::Shielded);
    CHECK_THROWS_AS(card.tick(-1), ValidationError);
}

TEST_CASE("cable bridge changes nothing") {
    Card card = fresh_card();
    auto events = card.tamper(TamperKind::CableBridge, false);
    CHECK(card.state().mode == CardMode::Shielded);
    CHECK_FALSE(card.state().joint_closed);
    CHECK(has_event(events, EventKind::Tamper));
    CHECK(card.gate_value() == 0);
}

TEST_CASE("5v injection: detected by default, joint stays open") {
    Card card = fresh_card();
    auto events = card.tamper(TamperKind::VoltageInjection5v, false);
    CHECK(card.state().mode == CardMode::Alarm);
    CHECK_FALSE(card.state().joint_closed);
    CHECK(has_event(events, EventKind::Tamper));
    CHECK(has_event(events, EventKind::Alarm));
}

TEST_CASE("5v injection: breached shield plus the what-if flag closes the joint") {
    CardConfig cfg;
    cfg.allow_injection_success = true;
    Card card(cfg, store());
    auto events = card.tamper(TamperKind::VoltageInjection5v, true);
    CHECK(card.state().mode == CardMode::Active);
    CHECK(card.state().joint_closed);
    CHECK(has_event(events, EventKind::JointClosed));
    check_state_consistent(card);

    // breached shield without the flag still alarms
    Card safe = fresh_card();
    safe.tamper(TamperKind::VoltageInjection5v, true);
    CHECK(safe.state().mode == CardMode::Alarm);
}

TEST_CASE("alarm absorbs: scans cannot close the joint, only reset exits") {
    Card card = fresh_card();
    card.on_scan(exact('E', true), 0);
    REQUIRE(card.state().mode == CardMode::Alarm);

    card.on_scan(exact('A', true), 100);
    card.on_scan(exact('B', true), 200);
    CHECK(card.state().mode == CardMode::Alarm);
    CHECK_FALSE(card.state().joint_closed);
    card.tick(60000);
    CHECK(card.state().mode == CardMode::Alarm);

    auto events = card.reset();
    CHECK(card.state().mode == CardMode::Shielded);
    CHECK(has_event(events, EventKind::Reset));

    card.on_scan(exact('A', true), 70000);
    card.on_scan(exact('B', true), 70100);
    CHECK(card.state().mode == CardMode::Active);
}

TEST_CASE("respond: protocol steps gated on Active") {
    Card card = fresh_card();
    const Frame reqa{FrameDirection::ReaderToCard, FrameKind::Reqa, {0x26}};
    const Frame select{FrameDirection::ReaderToCard, FrameKind::Select, {0x93, 0x70}};

    CHECK_FALSE(card.respond(reqa).has_value()); // shielded: unpowered

    card.on_scan(exact('A', true), 0);
    card.on_scan(exact('B', true), 100);
    REQUIRE(card.state().mode == CardMode::Active);

    const auto atqa = card.respond(reqa);
    REQUIRE(atqa.has_value());
    CHECK(atqa->kind == FrameKind::Atqa);
    CHECK(atqa->direction == FrameDirection::CardToReader);

    const auto uid = card.respond(select);
    REQUIRE(uid.has_value());
    CHECK(uid->kind == FrameKind::UidResponse);
    CHECK(uid->payload == card.uid());

    CHECK_FALSE(card.respond({FrameDirection::ReaderToCard, FrameKind::Halt, {0x50}}).has_value());
    CHECK_THROWS_AS((void)card.respond({FrameDirection::CardToReader, FrameKind::Atqa, {}}),
                    ValidationError);
}

TEST_CASE("card requires exactly one permission pair") {
    TemplateStore missing;
    Rng rng(8);
    missing.enroll(random_points(rng, 8), 'A', Role::AuthorizedWithPermission);
    missing.enroll(random_points(rng, 8), 'C', Role::AuthorizedWithoutPermission);
    CHECK_THROWS_AS(Card(CardConfig{}, missing), ConfigError);

    TemplateStore triple;
    triple.enroll(random_points(rng, 8), 'A', Role::AuthorizedWithPermission);
    triple.enroll(random_points(rng, 8), 'B', Role::AuthorizedWithPermission);
    triple.enroll(random_points(rng, 8), 'F', Role::AuthorizedWithPermission);
    CHECK_THROWS_AS(Card(CardConfig{}, triple), ConfigError);
}

TEST_CASE("relay parameter validation") {
    RelayParameters relay;
    relay.coil_voltage_v = 200.0; // 200 V / 166 ohm > 1 A
    CardConfig cfg;
    cfg.relay = relay;
    CHECK_THROWS_AS(Card(cfg, store()), ValidationError);
}

TEST_CASE("model check: two distinct live permission fingers are necessary") {
    // Every scan sequence of length <= 4 over {A..E} x {live, film}. Whenever
    // the card reaches Active, the prefix up to that step must contain two
    // distinct live A/B fingers. State consistency holds at every step.
    const char labels[] = {'A', 'B', 'C', 'D', 'E'};
    long long sequences = 0, grants = 0;

    for (int len = 1; len <= 4; ++len) {
        std::vector<int> idx(len, 0);
        while (true) {
            Card card = fresh_card();
            std::set<char> live_pair_so_far;
            bool reached_active = false;
            for (int step = 0; step < len; ++step) {
                const char label = labels[idx[step] % 5];
                const bool live = idx[step] < 5;
                if (live && (label == 'A' || label == 'B'))
                    live_pair_so_far.insert(label);
                card.on_scan(exact(label, live), step * 1000);
                check_state_consistent(card);
                if (card.state().mode == CardMode::Active) {
                    reached_active = true;
                    CHECK(live_pair_so_far.size() >= 2);
                }
            }
            if (reached_active)
                ++grants;
            ++sequences;

            int carry = len - 1;
            while (carry >= 0 && ++idx[carry] == 10) {
                idx[carry] = 0;
                --carry;
            }
            if (carry < 0)
                break;
        }
    }
    CHECK(sequences == 10 + 100 + 1000 + 10000);
    CHECK(grants > 0); // A-B pairs exist in the enumeration
}

TEST_CASE("liveness gate: filming either factor of a granting pair blocks it") {
    for (int film_first : {0, 1}) {
        Card card = fresh_card();
        card.on_scan(exact('A', film_first == 0 ? false : true), 0);
        card.on_scan(exact('B', film_first == 1 ? false : true), 500);
        CHECK(card.state().mode != CardMode::Active);
        CHECK_FALSE(card.state().joint_closed);
    }
}

TEST_CASE("event timestamps never decrease along a trace") {
    Card card = fresh_card();
    std::vector<AccessEvent> trace;
    append(trace, card.on_scan(exact('A', true), 0).events);
    append(trace, card.tick(400));
    append(trace, card.on_scan(exact('B', true), 700).events);
    append(trace, card.tick(20000));
    append(trace, card.on_scan(exact('E', true), 30000).events);
    append(trace, card.reset());
    std::int64_t last = 0;
    for (const auto& ev : trace) {
        CHECK(ev.t_ms >= last);
        last = ev.t_ms;
    }
    CHECK_THROWS_AS(card.on_scan(exact('A', true), 0), ValidationError); // clock ran backwards
}
