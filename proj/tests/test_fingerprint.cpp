#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "clipcard/errors.hpp"
#include "clipcard/fingerprint.hpp"
#include "test_support.hpp"

using namespace clipcard;
using namespace test_support;

namespace {

// Fixed template used by the golden-capture regression below.
const FingerprintTemplate kGolden{
    'G',
    Role::Unauthorized,
    {
        {0.87180237671619998, 0.97082657660693894, 295.9858033075293, MinutiaKind::Bifurcation},
        {0.5844899599919211, 0.55810159589226871, 5.2909407587811046, MinutiaKind::RidgeEnding},
        {0.93003531405283635, 0.38192838605833374, 157.0663340179234, MinutiaKind::Bifurcation},
        {0.38711118099199149, 0.34423175997525962, 280.39949538592327, MinutiaKind::Bifurcation},
        {0.95364945970854642, 0.17599084295421347, 38.004702285866962, MinutiaKind::Bifurcation},
        {0.042530044611884255, 0.028526347846495666, 301.79971018694192,
         MinutiaKind::RidgeEnding},
        {0.56402916074795739, 0.80370087054925798, 48.43652814854682, MinutiaKind::RidgeEnding},
        {0.26256790089962523, 0.33678619284369871, 108.25849287587535, MinutiaKind::Bifurcation},
    }};

// First run under seed 7 (noise 0.02, dropout 0.1), frozen as the regression
// snapshot.
const std::vector<MinutiaPoint> kGoldenCapture{
    {0.90794469442149772, 0.99745787257793894, 296.65317053097556, MinutiaKind::Bifurcation},
    {0.58140121124490896, 0.53046976824905978, 3.8434583680815422, MinutiaKind::RidgeEnding},
    {0.94705511255699637, 0.42446305024090725, 154.77267064448483, MinutiaKind::Bifurcation},
    {0.39292565698018145, 0.34925485820697233, 278.53667375577504, MinutiaKind::Bifurcation},
    {0.92497772712990101, 0.17549547197241572, 32.300517688673438, MinutiaKind::Bifurcation},
    {0.037012887096230372, 0.031100251548498416, 299.73843843065754, MinutiaKind::RidgeEnding},
    {0.58193322365108002, 0.79108927166516341, 47.263518495773781, MinutiaKind::RidgeEnding},
    {0.25000228666583085, 0.32338619770258109, 111.56018779858857, MinutiaKind::Bifurcation},
};

} // namespace

TEST_CASE("enroll: bounds, duplicates, retrieval") {
    Rng rng(5);
    TemplateStore store;
    const auto& a = store.enroll(random_points(rng, 8), 'A', Role::AuthorizedWithPermission);
    CHECK(a.label == 'A');
    CHECK(store.find('A') == &a);
    CHECK(store.find('Z') == nullptr);

    CHECK_THROWS_AS(store.enroll(random_points(rng, 3), 'B', Role::Unauthorized),
                    ValidationError);
    CHECK_THROWS_AS(store.enroll(random_points(rng, 41), 'B', Role::Unauthorized),
                    ValidationError);
    CHECK_THROWS_AS(store.enroll(random_points(rng, 8), 'A', Role::Unauthorized), ConflictError);

    std::vector<MinutiaPoint> bad = random_points(rng, 8);
    bad[0].x = 1.5;
    CHECK_THROWS_AS(store.enroll(bad, 'B', Role::Unauthorized), ValidationError);
    bad[0].x = 0.5;
    bad[0].orientation = 360.0;
    CHECK_THROWS_AS(store.enroll(bad, 'B', Role::Unauthorized), ValidationError);
}

TEST_CASE("store round-trips through JSON") {
    const TemplateStore store = make_store_abcde();
    const auto path = std::filesystem::temp_directory_path() / "clipcard_store_rt.json";
    store.save(path);
    const TemplateStore back = TemplateStore::load(path);
    REQUIRE(back.size() == store.size());
    for (const auto& t : store.all()) {
        const auto* other = back.find(t.label);
        REQUIRE(other != nullptr);
        CHECK(other->role == t.role);
        REQUIRE(other->points.size() == t.points.size());
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            CHECK(other->points[i].x == doctest::Approx(t.points[i].x).epsilon(1e-12));
            CHECK(other->points[i].orientation ==
                  doctest::Approx(t.points[i].orientation).epsilon(1e-12));
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("capture: zero noise is the identity, full dropout empties the scan") {
    const Scan clean = capture(kGolden, 0.0, 0.0, true, std::uint64_t{1});
    REQUIRE(clean.points.size() == kGolden.points.size());
    for (std::size_t i = 0; i < clean.points.size(); ++i) {
        CHECK(clean.points[i].x == kGolden.points[i].x);
        CHECK(clean.points[i].y == kGolden.points[i].y);
        CHECK(clean.points[i].orientation == kGolden.points[i].orientation);
    }
    CHECK(clean.claimed_source == 'G');

    const Scan empty = capture(kGolden, 0.02, 1.0, true, std::uint64_t{1});
    CHECK(empty.points.empty());
}

TEST_CASE("capture: golden snapshot under seed 7") {
    const Scan snap = capture(kGolden, 0.02, 0.1, true, std::uint64_t{7});
    REQUIRE(snap.points.size() == kGoldenCapture.size());
    for (std::size_t i = 0; i < snap.points.size(); ++i) {
        CHECK(snap.points[i].x == doctest::Approx(kGoldenCapture[i].x).epsilon(1e-12));
        CHECK(snap.points[i].y == doctest::Approx(kGoldenCapture[i].y).epsilon(1e-12));
        CHECK(snap.points[i].orientation ==
              doctest::Approx(kGoldenCapture[i].orientation).epsilon(1e-12));
        CHECK(snap.points[i].kind == kGoldenCapture[i].kind);
    }
}

TEST_CASE("capture: identical seeds give identical scans") {
    for (std::uint64_t seed : {3ull, 99ull, 123456789ull}) {
        const Scan a = capture(kGolden, 0.03, 0.2, true, seed);
        const Scan b = capture(kGolden, 0.03, 0.2, true, seed);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].x == b.points[i].x);
            CHECK(a.points[i].y == b.points[i].y);
            CHECK(a.points[i].orientation == b.points[i].orientation);
        }
    }
}

TEST_CASE("match_score: identity, disjoint, empty") {
    CHECK(match_score(scan_of(kGolden, true), kGolden) == 1.0);

    Scan far_scan = scan_of(kGolden, true);
    for (auto& p : far_scan.points) {
        p.x = p.x < 0.5 ? p.x + 0.45 : p.x - 0.45;
        p.y = p.y < 0.5 ? p.y + 0.45 : p.y - 0.45;
    }
    CHECK(match_score(far_scan, kGolden) == 0.0);

    CHECK(match_score(Scan{{}, true, 'G'}, kGolden) == 0.0);
    CHECK_THROWS_AS((void)match_score(scan_of(kGolden, true),
                                FingerprintTemplate{'X', Role::Unauthorized, {}}),
                    ValidationError);
}

TEST_CASE("match_score stays within [0,1]") {
    Rng rng(404);
    for (int i = 0; i < 100; ++i) {
        FingerprintTemplate t{'T', Role::Unauthorized, random_points(rng, rng.uniform_int(4, 8))};
        Scan s{random_points(rng, rng.uniform_int(1, 8)), true, 'T'};
        const double score = match_score(s, t);
        CHECK(score >= 0.0);
        CHECK(score <= 1.0);
    }
}

TEST_CASE("greedy pairing is within 0.05 of the exhaustive optimum") {
    Rng rng(7919);
    for (int i = 0; i < 200; ++i) {
        FingerprintTemplate t{'T', Role::Unauthorized, random_points(rng, rng.uniform_int(4, 8))};
        Scan s = capture(t, 0.02, 0.1, true, rng);
        while (s.points.size() > 8)
            s.points.pop_back();
        const double greedy = s.points.empty() ? 0.0 : match_score(s, t);
        CHECK(greedy >= optimal_score(s, t) - 0.05);
    }
}

TEST_CASE("verify: liveness gates everything") {
    CHECK_FALSE(verify(scan_of(kGolden, false), kGolden));
    CHECK(verify(scan_of(kGolden, true), kGolden));

    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        FingerprintTemplate t{'T', Role::Unauthorized, random_points(rng, 8)};
        const Scan film = capture(t, 0.0, 0.0, false, rng);
        for (double threshold : {0.0, 0.3, 0.6, 1.0})
            CHECK_FALSE(verify(film, t, threshold));
    }
}

TEST_CASE("verify: threshold boundary is inclusive from above only") {
    // 12-point template, 7 exact + 5 displaced points: score 7/12 < 0.6
    Rng rng(92);
    FingerprintTemplate t{'T', Role::Unauthorized, random_points(rng, 12)};
    Scan s = scan_of(t, true);
    for (std::size_t i = 7; i < s.points.size(); ++i)
        s.points[i].x = s.points[i].x < 0.5 ? s.points[i].x + 0.4 : s.points[i].x - 0.4;
    CHECK(match_score(s, t) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK_FALSE(verify(s, t, 0.6));

    // 5-point template with 2 displaced: score exactly 3/5 = threshold
    FingerprintTemplate t5{'U', Role::Unauthorized, random_points(rng, 5)};
    Scan s5 = scan_of(t5, true);
    s5.points[3].x = s5.points[3].x < 0.5 ? s5.points[3].x + 0.4 : s5.points[3].x - 0.4;
    s5.points[4].y = s5.points[4].y < 0.5 ? s5.points[4].y + 0.4 : s5.points[4].y - 0.4;
    CHECK(match_score(s5, t5) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(verify(s5, t5, 0.6));
}

TEST_CASE("far_frr: degenerate thresholds and the frozen operating point") {
    const TemplateStore store = make_store_abcde();

    const auto at0 = far_frr(store, 0.0, 50, 11);
    CHECK(at0.frr == 0.0);
    CHECK(at0.far == 1.0); // any live capture clears a zero threshold

    const auto at1 = far_frr(store, 1.0, 50, 11);
    CHECK(at1.frr >= 0.8); // exact match almost never survives the noise

    const auto op = far_frr(store, 0.6, 200, 11);
    CHECK(op.far == doctest::Approx(0.0));
    CHECK(op.frr == doctest::Approx(0.236).epsilon(1e-12));
}

TEST_CASE("far_frr: validation and determinism") {
    TemplateStore tiny;
    Rng rng(6);
    tiny.enroll(random_points(rng, 8), 'A', Role::AuthorizedWithPermission);
    CHECK_THROWS_AS(far_frr(tiny, 0.6, 10, 1), ValidationError);

    const TemplateStore store = make_store_abcde();
    CHECK_THROWS_AS(far_frr(store, 0.6, 0, 1), ValidationError);

    const auto a = far_frr(store, 0.5, 60, 17);
    const auto b = far_frr(store, 0.5, 60, 17);
    CHECK(a.far == b.far);
    CHECK(a.frr == b.frr);
}

TEST_CASE("FAR falls and FRR rises as the threshold sweeps up") {
    const TemplateStore store = make_store_abcde();
    double prev_far = 1.1, prev_frr = -0.1;
    for (int i = 0; i <= 10; ++i) {
        const double threshold = i / 10.0;
        const auto rates = far_frr(store, threshold, 100, 11);
        CHECK(rates.far <= prev_far + 1e-15);
        CHECK(rates.frr >= prev_frr - 1e-15);
        prev_far = rates.far;
        prev_frr = rates.frr;
    }
}
