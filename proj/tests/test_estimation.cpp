#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "gsi/estimation.hpp"

using namespace gsi;

namespace {

const EstimatorConfig kCfg;

}  // namespace

TEST_CASE("keypoint fusion on known inputs") {
    std::vector<KeypointDetection> kps{{0, 2.0, 0.95}};
    CHECK(*fuse_keypoints(kps, kCfg) == doctest::Approx(2.0).epsilon(1e-12));

    kps = {{0, 2.0, 0.9}, {1, 3.0, 0.9}};
    CHECK(*fuse_keypoints(kps, kCfg) == doctest::Approx(2.5).epsilon(1e-12));

    // The low-confidence keypoint is filtered by the 0.9 threshold.
    kps = {{0, 2.0, 0.95}, {1, 3.0, 0.5}};
    CHECK(*fuse_keypoints(kps, kCfg) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fusion returns no detection when nothing passes the threshold") {
    std::vector<KeypointDetection> kps{{0, 2.0, 0.5}, {1, 3.0, 0.1}};
    CHECK(!fuse_keypoints(kps, kCfg));
    CHECK(!fuse_keypoints({}, kCfg));
}

TEST_CASE("fusion rejects invalid keypoints") {
    std::vector<KeypointDetection> kps{{0, -1.0, 0.95}};
    CHECK_THROWS_AS(fuse_keypoints(kps, kCfg), std::invalid_argument);
    kps = {{0, 1.0, 1.5}};
    CHECK_THROWS_AS(fuse_keypoints(kps, kCfg), std::invalid_argument);
}

TEST_CASE("fusion is a convex combination, invariant to keypoint order") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ud(0.1, 10.0);
    std::uniform_real_distribution<double> uc(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<KeypointDetection> kps;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < n; ++k) kps.push_back({k, ud(rng), uc(rng)});

        const auto fused = fuse_keypoints(kps, kCfg);
        double lo = 1e30, hi = -1e30;
        bool any = false;
        for (const auto& kp : kps) {
            if (kp.confidence < kCfg.confidence_threshold) continue;
            any = true;
            lo = std::min(lo, kp.rel_distance);
            hi = std::max(hi, kp.rel_distance);
        }
        CHECK(fused.has_value() == any);
        if (fused) {
            CHECK(*fused >= lo - 1e-12);
            CHECK(*fused <= hi + 1e-12);
        }
        std::shuffle(kps.begin(), kps.end(), rng);
        const auto refused = fuse_keypoints(kps, kCfg);
        CHECK(fused.has_value() == refused.has_value());
        if (fused) CHECK(*fused == doctest::Approx(*refused).epsilon(1e-12));
    }
}

TEST_CASE("velocity estimate on known profiles") {
    auto v = estimate_velocity(3.0, 2.5, 2.0, 1.0);
    CHECK(v.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(!v.degraded);

    v = estimate_velocity(2.0, 2.5, 3.0, 0.5);
    CHECK(v.value == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(!v.degraded);

    v = estimate_velocity(1.7, 1.7, 1.7, 0.25);
    CHECK(v.value == 0.0);
    CHECK(!v.degraded);
}

TEST_CASE("velocity estimate is exact for constant-velocity linear profiles") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ud0(0.5, 10.0);
    std::uniform_real_distribution<double> uk(0.1, 2.0);
    std::uniform_real_distribution<double> uT(1.0 / 60.0, 0.5);
    for (int trial = 0; trial < 2000; ++trial) {
        const double d0 = ud0(rng);
        const double k = uk(rng) * (rng() % 2 ? 1.0 : -1.0);
        const double T = uT(rng);
        const double d1 = d0 + k * T;
        const double d2 = d0 + 2.0 * k * T;
        if (d1 <= 0.0 || d2 <= 0.0) continue;
        const auto v = estimate_velocity(d0, d1, d2, T);
        CHECK(!v.degraded);
        CHECK(std::abs(v.value - (-k)) < 1e-9);
    }
}

TEST_CASE("negative radicand falls back to the first difference, flagged") {
    // Non-monotone motion: d bulges in the middle; the second difference of
    // squares goes negative.
    const auto v = estimate_velocity(1.0, 2.0, 1.0, 1.0);
    CHECK(v.degraded);
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("velocity estimate validates input") {
    CHECK_THROWS_AS(estimate_velocity(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_velocity(-1.0, 1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("track emits a state only after three consecutive samples") {
    HumanTrack track(1);
    track.update(3.0, 0.0, 0, kCfg);
    CHECK(!track.latest_state());
    track.update(2.5, 0.0, 1, kCfg);
    CHECK(!track.latest_state());
    track.update(2.0, 0.0, 2, kCfg);
    REQUIRE(track.latest_state());
    CHECK(track.latest_state()->distance == doctest::Approx(2.0));
    // Per-frame delta of 0.5 m at 30 Hz reads as 15 m/s closing; T must
    // match the true sample spacing.
    CHECK(track.latest_state()->rel_velocity == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("no state is ever computed across a dropout gap") {
    HumanTrack track(1);
    track.update(3.0, 0.0, 0, kCfg);
    track.update(2.5, 0.0, 1, kCfg);
    track.update(std::nullopt, 0.0, 2, kCfg);
    CHECK(!track.latest_state());
    // Two fresh samples after the gap are not enough.
    track.update(2.0, 0.0, 3, kCfg);
    track.update(1.9, 0.0, 4, kCfg);
    CHECK(!track.latest_state());
    track.update(1.8, 0.0, 5, kCfg);
    CHECK(track.latest_state());
}

TEST_CASE("dropout longer than the timeout restarts the warmup") {
    HumanTrack track(2);
    for (int f = 0; f < 3; ++f) track.update(3.0 - 0.1 * f, 0.0, f, kCfg);
    CHECK(track.latest_state());
    std::int64_t f = 3;
    for (; f < 3 + kCfg.dropout_timeout + 2; ++f) track.update(std::nullopt, 0.0, f, kCfg);
    CHECK(track.stale(f, kCfg));
    CHECK(track.history_size() == 0);
    track.update(2.0, 0.0, f++, kCfg);
    track.update(1.9, 0.0, f++, kCfg);
    CHECK(!track.latest_state());
    track.update(1.8, 0.0, f++, kCfg);
    CHECK(track.latest_state());
}

TEST_CASE("track rejects non-increasing frame indices") {
    HumanTrack track(1);
    track.update(3.0, 0.0, 5, kCfg);
    CHECK_THROWS_AS(track.update(2.9, 0.0, 5, kCfg), std::invalid_argument);
    CHECK_THROWS_AS(track.update(2.9, 0.0, 4, kCfg), std::invalid_argument);
}

TEST_CASE("estimator config validation") {
    EstimatorConfig bad;
    bad.confidence_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.sample_period = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.dropout_timeout = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
