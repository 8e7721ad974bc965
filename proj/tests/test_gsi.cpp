#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gsi/index.hpp"

using namespace gsi;

namespace {

const SafetyParams kP;

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("scalar index on worked inputs") {
    CHECK(gsi_hat(3.7, 0.0, kP).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gsi_hat(0.46, 0.0, kP).value == doctest::Approx(0.0).epsilon(1e-12));
    // Stopping distance 0.5 m: (2.08 - 0.96) / 3.24.
    CHECK(gsi_hat(2.08, 1.0, kP).value == doctest::Approx(1.12 / 3.24).epsilon(1e-9));
    // Receding: the stopping term flips sign, (2.0 + 0.04) / 3.24.
    CHECK(gsi_hat(2.0, -1.0, kP).value == doctest::Approx(2.04 / 3.24).epsilon(1e-9));
}

TEST_CASE("raw base is preserved unclamped while the report saturates") {
    const auto breach = gsi_hat(0.2, 1.0, kP);
    CHECK(breach.raw_base < 0.0);
    CHECK(breach.value == 0.0);
    const auto far = gsi_hat(20.0, 0.0, kP);
    CHECK(far.raw_base > 1.0);
    CHECK(far.value == 1.0);
}

TEST_CASE("scalar index validates input") {
    CHECK_THROWS_AS(gsi_hat(-1.0, 0.0, kP), std::invalid_argument);
    CHECK_THROWS_AS(gsi_hat(std::nan(""), 0.0, kP), std::invalid_argument);
    SafetyParams bad = kP;
    bad.tau = 0.0;
    CHECK_THROWS_AS(gsi_hat(1.0, 0.0, bad), std::invalid_argument);
}

TEST_CASE("monotone in distance, antitone in velocity") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ud(0.0, 8.0);
    std::uniform_real_distribution<double> uv(-2.5, 2.5);
    for (int trial = 0; trial < 3000; ++trial) {
        double d1 = ud(rng), d2 = ud(rng);
        if (d1 > d2) std::swap(d1, d2);
        const double v = uv(rng);
        CHECK(gsi_hat(d1, v, kP).value <= gsi_hat(d2, v, kP).value + 1e-12);

        double v1 = uv(rng), v2 = uv(rng);
        if (v1 > v2) std::swap(v1, v2);
        const double d = ud(rng);
        CHECK(gsi_hat(d, v1, kP).value + 1e-12 >= gsi_hat(d, v2, kP).value);
    }
}

TEST_CASE("continuity at v = 0") {
    for (double d : {0.3, 1.0, 2.0, 3.7, 5.0}) {
        const double at0 = gsi_hat(d, 0.0, kP).value;
        CHECK(std::abs(gsi_hat(d, 1e-6, kP).value - at0) < 1e-9);
        CHECK(std::abs(gsi_hat(d, -1e-6, kP).value - at0) < 1e-9);
    }
}

TEST_CASE("rho ordering: higher exponent never reads safer") {
    SafetyParams half = kP, one = kP, two = kP;
    half.rho = 0.5;
    two.rho = 2.0;
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ud(0.0, 8.0);
    std::uniform_real_distribution<double> uv(-2.5, 2.5);
    for (int trial = 0; trial < 5000; ++trial) {
        const double d = ud(rng), v = uv(rng);
        const double g2 = gsi_hat(d, v, two).value;
        const double g1 = gsi_hat(d, v, one).value;
        const double gh = gsi_hat(d, v, half).value;
        CHECK(g2 <= g1 + 1e-12);
        CHECK(g1 <= gh + 1e-12);
        const double base = gsi_hat(d, v, one).raw_base;
        if (base > 0.01 && base < 0.99) {
            CHECK(g2 < g1);
            CHECK(g1 < gh);
        }
    }
}

TEST_CASE("directional index on worked inputs") {
    CHECK(gsi_directional(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gsi_directional(0.0, kPi / 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gsi_directional(0.4, kPi / 6) ==
          doctest::Approx(1.0 - 0.6 * std::sqrt(3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("directional collapse and rear half-plane") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ug(0.0, 1.0);
    std::uniform_real_distribution<double> ua(kPi / 2, kPi);
    for (int trial = 0; trial < 1000; ++trial) {
        const double g = ug(rng);
        CHECK(gsi_directional(g, 0.0) == doctest::Approx(g).epsilon(1e-12));
        const double behind = ua(rng) * (rng() % 2 ? 1.0 : -1.0);
        CHECK(gsi_directional(g, behind) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gsi_directional(1.5, 0.0), std::invalid_argument);
}

TEST_CASE("collective smooth minimum on worked inputs") {
    const std::vector<double> v{0.7, 0.9, 0.4};
    // Closed form: with gaps >> tau the sum collapses to the minimum term,
    // leaving min + tau ln 3.
    CHECK(gsi_collective(v, 0.01) ==
          doctest::Approx(0.4 + 0.01 * std::log(3.0)).epsilon(1e-9));
    CHECK(gsi_collective(v, 0.01) == doctest::Approx(0.410986).epsilon(1e-4));

    CHECK(gsi_collective(std::vector<double>{0.37}, 5.0) == doctest::Approx(0.37));
    CHECK(gsi_collective(std::vector<double>{0.6, 0.6, 0.6}, 0.2) ==
          doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(gsi_collective(std::vector<double>{}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(gsi_collective(v, 0.0), std::invalid_argument);
}

TEST_CASE("smooth-min sandwich and temperature bound over random lists") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> ug(0.0, 1.0);
    std::uniform_real_distribution<double> ut(1e-3, 10.0);
    for (int trial = 0; trial < 12000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        std::vector<double> vals;
        for (int i = 0; i < n; ++i) vals.push_back(ug(rng));
        const double tau = ut(rng);
        const double c = gsi_collective(vals, tau);
        const double mn = *std::min_element(vals.begin(), vals.end());
        CHECK(c >= mn - 1e-12);
        CHECK(c <= mean_of(vals) + 1e-12);
        CHECK(c - mn <= tau * std::log(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("collective rises monotonically with temperature") {
    const std::vector<double> vals{0.7, 0.9, 0.4};
    double prev = -1.0;
    for (double tau : {0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0}) {
        const double c = gsi_collective(vals, tau);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
    CHECK(prev <= mean_of(vals) + 1e-12);
}

TEST_CASE("collective is permutation invariant") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> ug(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> vals;
        for (int i = 0; i < 6; ++i) vals.push_back(ug(rng));
        const double c = gsi_collective(vals, 0.01);
        std::shuffle(vals.begin(), vals.end(), rng);
        CHECK(gsi_collective(vals, 0.01) == doctest::Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("gradient points away from a single human dead ahead") {
    const Pose2 robot{0, 0, 0};
    const std::vector<WorldHuman> humans{{{2.0, 0.0}, 0.0}};
    const auto g = gsi_gradient(robot, humans, kP);
    CHECK(!g.flat);
    CHECK(g.vector.x < 0.0);
    CHECK(std::abs(g.vector.y) < 1e-9);
    CHECK(g.vector.norm() == doctest::Approx(g.collective).epsilon(1e-9));
    CHECK(g.collective == doctest::Approx(gsi_hat(2.0, 0.0, kP).value).epsilon(1e-9));
}

TEST_CASE("gradient is flat on the saturated plateau") {
    const Pose2 robot{0, 0, 0};
    const std::vector<WorldHuman> humans{{{30.0, 0.0}, -0.5}, {{0.0, 25.0}, -0.2}};
    const auto g = gsi_gradient(robot, humans, kP);
    CHECK(g.flat);
    CHECK(g.vector.x == 0.0);
    CHECK(g.vector.y == 0.0);
    CHECK(g.collective > 0.99);
}

TEST_CASE("symmetric humans cancel the lateral gradient component") {
    const Pose2 robot{0, 0, 0};
    const std::vector<WorldHuman> humans{{{2.0, 1.0}, 0.0}, {{2.0, -1.0}, 0.0}};
    for (double step : {0.01, 0.001}) {
        const auto g = gsi_gradient(robot, humans, kP, step);
        CHECK(std::abs(g.vector.y) < 1e-7);
        CHECK(g.vector.x < 0.0);
    }
}

TEST_CASE("two-step gradient directions agree in the smooth interior") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> ua(-1.2, 1.2);
    std::uniform_real_distribution<double> ud(1.6, 3.2);
    int tested = 0;
    while (tested < 100) {
        const Pose2 robot{0, 0, 0};
        std::vector<WorldHuman> humans;
        const int n = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
            const double a = ua(rng);
            const double d = ud(rng);
            humans.push_back({{d * std::cos(a), d * std::sin(a)}, 0.0});
        }
        // Keep per-human directional values well separated so the smooth
        // minimum does not switch branches inside the stencil.
        std::vector<double> dir;
        for (const auto& h : humans)
            dir.push_back(gsi_directional(
                gsi_hat(h.position.norm(), h.rel_velocity, kP).value,
                std::atan2(h.position.y, h.position.x)));
        std::sort(dir.begin(), dir.end());
        bool ok = dir.front() > 0.1 && dir.back() < 0.9;
        for (std::size_t i = 0; i + 1 < dir.size(); ++i)
            if (dir[i + 1] - dir[i] < 0.15) ok = false;
        if (!ok) continue;

        const auto g1 = gsi_gradient(robot, humans, kP, 0.01);
        const auto g2 = gsi_gradient(robot, humans, kP, 0.001);
        REQUIRE(!g1.flat);
        REQUIRE(!g2.flat);
        const double a1 = std::atan2(g1.vector.y, g1.vector.x);
        const double a2 = std::atan2(g2.vector.y, g2.vector.x);
        CHECK(std::abs(normalize_angle(a1 - a2)) < 1e-4);
        CHECK(g1.vector.norm() == doctest::Approx(g1.collective).epsilon(1e-9));
        ++tested;
    }
}

TEST_CASE("frame evaluation composes the per-human pipeline") {
    const Pose2 robot{0, 0, 0};

    SUBCASE("no humans reports collective as not applicable") {
        const auto frame =
            evaluate_frame(robot, std::span<const IdentifiedState>{}, kP, 1.5);
        CHECK(frame.per_human.empty());
        CHECK(!frame.collective);
        CHECK(!frame.gradient);
    }

    SUBCASE("intimate boundary human zeroes the collective") {
        const std::vector<IdentifiedState> states{{7, {0.46, 0.0, 0.0}, false}};
        const auto frame = evaluate_frame(robot, states, kP);
        REQUIRE(frame.per_human.size() == 1);
        CHECK(frame.per_human[0].gsi_hat == doctest::Approx(0.0));
        CHECK(frame.per_human[0].zone == Zone::Intimate);
        // Standing exactly on the intimate boundary: the tie goes to the
        // unsafe row, consistent with the zero index value.
        CHECK(frame.per_human[0].scenario.id == ScenarioId::F);
        REQUIRE(frame.collective);
        CHECK(*frame.collective == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("three directional values reproduce the collective oracle") {
        // Bearings chosen so cos(theta) scales each scalar index onto the
        // target directional values 0.7 / 0.9 / 0.4.
        std::vector<IdentifiedState> states;
        auto solve = [&](double target, int id) {
            // Place the human at theta = 0 with distance chosen so that
            // the scalar index equals the target directly.
            const double d = kP.d_min + target * (kP.d_max - kP.d_min);
            states.push_back({id, {d, 0.0, 0.0}, false});
        };
        solve(0.7, 1);
        solve(0.9, 2);
        solve(0.4, 3);
        const auto frame = evaluate_frame(robot, states, kP);
        REQUIRE(frame.collective);
        CHECK(*frame.collective == doctest::Approx(0.410986).epsilon(1e-4));
    }

    SUBCASE("sandwich invariant holds on random frames") {
        std::mt19937_64 rng(59);
        std::uniform_real_distribution<double> ud(0.2, 6.0);
        std::uniform_real_distribution<double> uv(-2.0, 2.0);
        std::uniform_real_distribution<double> ua(-kPi, kPi);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<IdentifiedState> states;
            const int n = 1 + static_cast<int>(rng() % 5);
            for (int i = 0; i < n; ++i)
                states.push_back({i, {ud(rng), uv(rng), ua(rng)}, false});
            const auto frame = evaluate_frame(robot, states, kP);
            REQUIRE(frame.collective);
            std::vector<double> dir;
            for (const auto& ph : frame.per_human) {
                CHECK(ph.gsi_hat >= 0.0);
                CHECK(ph.gsi_hat <= 1.0);
                CHECK(ph.gsi_directional >= 0.0);
                CHECK(ph.gsi_directional <= 1.0);
                dir.push_back(ph.gsi_directional);
            }
            const double mn = *std::min_element(dir.begin(), dir.end());
            CHECK(*frame.collective >= mn - 1e-12);
            CHECK(*frame.collective <= mean_of(dir) + 1e-12);
        }
    }
}

TEST_CASE("frame evaluation skips tracks without a valid state") {
    EstimatorConfig cfg;
    std::vector<HumanTrack> tracks{HumanTrack(1), HumanTrack(2)};
    for (int f = 0; f < 3; ++f) tracks[0].update(3.0 - 0.01 * f, 0.0, f, cfg);
    tracks[1].update(2.0, 0.0, 0, cfg);  // still warming up

    const auto frame =
        evaluate_frame(Pose2{0, 0, 0}, std::span<const HumanTrack>(tracks), SafetyParams{});
    REQUIRE(frame.per_human.size() == 1);
    CHECK(frame.per_human[0].human_id == 1);
}
