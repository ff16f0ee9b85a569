#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "adrx/channel_response.hpp"
#include "adrx/series.hpp"
#include "adrx/simulator.hpp"

using namespace adrx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Vec3 kOrigin{0.0, 0.0, 0.0};

ChannelParams baseline_channel(double k1) {
    ChannelParams p;
    p.D = 8.0;
    p.r0 = 11.0;
    p.rr = 10.0;
    p.k1 = k1;
    p.km1 = 5.0;
    p.ntx = 1000;
    return p;
}

} // namespace

TEST_CASE("adsorption probability follows the frozen samples", "[simulator]") {
    REQUIRE_THAT(adsorption_probability(20.0, 1e-4, 8.0),
                 WithinRel(0.12533141373155003, 1e-14));
    REQUIRE_THAT(adsorption_probability(40.0, 1e-5, 8.0),
                 WithinRel(0.07926654595212022, 1e-14));
    REQUIRE(adsorption_probability(0.0, 1e-4, 8.0) == 0.0);
    // Oversized k1 dt combinations clamp to certainty instead of overflowing.
    REQUIRE(adsorption_probability(1e9, 1e-4, 8.0) == 1.0);
}

TEST_CASE("desorption probability follows the frozen samples", "[simulator]") {
    REQUIRE_THAT(desorption_probability(5.0, 1e-4),
                 WithinRel(0.00049987502083072943, 1e-14));
    REQUIRE(desorption_probability(0.0, 1e-4) == 0.0);
    REQUIRE_THAT(desorption_probability(1e9, 1e-4), WithinAbs(1.0, 1e-12));
}

TEST_CASE("desorption displacement law", "[simulator]") {
    const double scale = std::sqrt(2.0 * 8.0 * 1e-4);
    REQUIRE(detail::desorption_component(0.0, scale) == 0.0);
    REQUIRE_THAT(detail::desorption_component(0.5, scale),
                 WithinRel(0.016111652945246904, 1e-14));

    // Strictly increasing in the uniform draw over its whole domain.
    double prev = 0.0;
    for (int i = 1; i <= 999; ++i) {
        const double cur = detail::desorption_component(i * 1e-3, scale);
        REQUIRE(cur > prev);
        prev = cur;
    }

    RandomStream rng(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 d = desorption_displacement(rng, 8.0, 1e-4);
        REQUIRE(d.x >= 0.0);
        REQUIRE(d.y >= 0.0);
        REQUIRE(d.z >= 0.0);
    }
}

TEST_CASE("desorbed molecules move outward on every axis", "[simulator]") {
    RandomStream rng(1, 0);

    const Vec3 a = place_desorbed(Vec3{10.0, 0.0, 0.0}, kOrigin,
                                  Vec3{0.01, 0.02, 0.005}, rng);
    REQUIRE(a.x == 10.01);
    REQUIRE(std::abs(a.y) == 0.02);  // no radial direction on this axis:
    REQUIRE(std::abs(a.z) == 0.005); // the sign is drawn at random

    const Vec3 b = place_desorbed(Vec3{-10.0, 0.0, 0.0}, kOrigin,
                                  Vec3{0.01, 0.0, 0.0}, rng);
    REQUIRE(b.x == -10.01);
    REQUIRE(b.y == 0.0);
    REQUIRE(b.z == 0.0);

    // Zero displacement leaves the position untouched.
    const Vec3 c = place_desorbed(Vec3{3.0, -4.0, 5.0}, kOrigin,
                                  Vec3{0.0, 0.0, 0.0}, rng);
    REQUIRE(c.x == 3.0);
    REQUIRE(c.y == -4.0);
    REQUIRE(c.z == 5.0);

    // Off-center receivers displace relative to their own center.
    const Vec3 d = place_desorbed(Vec3{15.0, 5.0, 5.0}, Vec3{5.0, 5.0, 5.0},
                                  Vec3{0.1, 0.0, 0.0}, rng);
    REQUIRE(d.x == 15.1);
    REQUIRE(d.y == 5.0);
    REQUIRE(d.z == 5.0);
}

TEST_CASE("emission places molecules at distance r0", "[simulator]") {
    const auto p = baseline_channel(20.0);
    const ReceiverGeometry geom(kOrigin, p.rr);
    RandomStream rng(7, 0);

    TrialState shell = init_trial(p, geom, EmissionMode::Shell, rng);
    REQUIRE(shell.molecules.size() == p.ntx);
    REQUIRE(shell.n_free == p.ntx);
    REQUIRE(shell.n_adsorbed == 0);
    for (const auto& m : shell.molecules) {
        REQUIRE(m.state == MoleculeState::Free);
        REQUIRE_THAT(geom.distance_to_center(m.position),
                     WithinRel(p.r0, 1e-12));
    }

    TrialState point = init_trial(p, geom, EmissionMode::Point, rng);
    for (const auto& m : point.molecules) {
        REQUIRE(m.position.x == p.r0);
        REQUIRE(m.position.y == 0.0);
        REQUIRE(m.position.z == 0.0);
    }
}

TEST_CASE("a distant molecule never touches the receiver", "[simulator]") {
    ChannelParams p;
    p.D = 8.0;
    p.r0 = 1000.0;
    p.rr = 10.0;
    p.k1 = 1e9; // every collision would stick
    p.km1 = 0.0;
    p.ntx = 1;
    const ReceiverGeometry geom(kOrigin, p.rr);
    RandomStream rng(12345, 0);
    TrialState st = init_trial(p, geom, EmissionMode::Point, rng);

    for (int i = 0; i < 100000; ++i) step(st, p, geom, 1e-4, rng);
    REQUIRE(st.n_adsorbed == 0);
    REQUIRE(st.window_adsorbed == 0);
    REQUIRE(st.n_free == 1);
}

TEST_CASE("molecule count is conserved under aggressive kinetics",
          "[simulator]") {
    ChannelParams p;
    p.D = 10.0;
    p.r0 = 10.5;
    p.rr = 10.0;
    p.k1 = 80.0;
    p.km1 = 200.0;
    p.ntx = 500;
    const ReceiverGeometry geom(kOrigin, p.rr);
    RandomStream rng(77, 0);
    TrialState st = init_trial(p, geom, EmissionMode::Shell, rng);

    for (int i = 0; i < 2000; ++i) {
        step(st, p, geom, 1e-4, rng); // throws StateCorruption on violation
        REQUIRE(st.n_free + st.n_adsorbed == p.ntx);
    }
    REQUIRE(st.n_adsorbed > 0); // the kinetics actually fired
    REQUIRE(st.window_desorbed > 0);
}

TEST_CASE("free-diffusion displacement moments", "[simulator]") {
    // k1 = 0 and a faraway start: pure Brownian motion. After m steps the
    // per-axis displacement is N(0, 2 D m dt).
    ChannelParams p;
    p.D = 8.0;
    p.r0 = 1000.0;
    p.rr = 10.0;
    p.k1 = 0.0;
    p.km1 = 0.0;
    p.ntx = 50000;
    const ReceiverGeometry geom(kOrigin, p.rr);
    RandomStream rng(31, 0);
    TrialState st = init_trial(p, geom, EmissionMode::Point, rng);

    const int m = 100;
    const double dt = 1e-4;
    for (int i = 0; i < m; ++i) step(st, p, geom, dt, rng);

    const double expect_var = 2.0 * p.D * m * dt;
    const Vec3 start{p.r0, 0.0, 0.0};
    double sum[3] = {0, 0, 0}, sum_sq[3] = {0, 0, 0};
    for (const auto& mol : st.molecules) {
        const Vec3 d = mol.position - start;
        const double comp[3] = {d.x, d.y, d.z};
        for (int a = 0; a < 3; ++a) {
            sum[a] += comp[a];
            sum_sq[a] += comp[a] * comp[a];
        }
    }
    const double n = static_cast<double>(p.ntx);
    for (int a = 0; a < 3; ++a) {
        const double mean = sum[a] / n;
        const double var = sum_sq[a] / n - mean * mean;
        REQUIRE(std::abs(mean) <= 4.0 * std::sqrt(expect_var / n));
        REQUIRE_THAT(var, WithinRel(expect_var, 0.025));
    }
}

TEST_CASE("run_trial basic contracts", "[simulator]") {
    auto p = baseline_channel(20.0);
    p.ntx = 100;
    const ReceiverGeometry geom(kOrigin, p.rr);

    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.ts = 2e-3;
    cfg.t_end = 2e-3; // a single window
    cfg.seed = 9;
    const SampleSeries one = run_trial(p, geom, cfg, 0);
    REQUIRE(one.size() == 1);
    REQUIRE(one.ts == cfg.ts);

    cfg.t_end = 0.02;
    const SampleSeries a = run_trial(p, geom, cfg, 3);
    const SampleSeries b = run_trial(p, geom, cfg, 3);
    REQUIRE(a.values == b.values); // bit-reproducible for a fixed stream
    const SampleSeries c = run_trial(p, geom, cfg, 4);
    REQUIRE(a.values != c.values);

    auto idle = p;
    idle.k1 = 0.0;
    const SampleSeries zeros = run_trial(idle, geom, cfg, 0);
    for (double v : zeros.values) REQUIRE(v == 0.0);
}

TEST_CASE("absorbing runs accumulate monotonically", "[simulator]") {
    ChannelParams p;
    p.D = 8.0;
    p.r0 = 10.5;
    p.rr = 10.0;
    p.k1 = 100.0;
    p.km1 = 0.0; // nothing ever leaves: every window is nonnegative
    p.ntx = 400;
    const ReceiverGeometry geom(kOrigin, p.rr);

    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.ts = 2e-3;
    cfg.t_end = 0.05;
    cfg.seed = 17;
    const SampleSeries s = run_trial(p, geom, cfg, 0);
    double total = 0.0;
    for (double v : s.values) {
        REQUIRE(v >= 0.0);
        total += v;
    }
    REQUIRE(total > 0.0);
    REQUIRE(total <= static_cast<double>(p.ntx));
}

TEST_CASE("summarize aggregates windowwise", "[simulator]") {
    SampleSeries t1{2e-3, {1.0, 2.0}};
    SampleSeries t2{2e-3, {3.0, 4.0}};
    const SeriesStats st = summarize({t1, t2});
    REQUIRE_THAT(st.mean[0], WithinRel(2.0, 1e-15));
    REQUIRE_THAT(st.mean[1], WithinRel(3.0, 1e-15));
    // Sample variance 2 for both windows: stderr = sqrt(2 / 2) = 1.
    REQUIRE_THAT(st.stderr_[0], WithinRel(1.0, 1e-15));
    REQUIRE_THAT(st.stderr_[1], WithinRel(1.0, 1e-15));

    const SeriesStats single = summarize({t1});
    REQUIRE(single.stderr_[0] == 0.0);
    REQUIRE(single.stderr_[1] == 0.0);

    REQUIRE_THROWS_AS(summarize({}), ValidationError);
    SampleSeries ragged{2e-3, {1.0}};
    REQUIRE_THROWS_AS(summarize({t1, ragged}), StateCorruption);

    REQUIRE(t1.t_start(0) == 0.0);
    REQUIRE_THAT(t1.t_end(1), WithinRel(4e-3, 1e-15));
}

TEST_CASE("simulated windows track the analytical expectation",
          "[simulator][slow]") {
    const auto p = baseline_channel(40.0);
    const ReceiverGeometry geom(kOrigin, p.rr);
    const QuadratureSpec quad{};

    SimConfig cfg;
    cfg.dt = 1e-5;
    cfg.ts = 2e-3;
    cfg.t_end = 0.022; // windows 0..10
    cfg.trials = 200;
    cfg.seed = 4242;

    std::vector<SampleSeries> trials;
    trials.reserve(cfg.trials);
    for (std::uint32_t i = 0; i < cfg.trials; ++i)
        trials.push_back(run_trial(p, geom, cfg, i));
    const SeriesStats stats = summarize(trials);

    for (std::size_t w : {std::size_t{0}, std::size_t{5}, std::size_t{10}}) {
        const double expect = expected_net_adsorbed_window(
            static_cast<double>(w) * cfg.ts, static_cast<double>(w + 1) * cfg.ts,
            p, quad);
        // Guard the all-zero-window case with a Poisson floor on the spread.
        const double floor =
            std::sqrt(std::max(expect, 0.0) / static_cast<double>(cfg.trials));
        const double spread = std::max(stats.stderr_[w], floor);
        INFO("window " << w << ": sim " << stats.mean[w] << " expect " << expect
                       << " spread " << spread);
        REQUIRE(std::abs(stats.mean[w] - expect) <= 3.0 * spread);
    }
}
