#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "adrx/channel_response.hpp"
#include "adrx/laplace.hpp"

using namespace adrx;
using Catch::Matchers::WithinRel;
using cplx = std::complex<double>;

TEST_CASE("talbot inversion of elementary transforms", "[laplace]") {
    auto one_over_s = [](cplx s) { return 1.0 / s; };
    REQUIRE_THAT(talbot_invert(one_over_s, 0.3), WithinRel(1.0, 1e-8));
    REQUIRE_THAT(talbot_invert(one_over_s, 1.7), WithinRel(1.0, 1e-8));

    auto pole = [](cplx s) { return 1.0 / (s + 5.0); };
    REQUIRE_THAT(talbot_invert(pole, 0.1),
                 WithinRel(0.60653065971263342, 1e-9)); // e^{-0.5}

    auto ramp = [](cplx s) { return 1.0 / (s * s); };
    REQUIRE_THAT(talbot_invert(ramp, 0.2), WithinRel(0.2, 1e-9));
    REQUIRE_THAT(talbot_invert(ramp, 2.0), WithinRel(2.0, 1e-9));
}

TEST_CASE("talbot input validation", "[laplace]") {
    auto one_over_s = [](cplx s) { return 1.0 / s; };
    REQUIRE_THROWS_AS(talbot_invert(one_over_s, 0.0), ValidationError);
    REQUIRE_THROWS_AS(talbot_invert(one_over_s, -1.0), ValidationError);
    REQUIRE_THROWS_AS(talbot_invert(one_over_s, 1.0, 4), ValidationError);
}

TEST_CASE("talbot refuses transforms it cannot converge on", "[laplace]") {
    // A deterministic high-frequency perturbation decorrelates the two term
    // counts, so the built-in cross-check must reject the result.
    auto noisy = [](cplx s) { return 1.0 / s + 1e-3 * std::sin(1e6 * s.imag()); };
    REQUIRE_THROWS_AS(talbot_invert(noisy, 1.0), ConvergenceFailure);
}

TEST_CASE("talbot recovers the absorbing-limit cumulative fraction", "[laplace]") {
    // Exact transform of the cumulative adsorbed fraction, built from the
    // Laplace-domain concentration at the surface. In the strong-adsorption,
    // no-desorption limit its inverse has the closed form
    // (rr/r0) erfc(d / sqrt(4 D T)).
    ChannelParams p;
    p.D = 8.0;
    p.r0 = 11.0;
    p.rr = 10.0;
    p.k1 = 1e4;
    p.km1 = 0.0;

    auto cumulative_hat = [&](cplx s) {
        const cplx surface_conc = rc_laplace(s, p.rr, p) / p.rr;
        return 4.0 * std::numbers::pi * p.rr * p.rr * p.k1 * surface_conc /
               (s + p.km1);
    };

    const double T = 0.2;
    const double d = p.r0 - p.rr;
    const double closed_form =
        (p.rr / p.r0) * std::erfc(d / std::sqrt(4.0 * p.D * T));
    REQUIRE_THAT(closed_form, WithinRel(0.52377283820961722, 1e-14));

    // Ideal absorbing boundary: the transform inverts exactly to the erfc
    // form, so this isolates the Talbot rule's own accuracy.
    auto ideal_hat = [&](cplx s) {
        return (p.rr / p.r0) * std::exp(-d * std::sqrt(s / p.D)) / s;
    };
    REQUIRE_THAT(talbot_invert(ideal_hat, T), WithinRel(closed_form, 1e-6));

    // k1 = 1e4 is close to but not exactly that limit; the frozen margin
    // between the two is 6.1e-4 at T = 0.2.
    REQUIRE_THAT(talbot_invert(cumulative_hat, T), WithinRel(closed_form, 1e-3));
}
