#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "adrx/errors.hpp"

namespace adrx {

namespace detail {

// Fixed-Talbot contour evaluation with M terms (Abate & Valko 2004).
// F must be analytic to the right of the contour, i.e. everywhere off the
// closed negative real axis for the transforms used here.
template <class F>
double talbot_eval(const F& fhat, double t, int terms) {
    using cplx = std::complex<double>;
    const double r = 2.0 * terms / (5.0 * t);
    double sum = 0.5 * std::real(fhat(cplx(r, 0.0))) * std::exp(r * t);
    for (int k = 1; k < terms; ++k) {
        const double theta = k * std::numbers::pi / terms;
        const double cot = std::cos(theta) / std::sin(theta);
        const cplx s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const cplx val = std::exp(s * t) * fhat(s) * cplx(1.0, sigma);
        sum += std::real(val);
    }
    return (r / terms) * sum;
}

} // namespace detail

// Numerical inverse Laplace transform at time t > 0. Evaluates the fixed
// Talbot rule at two term counts and refuses to return a value the two
// evaluations disagree on.
template <class F>
double talbot_invert(const F& fhat, double t, int terms = 32) {
    if (!(t > 0.0))
        throw ValidationError("talbot_invert: t must be > 0");
    if (terms < 8)
        throw ValidationError("talbot_invert: terms must be >= 8");

    const double coarse = detail::talbot_eval(fhat, t, terms);
    const double fine = detail::talbot_eval(fhat, t, terms + 8);
    const double diff = std::abs(fine - coarse);
    const double tol = std::max(1e-8 * std::abs(fine), 1e-14);
    if (!(diff <= tol) || !std::isfinite(fine))
        throw ConvergenceFailure(
            "talbot_invert: estimates " + std::to_string(coarse) + " and " +
            std::to_string(fine) + " at t=" + std::to_string(t) +
            " disagree beyond tolerance");
    return fine;
}

} // namespace adrx
