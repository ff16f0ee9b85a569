#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "adrx/errors.hpp"
#include "adrx/params.hpp"
#include "adrx/quadrature.hpp"

// Analytical channel response of the reversible adsorption/desorption
// receiver. Public functions take dimensional inputs (um, s); internally all
// frequency integrals run in dimensionless variables (lengths in units of
// rr, time in units of rr^2/D) so the quadrature stays well scaled across
// parameter regimes.
//
// The frequency-domain path writes every quantity as a real integral over
// v = sqrt(w * rr^2 / D). That substitution removes the 1/sqrt(w) endpoint
// singularity, making each integrand analytic at v = 0 with an
// exp(-decay*v/sqrt(2)) envelope, which integrate_oscillatory exploits.

namespace adrx {

namespace detail {

using cplx = std::complex<double>;

// Dimensionless view of the channel used by every integrand.
struct ScaledChannel {
    double rho0;  // r0 / rr
    double kap1;  // k1 * rr / D
    double kapm1; // km1 * rr^2 / D
    double tsc;   // rr^2 / D, the time unit

    explicit ScaledChannel(const ChannelParams& p)
        : rho0(p.r0 / p.rr),
          kap1(p.k1 * p.rr / p.D),
          kapm1(p.km1 * p.rr * p.rr / p.D),
          tsc(p.rr * p.rr / p.D) {}
};

// Surface response A = 1 + kap1 * jv^2 / (jv^2 + kapm1) at frequency w
// where v = sqrt(w * tsc). With no desorption the fraction is exactly
// kap1 (removable singularity at v = 0), handled analytically.
inline cplx surface_factor(const ScaledChannel& ch, double v) {
    if (ch.kapm1 == 0.0) return cplx(1.0 + ch.kap1, 0.0);
    const cplx jv2(0.0, v * v);
    return 1.0 + ch.kap1 * jv2 / (jv2 + ch.kapm1);
}

// (e^{j v^2 dT} - 1) / (j v^2): the time-window kernel, evaluated without
// cancellation. Finite limit dT as v -> 0.
inline cplx window_kernel(double v, double dT) {
    const double delta = v * v * dT;
    if (std::abs(delta) < 1e-8)
        return cplx(dT, 0.5 * dT * delta);
    const double s = std::sin(delta);
    const double h = std::sin(0.5 * delta);
    const double inv = 1.0 / (v * v);
    return cplx(s * inv, 2.0 * h * h * inv);
}

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Net-adsorption spectral density H(v) = v (A-1) e^{-lam0 v e^{j pi/4}}
// / (A + v e^{j pi/4}), split so callers can fold extra phase into the
// oscillatory factor. `phase` receives the envelope's own -lam0*v/sqrt(2)
// contribution; `amp` the real magnitude.
struct FluxIntegrand {
    const ScaledChannel& ch;
    double lam0; // rho0 - 1

    // Returns Re[e^{j*extra_phase} * H(v)].
    double operator()(double v, double extra_phase) const {
        const cplx A = surface_factor(ch, v);
        const cplx denom = A + cplx(v * kInvSqrt2, v * kInvSqrt2);
        const cplx head = v * (A - 1.0) / denom;
        const double damp = std::exp(-lam0 * v * kInvSqrt2);
        const double phase = extra_phase - lam0 * v * kInvSqrt2;
        const cplx osc = std::polar(damp, phase);
        return (osc * head).real();
    }

    // Returns kern * H(v) with the caller-supplied complex kernel already
    // including any e^{j v^2 a} phase.
    double weighted(double v, const cplx& kern, double extra_phase) const {
        const cplx A = surface_factor(ch, v);
        const cplx denom = A + cplx(v * kInvSqrt2, v * kInvSqrt2);
        const cplx head = v * (A - 1.0) / denom;
        const double damp = std::exp(-lam0 * v * kInvSqrt2);
        const double phase = extra_phase - lam0 * v * kInvSqrt2;
        const cplx osc = std::polar(damp, phase);
        return (osc * head * kern).real();
    }
};

inline double frequency_cap(const ScaledChannel& ch, const QuadratureSpec& q) {
    return std::sqrt(q.w_max * ch.tsc);
}

} // namespace detail

// Laplace-domain boundary response Z(s) evaluated at radius r (the
// r-dependent exponential included). Uses the principal branch of
// sqrt(s/D); valid for any s off the closed negative real axis, which
// covers both the imaginary axis (frequency-domain path) and the Talbot
// contour (inversion oracle).
inline std::complex<double> z_laplace(std::complex<double> s, double r,
                                      const ChannelParams& p) {
    p.validate();
    if (r < p.rr)
        throw ValidationError("z_laplace: r must be >= channel.rr");
    if (s == std::complex<double>(0.0, 0.0))
        throw ValidationError("z_laplace: s = 0 is outside the transform domain");

    using cplx = std::complex<double>;
    const cplx beta = std::sqrt(s / p.D);
    cplx admit; // 1/rr + k1 s / (D (s + km1)), exactly 1/rr + k1/D when km1=0
    if (p.km1 == 0.0)
        admit = cplx(1.0 / p.rr + p.k1 / p.D, 0.0);
    else
        admit = 1.0 / p.rr + p.k1 * s / (p.D * (s + p.km1));

    const cplx pre = 2.0 * admit / (admit + beta);
    const cplx a1 = 1.0 / (4.0 * std::numbers::pi * p.r0 * std::sqrt(4.0 * p.D * s));
    return pre * a1 * std::exp(-(r + p.r0 - 2.0 * p.rr) * beta);
}

// Laplace transform of r * C(r, t | r0): free-space term, mirror-image term,
// minus the boundary response Z.
inline std::complex<double> rc_laplace(std::complex<double> s, double r,
                                       const ChannelParams& p) {
    p.validate();
    if (r < p.rr)
        throw ValidationError("rc_laplace: r must be >= channel.rr");
    if (s == std::complex<double>(0.0, 0.0))
        throw ValidationError("rc_laplace: s = 0 is outside the transform domain");

    using cplx = std::complex<double>;
    const cplx beta = std::sqrt(s / p.D);
    const cplx a1 = 1.0 / (4.0 * std::numbers::pi * p.r0 * std::sqrt(4.0 * p.D * s));
    const cplx direct = a1 * std::exp(-std::abs(r - p.r0) * beta);
    const cplx mirror = a1 * std::exp(-(r + p.r0 - 2.0 * p.rr) * beta);
    return direct + mirror - z_laplace(s, r, p);
}

// Characteristic-function sample: Z evaluated on the imaginary axis.
inline std::complex<double> phi_z(double w, double r, const ChannelParams& p) {
    if (!(w > 0.0))
        throw ValidationError(
            "phi_z: w must be > 0 (w = 0 is a removable singularity of the "
            "frequency integrand)");
    return z_laplace(std::complex<double>(0.0, w), r, p);
}

// Expected spatial distribution C(r, t | r0) in um^-3 for one molecule:
// free-space Gaussian + mirror image minus the frequency integral of the
// boundary response.
inline double spatial_distribution(double r, double t, const ChannelParams& p,
                                   const QuadratureSpec& q) {
    p.validate();
    q.validate();
    if (r < p.rr)
        throw ValidationError("spatial_distribution: r must be >= channel.rr");
    if (!(t > 0.0))
        throw ValidationError("spatial_distribution: t must be > 0");

    const double pi = std::numbers::pi;
    const double spread = 4.0 * p.D * t;
    const double gauss_norm = 1.0 / (4.0 * pi * r * p.r0 * std::sqrt(pi * spread));
    const double d_direct = r - p.r0;
    const double d_mirror = r + p.r0 - 2.0 * p.rr;
    const double gauss = gauss_norm * (std::exp(-d_direct * d_direct / spread) +
                                       std::exp(-d_mirror * d_mirror / spread));

    const detail::ScaledChannel ch(p);
    const double rho = r / p.rr;
    const double lam = rho + ch.rho0 - 2.0;
    const double tau = t / ch.tsc;

    // Integrand: Re[e^{j v^2 tau} e^{-j pi/4} * 2A/(A + v e^{j pi/4})
    //               * e^{-lam v e^{j pi/4}}]
    auto f = [&](double v) {
        const detail::cplx A = detail::surface_factor(ch, v);
        const detail::cplx denom =
            A + detail::cplx(v * detail::kInvSqrt2, v * detail::kInvSqrt2);
        const detail::cplx head = 2.0 * A / denom;
        const double damp = std::exp(-lam * v * detail::kInvSqrt2);
        const double phase = v * v * tau - lam * v * detail::kInvSqrt2 - 0.25 * pi;
        return (std::polar(damp, phase) * head).real();
    };

    const double integral = integrate_oscillatory(f, tau, lam, detail::frequency_cap(ch, q), q);
    const double coef =
        1.0 / (4.0 * pi * pi * p.rr * p.rr * p.rr * rho * ch.rho0);
    return gauss - coef * integral;
}

// Net adsorption rate K(t | r0) in 1/s for one molecule: d/dt of the
// expected adsorbed fraction under the reversible surface reaction.
inline double coupling_rate(double t, const ChannelParams& p,
                            const QuadratureSpec& q) {
    p.validate();
    q.validate();
    if (!(t > 0.0))
        throw ValidationError("coupling_rate: t must be > 0");
    if (p.k1 == 0.0) return 0.0; // no adsorption: the spectral density vanishes

    const detail::ScaledChannel ch(p);
    const detail::FluxIntegrand flux{ch, ch.rho0 - 1.0};
    const double tau = t / ch.tsc;

    auto f = [&](double v) { return flux(v, v * v * tau); };
    const double integral =
        integrate_oscillatory(f, tau, flux.lam0, detail::frequency_cap(ch, q), q);
    return 2.0 / (std::numbers::pi * ch.rho0 * ch.tsc) * integral;
}

// Net number of molecules expected to be adsorbed over the window
// (t_start, t_end], per emission of ntx molecules. May be negative when
// desorption dominates the window.
inline double expected_net_adsorbed_window(double t_start, double t_end,
                                           const ChannelParams& p,
                                           const QuadratureSpec& q) {
    p.validate();
    q.validate();
    if (!(t_start >= 0.0))
        throw ValidationError("expected_net_adsorbed: t_start must be >= 0");
    if (!(t_end > t_start))
        throw ValidationError("expected_net_adsorbed: t_end must exceed t_start");
    if (p.k1 == 0.0) return 0.0;

    const detail::ScaledChannel ch(p);
    const detail::FluxIntegrand flux{ch, ch.rho0 - 1.0};
    const double a = t_start / ch.tsc;
    const double b = t_end / ch.tsc;

    auto f = [&](double v) {
        const detail::cplx kern = detail::window_kernel(v, b - a);
        return flux.weighted(v, kern, v * v * a);
    };
    const double integral =
        integrate_oscillatory(f, b, flux.lam0, detail::frequency_cap(ch, q), q);
    return static_cast<double>(p.ntx) * 2.0 / (std::numbers::pi * ch.rho0) * integral;
}

// Cumulative adsorbed fraction R(T) = integral of coupling_rate over [0, T],
// with the time integral folded into the frequency kernel analytically.
inline double cumulative_fraction(double T, const ChannelParams& p,
                                  const QuadratureSpec& q) {
    p.validate();
    q.validate();
    if (T < 0.0)
        throw ValidationError("cumulative_fraction: T must be >= 0");
    if (T == 0.0 || p.k1 == 0.0) return 0.0;

    const detail::ScaledChannel ch(p);
    const detail::FluxIntegrand flux{ch, ch.rho0 - 1.0};
    const double Tp = T / ch.tsc;

    auto f = [&](double v) {
        const detail::cplx kern = detail::window_kernel(v, Tp);
        return flux.weighted(v, kern, 0.0);
    };
    const double integral =
        integrate_oscillatory(f, Tp, flux.lam0, detail::frequency_cap(ch, q), q);
    return 2.0 / (std::numbers::pi * ch.rho0) * integral;
}

// Expected net newly-adsorbed molecules in the sampling window
// [T, T + sim.ts], per emission.
inline double expected_net_adsorbed(double T, const ChannelParams& p,
                                    const SimConfig& sim, const QuadratureSpec& q) {
    if (!(sim.ts > 0.0))
        throw ValidationError("expected_net_adsorbed: sim.ts must be > 0");
    return expected_net_adsorbed_window(T, T + sim.ts, p, q);
}

} // namespace adrx
