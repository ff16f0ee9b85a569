#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "adrx/errors.hpp"

namespace adrx {

// Controls for the frequency-domain integrals. `w_max` caps the angular
// frequency the integrator may chase before giving up; `rel_tol` is the
// target relative accuracy of each integral; `max_panels` bounds adaptive
// refinement; `abs_floor` stops refinement of results that are zero to
// within noise.
struct QuadratureSpec {
    double w_max = 1e7;
    double rel_tol = 1e-6;
    std::size_t max_panels = 40000;
    double abs_floor = 1e-14;

    void validate() const {
        if (!(w_max > 0.0)) throw ValidationError("quad.w_max must be > 0");
        if (!(rel_tol > 0.0) || rel_tol >= 1.0)
            throw ValidationError("quad.rel_tol must be in (0, 1)");
        if (max_panels < 16) throw ValidationError("quad.max_panels must be >= 16");
    }
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK constants).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kGK15KronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGK15GaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
PanelResult gk15(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    const double f_mid = f(mid);
    double kronrod = kGK15KronrodW[7] * f_mid;
    double gauss = kGK15GaussW[3] * f_mid;

    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kGK15KronrodW[i] * fsum;
        if (i % 2 == 1) gauss += kGK15GaussW[i / 2] * fsum;
    }

    PanelResult r;
    r.value = kronrod * half;
    // QUADPACK-style error estimate: sharpened difference of the two rules.
    const double diff = std::abs((kronrod - gauss) * half);
    r.error = diff;
    if (diff > 0.0) {
        const double scale = std::abs(r.value) + diff;
        if (scale > 0.0) {
            const double ratio = 200.0 * diff / scale;
            r.error = scale * std::min(1.0, std::sqrt(ratio) * ratio);
            r.error = std::max(r.error, std::abs(r.value) * 1e-16);
        }
    }
    return r;
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace detail

// Adaptive Gauss-Kronrod integration over a caller-supplied initial mesh.
// Refines the worst panel until the summed error estimate meets the target.
template <class F>
double integrate_adaptive(const F& f, const std::vector<double>& breakpoints,
                          const QuadratureSpec& spec) {
    if (breakpoints.size() < 2)
        throw ValidationError("integrate_adaptive: need at least one panel");

    std::priority_queue<detail::Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    std::size_t n_panels = breakpoints.size() - 1;
    if (n_panels > spec.max_panels)
        throw QuadratureFailure("integrate_adaptive: initial mesh of " +
                                std::to_string(n_panels) + " panels exceeds max_panels=" +
                                std::to_string(spec.max_panels));

    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const auto r = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
        heap.push({breakpoints[i], breakpoints[i + 1], r.value, r.error});
        total += r.value;
        total_err += r.error;
    }

    auto target = [&] { return std::max(spec.rel_tol * std::abs(total), spec.abs_floor); };

    while (total_err > target()) {
        if (n_panels >= spec.max_panels)
            throw QuadratureFailure(
                "integrate_adaptive: error " + std::to_string(total_err) +
                " above target after max_panels=" + std::to_string(spec.max_panels));
        const detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Panel narrowed to machine resolution; its error estimate is noise.
            total_err -= worst.error;
            continue;
        }
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++n_panels;
    }
    return total;
}

// Convenience wrapper: adaptive integration of f over [a, b] starting from a
// uniform 8-panel mesh.
template <class F>
double integrate(const F& f, double a, double b, const QuadratureSpec& spec) {
    std::vector<double> breaks;
    const int n0 = 8;
    breaks.reserve(n0 + 1);
    for (int i = 0; i <= n0; ++i)
        breaks.push_back(a + (b - a) * static_cast<double>(i) / n0);
    return integrate_adaptive(f, breaks, spec);
}

// Semi-infinite oscillatory integrals of the family used by the channel
// models. After the v = sqrt(w) substitution every integrand here has
//   - phase that grows like phase_t * v^2 (plus a linear part),
//   - an exp(-decay * v / sqrt(2)) envelope from the propagation factor,
//   - at most linear polynomial growth in v.
// The upper limit is chosen where the envelope falls below rel_tol / 100 of
// its own peak, capped at v_cap; the initial mesh resolves a quarter of the
// local oscillation per panel so the adaptive error estimates are trustworthy.
template <class F>
double integrate_oscillatory(const F& f, double phase_t, double decay,
                             double v_cap, const QuadratureSpec& spec) {
    if (!(decay > 0.0))
        throw QuadratureFailure("integrate_oscillatory: nonpositive envelope decay");
    if (!(v_cap > 0.0))
        throw QuadratureFailure("integrate_oscillatory: nonpositive frequency cap");

    const double rate = decay / std::sqrt(2.0);
    auto envelope = [&](double v) { return (1.0 + v) * std::exp(-rate * v); };

    // Envelope peak over v >= 0 (at v = 1/rate - 1 when that is positive).
    const double v_peak = std::max(0.0, 1.0 / rate - 1.0);
    const double env_peak = envelope(v_peak);
    const double cutoff = env_peak * spec.rel_tol * 1e-2;

    double v_upper = std::max(1.0, v_peak);
    while (envelope(v_upper) > cutoff) {
        v_upper *= 2.0;
        if (v_upper >= v_cap) {
            if (envelope(v_cap) > cutoff)
                throw QuadratureFailure(
                    "integrate_oscillatory: envelope still " +
                    std::to_string(envelope(v_cap) / env_peak) +
                    " of peak at the frequency cap; raise quad.w_max");
            v_upper = v_cap;
            break;
        }
    }
    v_upper = std::min(v_upper, v_cap);

    // Quarter-oscillation panels: local phase rate is 2*phase_t*v + rate.
    const double max_width = std::min(v_upper / 8.0, 2.0);
    std::vector<double> breaks;
    breaks.push_back(0.0);
    double v = 0.0;
    while (v < v_upper) {
        const double phase_rate = 2.0 * std::abs(phase_t) * v + rate;
        double width = (0.5 * std::numbers::pi) / phase_rate;
        width = std::min(width, max_width);
        v = std::min(v + width, v_upper);
        breaks.push_back(v);
    }
    if (breaks.size() < 9) {
        // Always start from at least 8 panels so error estimates have context.
        std::vector<double> fine;
        fine.push_back(0.0);
        const std::size_t splits = (9 + breaks.size() - 2) / (breaks.size() - 1);
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            for (std::size_t k = 1; k <= splits; ++k)
                fine.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) *
                                               static_cast<double>(k) /
                                               static_cast<double>(splits));
        breaks = std::move(fine);
    }

    return integrate_adaptive(f, breaks, spec);
}

} // namespace adrx
