#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "adrx/errors.hpp"
#include "adrx/geometry.hpp"
#include "adrx/params.hpp"
#include "adrx/rng.hpp"
#include "adrx/series.hpp"
#include "adrx/vec3.hpp"

// Particle-based simulation of the channel: Brownian propagation of free
// molecules, adsorption-or-reflection at the receiver surface, desorption
// with the empirically fitted displacement law, and per-window counting of
// net newly-adsorbed molecules.

namespace adrx {

enum class MoleculeState : std::uint8_t { Free, Adsorbed };

struct Molecule {
    Vec3 position;
    MoleculeState state = MoleculeState::Free;
};

// Per-step probability that a colliding molecule sticks. The discretization
// formula can exceed 1 when dt is too large for the given k1; that regime is
// clamped (and reported once) rather than rejected so absorbing-limit runs
// stay on this code path.
inline double adsorption_probability(double k1, double dt, double D) {
    const double p = k1 * std::sqrt(std::numbers::pi * dt / D);
    if (p > 1.0) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::fprintf(stderr,
                         "[adrx] warning: adsorption probability %.6g > 1 "
                         "(k1=%.6g, dt=%.6g, D=%.6g); clamped to 1. "
                         "Reduce sim.dt for a valid discretization.\n",
                         p, k1, dt, D);
        }
        return 1.0;
    }
    return p;
}

// Per-step probability that an adsorbed molecule releases.
inline double desorption_probability(double km1, double dt) {
    return -std::expm1(-km1 * dt);
}

namespace detail {

// Empirical magnitude of one displacement component for a just-desorbed
// molecule, as a function of a uniform draw P.
inline double desorption_component(double P, double scale) {
    const double num = 0.571825 * P - 0.552246 * P * P;
    const double den = 1.0 - 1.53908 * P + 0.546424 * P * P;
    return scale * num / den;
}

} // namespace detail

// Draws the three nonnegative displacement components applied to a molecule
// leaving the surface.
inline Vec3 desorption_displacement(RandomStream& rng, double D, double dt) {
    const double scale = std::sqrt(2.0 * D * dt);
    return {detail::desorption_component(rng.uniform01(), scale),
            detail::desorption_component(rng.uniform01(), scale),
            detail::desorption_component(rng.uniform01(), scale)};
}

// Brownian displacement over one step: independent N(0, 2 D dt) components.
inline Vec3 displacement_sample(RandomStream& rng, double D, double dt) {
    const double sigma = displacement_sigma(D, dt);
    return {sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal()};
}

// Places a desorbed molecule: every coordinate moves away from the receiver
// center by its displacement component. A coordinate exactly at the center
// value has no outward direction; its sign is drawn uniformly so no axis is
// systematically favored.
inline Vec3 place_desorbed(const Vec3& p_adsorbed, const Vec3& center,
                           const Vec3& disp, RandomStream& rng) {
    auto outward = [&](double coord, double center_coord, double delta) {
        const double rel = coord - center_coord;
        double sign;
        if (rel > 0.0)
            sign = 1.0;
        else if (rel < 0.0)
            sign = -1.0;
        else
            sign = rng.sign();
        return coord + sign * delta;
    };
    return {outward(p_adsorbed.x, center.x, disp.x),
            outward(p_adsorbed.y, center.y, disp.y),
            outward(p_adsorbed.z, center.z, disp.z)};
}

// Mutable state of one trial.
struct TrialState {
    std::vector<Molecule> molecules;
    std::uint64_t step_index = 0;
    std::uint64_t n_free = 0;
    std::uint64_t n_adsorbed = 0;
    // Newly adsorbed / newly desorbed since the current window opened.
    std::uint64_t window_adsorbed = 0;
    std::uint64_t window_desorbed = 0;

    void reset_window() {
        window_adsorbed = 0;
        window_desorbed = 0;
    }
};

// Emits ntx molecules at distance r0 from the receiver center.
inline TrialState init_trial(const ChannelParams& params,
                             const ReceiverGeometry& geom, EmissionMode emission,
                             RandomStream& rng) {
    TrialState st;
    st.molecules.resize(params.ntx);
    for (auto& m : st.molecules) {
        if (emission == EmissionMode::Shell)
            m.position = geom.center() + params.r0 * rng.unit_vector();
        else
            m.position = geom.center() + Vec3{params.r0, 0.0, 0.0};
        m.state = MoleculeState::Free;
    }
    st.n_free = params.ntx;
    st.n_adsorbed = 0;
    return st;
}

// Advances every molecule by one time step:
//   free molecules propagate, and on entering the sphere either adsorb at
//   the surface crossing point (probability P_A) or bounce back to their
//   pre-step position; molecules adsorbed at the start of the step desorb
//   with probability P_D to an outward-displaced position. A molecule never
//   both adsorbs and desorbs within one step. Conservation of the molecule
//   count is re-checked every step.
inline void step(TrialState& state, const ChannelParams& params,
                 const ReceiverGeometry& geom, double dt, RandomStream& rng) {
    const double p_adsorb = adsorption_probability(params.k1, dt, params.D);
    const double p_desorb = desorption_probability(params.km1, dt);
    const double sigma = displacement_sigma(params.D, dt);
    const double rr2 = geom.radius() * geom.radius();
    const Vec3 center = geom.center();

    std::uint64_t free_tally = 0;
    std::uint64_t adsorbed_tally = 0;

    for (auto& m : state.molecules) {
        if (m.state == MoleculeState::Free) {
            const Vec3 p_prev = m.position;
            const Vec3 p_new{p_prev.x + sigma * rng.normal(),
                             p_prev.y + sigma * rng.normal(),
                             p_prev.z + sigma * rng.normal()};
            const Vec3 rel{p_new.x - center.x, p_new.y - center.y,
                           p_new.z - center.z};
            if (rel.x * rel.x + rel.y * rel.y + rel.z * rel.z < rr2) {
                // Collision with the receiver.
                if (rng.uniform01() < p_adsorb) {
                    const double g = geom.crossing_fraction(p_prev, p_new);
                    m.position = geom.point_at(p_prev, p_new, g);
                    m.state = MoleculeState::Adsorbed;
                    ++state.window_adsorbed;
                    ++state.n_adsorbed;
                    --state.n_free;
                } else {
                    m.position = p_prev; // bounce back
                }
            } else {
                m.position = p_new;
            }
        } else if (p_desorb > 0.0 && rng.uniform01() < p_desorb) {
            const Vec3 disp = desorption_displacement(rng, params.D, dt);
            m.position = place_desorbed(m.position, center, disp, rng);
            m.state = MoleculeState::Free;
            ++state.window_desorbed;
            --state.n_adsorbed;
            ++state.n_free;
        }
        if (m.state == MoleculeState::Free)
            ++free_tally;
        else
            ++adsorbed_tally;
    }

    if (free_tally + adsorbed_tally != params.ntx ||
        free_tally != state.n_free || adsorbed_tally != state.n_adsorbed)
        throw StateCorruption(
            "step: molecule conservation violated at step " +
            std::to_string(state.step_index));
    ++state.step_index;
}

// Runs one full trial: emission at t = 0, stepping to t_end, and the
// per-window net adsorption count (adsorption events minus desorption
// events). The count is cross-checked against the change in the number of
// adsorbed molecules across the window.
inline SampleSeries run_trial(const ChannelParams& params,
                              const ReceiverGeometry& geom, const SimConfig& cfg,
                              std::uint64_t trial_index) {
    params.validate();
    cfg.validate();

    RandomStream rng(cfg.seed, trial_index);
    TrialState state = init_trial(params, geom, cfg.emission, rng);

    const std::uint64_t windows = cfg.window_count();
    const std::uint64_t steps_per_window = cfg.steps_per_window();

    SampleSeries series;
    series.ts = cfg.ts;
    series.values.reserve(windows);

    for (std::uint64_t w = 0; w < windows; ++w) {
        state.reset_window();
        const std::uint64_t adsorbed_at_start = state.n_adsorbed;
        for (std::uint64_t k = 0; k < steps_per_window; ++k)
            step(state, params, geom, cfg.dt, rng);

        const auto net = static_cast<std::int64_t>(state.window_adsorbed) -
                         static_cast<std::int64_t>(state.window_desorbed);
        const auto delta = static_cast<std::int64_t>(state.n_adsorbed) -
                           static_cast<std::int64_t>(adsorbed_at_start);
        if (net != delta)
            throw StateCorruption("run_trial: window tally disagrees with "
                                  "adsorbed-count change at window " +
                                  std::to_string(w));
        series.values.push_back(static_cast<double>(net));
    }
    return series;
}

} // namespace adrx
