#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "adrx/errors.hpp"

namespace adrx {

// Physical description of the channel: a point (or spherical-shell) source at
// distance r0 from the center of a spherical receiver of radius rr, diffusion
// coefficient D, and first-order adsorption (k1) / desorption (km1) kinetics
// at the receiver surface.
struct ChannelParams {
    double D = 0.0;    // diffusion coefficient, um^2/s
    double r0 = 0.0;   // source distance from receiver center, um
    double rr = 0.0;   // receiver radius, um
    double k1 = 0.0;   // adsorption rate, um/s
    double km1 = 0.0;  // desorption rate, 1/s
    std::uint64_t ntx = 1; // molecules released per emission

    void validate() const {
        if (!(D > 0.0) || !std::isfinite(D))
            throw ValidationError("channel.D must be finite and > 0");
        if (!(rr > 0.0) || !std::isfinite(rr))
            throw ValidationError("channel.rr must be finite and > 0");
        if (!(r0 > 0.0) || !std::isfinite(r0))
            throw ValidationError("channel.r0 must be finite and > 0");
        if (r0 <= rr)
            throw ValidationError(
                "channel.r0 must exceed channel.rr: the emission distance d = r0 - rr "
                "must be positive (source outside the receiver)");
        if (k1 < 0.0 || !std::isfinite(k1))
            throw ValidationError("channel.k1 must be finite and >= 0");
        if (km1 < 0.0 || !std::isfinite(km1))
            throw ValidationError("channel.km1 must be finite and >= 0");
        if (ntx < 1)
            throw ValidationError("channel.ntx must be >= 1");
    }
};

enum class EmissionMode {
    Point, // all molecules start at the same point at distance r0
    Shell, // molecules start uniformly on the sphere of radius r0
};

// Time discretization and replication settings for the particle simulator.
struct SimConfig {
    double dt = 0.0;          // Brownian step, s
    double ts = 0.0;          // sampling (observation window) interval, s
    double t_end = 0.0;       // total simulated horizon, s
    std::uint32_t trials = 1; // independent stochastic replications
    std::uint64_t seed = 1;   // master seed; trial i derives its own stream
    EmissionMode emission = EmissionMode::Shell;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw ValidationError("sim.dt must be finite and > 0");
        if (!(ts > 0.0) || !std::isfinite(ts))
            throw ValidationError("sim.ts must be finite and > 0");
        if (!(t_end > 0.0) || !std::isfinite(t_end))
            throw ValidationError("sim.t_end must be finite and > 0");
        if (dt > ts)
            throw ValidationError("sim.dt must not exceed sim.ts");
        if (ts > t_end)
            throw ValidationError("sim.ts must not exceed sim.t_end");
        if (trials < 1)
            throw ValidationError("sim.trials must be >= 1");
        if (!integer_multiple(ts, dt))
            throw ValidationError(
                "sim.ts must be an integer multiple of sim.dt so sampling "
                "windows align with simulation steps");
        if (!integer_multiple(t_end, ts))
            throw ValidationError(
                "sim.t_end must be an integer multiple of sim.ts so the "
                "reporting grid is exact");
    }

    std::uint64_t steps_per_window() const {
        return static_cast<std::uint64_t>(std::llround(ts / dt));
    }
    std::uint64_t window_count() const {
        return static_cast<std::uint64_t>(std::llround(t_end / ts));
    }

private:
    // True when big/small is a whole number up to rounding in the quotient.
    static bool integer_multiple(double big, double small) {
        const double q = big / small;
        return std::abs(q - std::llround(q)) <= 1e-9 * q && std::llround(q) >= 1;
    }
};

} // namespace adrx
