#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "adrx/vec3.hpp"

namespace adrx {

// SplitMix64: used only to expand a master seed into independent stream
// seeds. Reference: Steele, Lea & Flood (2014), as published by Vigna.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna). Chosen over std::mt19937_64 so that the
// stream is fully specified here: results must be bit-reproducible across
// standard libraries and platforms.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// One self-contained random stream per simulation trial. All draws are
// defined in terms of raw 64-bit outputs (no std:: distributions, whose
// algorithms vary between standard libraries).
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        SplitMix64 sm(master_seed);
        const std::uint64_t base = sm.next();
        engine_ = Xoshiro256pp(base ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1)));
    }

    // Uniform on [0, 1): 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_.next() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]: safe as a log() argument.
    double uniform01_open_low() {
        return (static_cast<double>(engine_.next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method, caching the second
    // variate. Chosen over Box-Muller to keep trig out of the hot loop.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Isotropic unit vector (uniform on the unit sphere).
    Vec3 unit_vector() {
        const double z = 2.0 * uniform01() - 1.0;
        const double phi = 2.0 * std::numbers::pi * uniform01();
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {rho * std::cos(phi), rho * std::sin(phi), z};
    }

    // +1 or -1 with equal probability.
    double sign() {
        return (engine_.next() & 1ULL) ? 1.0 : -1.0;
    }

private:
    Xoshiro256pp engine_{0};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// One Brownian displacement component over a step dt: N(0, 2 D dt).
inline double displacement_sigma(double D, double dt) {
    return std::sqrt(2.0 * D * dt);
}

} // namespace adrx
