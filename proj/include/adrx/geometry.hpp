#pragma once

#include <cmath>

#include "adrx/errors.hpp"
#include "adrx/vec3.hpp"

namespace adrx {

// Spherical receiver centered at `center` with radius `radius`. Provides the
// two geometric queries the simulator needs: distance tests and the first
// crossing point of a straight step segment with the surface.
class ReceiverGeometry {
public:
    ReceiverGeometry(const Vec3& center, double radius)
        : center_(center), radius_(radius) {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw ValidationError("receiver radius must be finite and > 0");
    }

    const Vec3& center() const { return center_; }
    double radius() const { return radius_; }

    double distance_to_center(const Vec3& p) const { return norm(p - center_); }

    bool inside(const Vec3& p) const {
        return norm2(p - center_) < radius_ * radius_;
    }

    // First intersection of the segment p_prev -> p_new with the sphere,
    // assuming p_prev is outside (or on) the surface. Returns the fraction
    // g in [0, 1] along the segment. Throws NoIntersection if the segment
    // does not reach the surface and Degenerate for a zero-length segment.
    double crossing_fraction(const Vec3& p_prev, const Vec3& p_new) const {
        const Vec3 seg = p_new - p_prev;
        const double seg_len2 = norm2(seg);
        if (seg_len2 == 0.0)
            throw Degenerate("crossing_fraction: zero-length segment");

        // Unitless quadratic in g: g^2 + b g + c = 0 with the direction
        // normalized by the segment length.
        const Vec3 rel = p_prev - center_;
        const double inv_len = 1.0 / std::sqrt(seg_len2);
        const Vec3 dir = seg * inv_len;
        const double b = 2.0 * dot(dir, rel);
        const double c = norm2(rel) - radius_ * radius_;

        const double disc = b * b - 4.0 * c;
        if (disc < 0.0)
            throw NoIntersection("crossing_fraction: segment misses the sphere");

        // Smallest root, written to avoid cancellation: for an entering
        // segment b < 0, so -b + sqrt(disc) adds two positives.
        const double sqrt_disc = std::sqrt(disc);
        double t;
        if (b <= 0.0) {
            t = 2.0 * c / (-b + sqrt_disc);
        } else {
            t = (-b - sqrt_disc) / 2.0;
        }
        if (t < 0.0) {
            // Distinguish a start point on the surface within roundoff from a
            // segment that points away from the sphere entirely.
            if (t < -1e-9 * radius_)
                throw NoIntersection(
                    "crossing_fraction: crossing lies behind the segment start");
            t = 0.0;
        }
        double g = t * inv_len;
        if (g > 1.0) {
            if (g > 1.0 + 1e-9)
                throw NoIntersection("crossing_fraction: sphere beyond segment end");
            g = 1.0;
        }
        return g;
    }

    Vec3 point_at(const Vec3& p_prev, const Vec3& p_new, double g) const {
        return p_prev + (p_new - p_prev) * g;
    }

private:
    Vec3 center_;
    double radius_;
};

} // namespace adrx
