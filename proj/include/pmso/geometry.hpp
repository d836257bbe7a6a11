#ifndef PMSO_GEOMETRY_HPP
#define PMSO_GEOMETRY_HPP

#include <cstddef>
#include <vector>

#include "pmso/rng.hpp"

namespace pmso {

using Vector = std::vector<double>;

/// Hyperspherical direction of a D-dimensional vector: exactly D-1 angles.
using AngleSet = std::vector<double>;

/// Per-dimension box constraints with lower[d] < upper[d].
struct Bounds {
    Vector lower;
    Vector upper;

    std::size_t dimension() const { return lower.size(); }

    /// [-half_width, +half_width] in every dimension.
    static Bounds symmetric(std::size_t dimension, double half_width);
    static Bounds box(std::size_t dimension, double lo, double hi);

    /// Mean per-dimension width; scale reference for radius defaults.
    double mean_width() const;

    bool contains(const Vector& p) const;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;

    bool operator==(const Bounds&) const = default;
};

double euclidean_distance(const Vector& a, const Vector& b);
double norm(const Vector& v);

/// Direction angles of v. The first D-2 angles are quadrant-correct
/// arctangents of (trailing norm / component); the last is the half-angle
/// form on the final two components, defined as pi when its denominator
/// vanishes with a negative leading component.
/// Throws std::invalid_argument for dimension < 2 or the zero vector.
AngleSet direction_angles(const Vector& v);

/// D-1 independent angles, each uniform in [0, 2*pi).
AngleSet random_angles(std::size_t dimension, RandomStream& rng);

/// Cartesian vector with the given magnitude along the given direction.
/// The Euclidean norm of the result equals |magnitude|.
Vector compose_wave(double magnitude, const AngleSet& angles);

/// Point in the closed ball around center: random direction from
/// random_angles/compose_wave, radius scaled by u^(1/D). Radius 0 returns
/// the center without consuming draws.
Vector sample_in_ball(const Vector& center, double radius, RandomStream& rng);

/// Component-wise clip into the box.
Vector clamp_to_bounds(Vector p, const Bounds& b);

}  // namespace pmso

#endif
