#include "pmso/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmso {

Bounds Bounds::symmetric(std::size_t dimension, double half_width) {
    return box(dimension, -half_width, half_width);
}

Bounds Bounds::box(std::size_t dimension, double lo, double hi) {
    Bounds b;
    b.lower.assign(dimension, lo);
    b.upper.assign(dimension, hi);
    b.validate();
    return b;
}

double Bounds::mean_width() const {
    double w = 0.0;
    for (std::size_t d = 0; d < lower.size(); ++d) w += upper[d] - lower[d];
    return w / static_cast<double>(lower.size());
}

bool Bounds::contains(const Vector& p) const {
    if (p.size() != lower.size()) return false;
    for (std::size_t d = 0; d < p.size(); ++d)
        if (p[d] < lower[d] || p[d] > upper[d]) return false;
    return true;
}

void Bounds::validate() const {
    if (lower.empty()) throw std::invalid_argument("bounds: empty");
    if (lower.size() != upper.size())
        throw std::invalid_argument("bounds: lower/upper dimension mismatch");
    for (std::size_t d = 0; d < lower.size(); ++d)
        if (!(lower[d] < upper[d]))
            throw std::invalid_argument("bounds: lower must be below upper in dimension " +
                                        std::to_string(d + 1));
}

double euclidean_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

AngleSet direction_angles(const Vector& v) {
    const std::size_t d = v.size();
    if (d < 2) throw std::invalid_argument("direction_angles: dimension must be at least 2");

    // suffix[i] = v[i]^2 + ... + v[d-1]^2
    std::vector<double> suffix(d + 1, 0.0);
    for (std::size_t i = d; i-- > 0;) suffix[i] = suffix[i + 1] + v[i] * v[i];
    if (suffix[0] == 0.0)
        throw std::invalid_argument("direction_angles: zero vector has no direction");

    AngleSet angles(d - 1);
    for (std::size_t k = 0; k + 2 < d; ++k)
        angles[k] = std::atan2(std::sqrt(suffix[k + 1]), v[k]);

    const double x = v[d - 2];
    const double y = v[d - 1];
    if (y == 0.0 && x < 0.0)
        angles[d - 2] = std::numbers::pi;  // half-angle denominator vanishes
    else
        angles[d - 2] = 2.0 * std::atan2(y, x + std::hypot(x, y));
    return angles;
}

AngleSet random_angles(std::size_t dimension, RandomStream& rng) {
    if (dimension < 2) throw std::invalid_argument("random_angles: dimension must be at least 2");
    AngleSet angles(dimension - 1);
    for (auto& a : angles) a = rng.uniform01() * 2.0 * std::numbers::pi;
    return angles;
}

Vector compose_wave(double magnitude, const AngleSet& angles) {
    if (angles.empty()) throw std::invalid_argument("compose_wave: empty angle set");
    const std::size_t d = angles.size() + 1;
    Vector w(d);
    double sin_prod = 1.0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        w[k] = magnitude * std::cos(angles[k]) * sin_prod;
        sin_prod *= std::sin(angles[k]);
    }
    w[d - 1] = magnitude * sin_prod;
    return w;
}

Vector sample_in_ball(const Vector& center, double radius, RandomStream& rng) {
    if (center.size() < 2)
        throw std::invalid_argument("sample_in_ball: dimension must be at least 2");
    if (radius < 0.0) throw std::invalid_argument("sample_in_ball: negative radius");
    if (radius == 0.0) return center;
    const AngleSet angles = random_angles(center.size(), rng);
    const double u = rng.uniform01();
    const double r = radius * std::pow(u, 1.0 / static_cast<double>(center.size()));
    Vector p = compose_wave(r, angles);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += center[i];
    return p;
}

Vector clamp_to_bounds(Vector p, const Bounds& b) {
    if (p.size() != b.dimension())
        throw std::invalid_argument("clamp_to_bounds: dimension mismatch");
    for (std::size_t d = 0; d < p.size(); ++d)
        p[d] = std::clamp(p[d], b.lower[d], b.upper[d]);
    return p;
}

}  // namespace pmso
