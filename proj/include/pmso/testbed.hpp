#ifndef PMSO_TESTBED_HPP
#define PMSO_TESTBED_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmso/geometry.hpp"
#include "pmso/rng.hpp"

namespace pmso::testbed {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static Matrix identity(std::size_t n);

    bool operator==(const Matrix&) const = default;
};

/// Random orthogonal matrix: Gaussian entries, Gram-Schmidt orthonormalized.
Matrix random_orthogonal(std::size_t n, RandomStream& rng);

/// Plain-text matrix file: first line "rows cols", then whitespace-separated
/// row-major reals. Used to ingest externally supplied shift/rotation data.
Matrix load_matrix(const std::string& path);
void save_matrix(const Matrix& m, const std::string& path);

/// z = ((x - shift) / stretch + offset) * rotation, row-vector convention.
struct Transform {
    Vector shift;
    std::optional<Matrix> rotation;  // orthogonal; absent means identity
    double offset = 0.0;             // added to every component (e.g. the +1 families)
    double stretch = 1.0;

    Vector apply(const Vector& x) const;
};

enum class FunctionId {
    F1,   // shifted sphere
    F2,   // shifted double-sum (Schwefel 1.2 form)
    F3,   // shifted rotated high-conditioned elliptic
    F4,   // F2 with multiplicative noise
    F5,   // max |A x - B| (Schwefel 2.6 form)
    F6,   // shifted Rosenbrock
    F7,   // shifted rotated Griewank, unbounded search row
    F8,   // shifted rotated Ackley
    F9,   // shifted Rastrigin
    F10,  // shifted rotated Rastrigin
    F11,  // shifted rotated Weierstrass
    F12,  // trig fitting (Schwefel 2.13 form)
    F13,  // expanded Griewank-of-Rosenbrock ring
    F14,  // expanded Scaffer ring, rotated
    Composition,
};

/// One member of a composition: a raw basic family evaluated on
/// ((x - shift)/stretch)*rotation, scaled by 2000/value_scale, plus bias.
struct CompositionMember {
    FunctionId family = FunctionId::F1;
    double sigma = 1.0;        // kernel width for the distance weight
    double stretch = 1.0;      // lambda
    Vector shift;
    std::optional<Matrix> rotation;
    double bias = 0.0;
    double value_scale = 1.0;  // |raw| at the fixed probe point, set at build time
};

struct CompositionSpec {
    std::vector<CompositionMember> members;
    double bias = 0.0;  // global offset; equals the instance's f_min
};

/// Everything needed to evaluate one benchmark function instance.
/// Immutable after construction and shareable across concurrent runs.
struct ObjectiveSpec {
    FunctionId id = FunctionId::F1;
    std::string label;      // "F1".."F14", "F15", "F18", "F21"
    std::size_t dimension = 0;
    Bounds bounds;          // search box; equals init_region when bounded=false
    Bounds init_region;
    bool bounded = true;
    Transform transform;
    double f_min = 0.0;
    Vector optimum;         // a point where f_min is attained
    // F5 data: f = max_i |A x - B|_i + f_min
    std::optional<Matrix> a_matrix;
    std::optional<Vector> b_vector;
    // F12 data: f = sum_i (target_i - sum_j(a_ij sin x_j + b_ij cos x_j))^2 + f_min
    std::optional<Matrix> trig_a;
    std::optional<Matrix> trig_b;
    std::optional<Vector> trig_target;  // precomputed at the optimum alpha
    std::optional<CompositionSpec> composition;
};

/// Evaluates spec at x. Pure except F4, whose multiplicative noise draws
/// from the provided stream (callers pass a per-run stream).
double evaluate(const ObjectiveSpec& spec, const Vector& x, RandomStream& rng);

/// Deterministic full suite at the given dimension: F1..F14 plus the three
/// composition instances labeled F15, F18 and F21. Same (dimension, seed)
/// always builds identical specs.
std::vector<ObjectiveSpec> make_suite(std::size_t dimension, std::uint64_t seed);

/// Suite member by label; throws std::invalid_argument for unknown labels.
const ObjectiveSpec& find_spec(const std::vector<ObjectiveSpec>& suite,
                               const std::string& label);

}  // namespace pmso::testbed

#endif
