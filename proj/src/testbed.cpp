#include "pmso/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace pmso::testbed {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double raw_sphere(const Vector& z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s;
}

double raw_double_sum(const Vector& z) {
    double total = 0.0, prefix = 0.0;
    for (double v : z) {
        prefix += v;
        total += prefix * prefix;
    }
    return total;
}

double raw_elliptic(const Vector& z) {
    const double last = static_cast<double>(z.size() - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        s += std::pow(1e6, static_cast<double>(i) / last) * z[i] * z[i];
    return s;
}

double raw_rosenbrock(const Vector& z) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] - z[i + 1];
        const double b = z[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double raw_griewank(const Vector& z) {
    double sum = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        sum += z[i] * z[i] / 4000.0;
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum - prod + 1.0;
}

// Arranged as two differences that both vanish exactly at z = 0.
double raw_ackley(const Vector& z) {
    double sq = 0.0, cs = 0.0;
    for (double v : z) {
        sq += v * v;
        cs += std::cos(kTwoPi * v);
    }
    const double n = static_cast<double>(z.size());
    return 20.0 * (1.0 - std::exp(-0.2 * std::sqrt(sq / n))) +
           (std::exp(1.0) - std::exp(cs / n));
}

double raw_rastrigin(const Vector& z) {
    double s = 0.0;
    for (double v : z) s += v * v - 10.0 * std::cos(kTwoPi * v) + 10.0;
    return s;
}

// Shared by the per-dimension terms and the subtracted constant so the
// difference cancels bitwise at v = 0.
double weierstrass_term(double v) {
    constexpr double a = 0.5, b = 3.0;
    constexpr int kmax = 20;
    double term = 0.0;
    for (int k = 0; k <= kmax; ++k)
        term += std::pow(a, k) * std::cos(kTwoPi * std::pow(b, k) * (v + 0.5));
    return term;
}

double raw_weierstrass(const Vector& z) {
    static const double constant = weierstrass_term(0.0);
    double s = 0.0;
    for (double v : z) s += weierstrass_term(v) - constant;
    return s;
}

double griewank_one(double t) { return t * t / 4000.0 - std::cos(t) + 1.0; }

double rosen_pair(double x, double y) {
    const double a = x * x - y;
    const double b = x - 1.0;
    return 100.0 * a * a + b * b;
}

double raw_grie_rosen(const Vector& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        s += griewank_one(rosen_pair(z[i], z[(i + 1) % z.size()]));
    return s;
}

double scaffer_pair(double x, double y) {
    const double r2 = x * x + y * y;
    const double sn = std::sin(std::sqrt(r2));
    const double dn = 1.0 + 0.001 * r2;
    return 0.5 + (sn * sn - 0.5) / (dn * dn);
}

double raw_exp_scaffer(const Vector& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        s += scaffer_pair(z[i], z[(i + 1) % z.size()]);
    return s;
}

double basic_raw(FunctionId family, const Vector& z) {
    switch (family) {
        case FunctionId::F1: return raw_sphere(z);
        case FunctionId::F2:
        case FunctionId::F4: return raw_double_sum(z);
        case FunctionId::F3: return raw_elliptic(z);
        case FunctionId::F6: return raw_rosenbrock(z);
        case FunctionId::F7: return raw_griewank(z);
        case FunctionId::F8: return raw_ackley(z);
        case FunctionId::F9:
        case FunctionId::F10: return raw_rastrigin(z);
        case FunctionId::F11: return raw_weierstrass(z);
        case FunctionId::F13: return raw_grie_rosen(z);
        case FunctionId::F14: return raw_exp_scaffer(z);
        default: throw std::logic_error("family has no raw kernel");
    }
}

Vector rotate_row(const Vector& y, const Matrix& m) {
    Vector z(y.size(), 0.0);
    for (std::size_t c = 0; c < z.size(); ++c)
        for (std::size_t d = 0; d < y.size(); ++d) z[c] += y[d] * m.at(d, c);
    return z;
}

// y is already (x - shift)/stretch; applies the member rotation and the ring
// family's internal unit offset.
Vector member_frame(const CompositionMember& m, Vector y) {
    if (m.rotation) y = rotate_row(y, *m.rotation);
    if (m.family == FunctionId::F13)
        for (double& v : y) v += 1.0;
    return y;
}

double member_raw(const CompositionMember& m, const Vector& x) {
    Vector y(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) y[d] = (x[d] - m.shift[d]) / m.stretch;
    return basic_raw(m.family, member_frame(m, std::move(y)));
}

double member_scale_probe(const CompositionMember& m, std::size_t dimension) {
    Vector y(dimension);
    for (std::size_t d = 0; d < dimension; ++d) y[d] = (5.0 - 0.0) / m.stretch;
    return std::abs(basic_raw(m.family, member_frame(m, std::move(y))));
}

double evaluate_composition(const CompositionSpec& comp, const Vector& x) {
    const std::size_t n = comp.members.size();
    std::vector<double> w(n), dist2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CompositionMember& m = comp.members[i];
        double d2 = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double diff = x[d] - m.shift[d];
            d2 += diff * diff;
        }
        dist2[i] = d2;
        w[i] = std::exp(-d2 / (2.0 * static_cast<double>(x.size()) * m.sigma * m.sigma));
    }

    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (w[i] > w[imax]) imax = i;
    const double damp = 1.0 - std::pow(w[imax], 10.0);
    for (std::size_t i = 0; i < n; ++i)
        if (i != imax) w[i] *= damp;

    double sum = 0.0;
    for (double v : w) sum += v;
    if (sum == 0.0) {  // every kernel underflowed; the nearest member takes over
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (dist2[i] < dist2[nearest]) nearest = i;
        std::fill(w.begin(), w.end(), 0.0);
        w[nearest] = 1.0;
        sum = 1.0;
    }

    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const CompositionMember& m = comp.members[i];
        f += w[i] / sum * (2000.0 * member_raw(m, x) / m.value_scale + m.bias);
    }
    return f + comp.bias;
}

Vector random_point(const Bounds& box, RandomStream& rng) {
    Vector x(box.dimension());
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = rng.uniform(box.lower[d], box.upper[d]);
    return x;
}

Matrix random_square(std::size_t n, double lo, double hi, RandomStream& rng) {
    Matrix m;
    m.rows = m.cols = n;
    m.data.resize(n * n);
    for (double& v : m.data) v = rng.uniform(lo, hi);
    return m;
}

ObjectiveSpec shifted_spec(FunctionId id, std::string label, std::size_t dimension,
                           double half_width, double f_min, RandomStream& rng) {
    ObjectiveSpec spec;
    spec.id = id;
    spec.label = std::move(label);
    spec.dimension = dimension;
    spec.bounds = Bounds::symmetric(dimension, half_width);
    spec.init_region = spec.bounds;
    spec.f_min = f_min;
    spec.transform.shift = random_point(spec.init_region, rng);
    spec.optimum = spec.transform.shift;
    return spec;
}

CompositionMember make_member(FunctionId family, double sigma, double stretch,
                              const Bounds& box, bool rotated, double bias,
                              RandomStream& rng) {
    CompositionMember m;
    m.family = family;
    m.sigma = sigma;
    m.stretch = stretch;
    m.shift = random_point(box, rng);
    if (rotated) m.rotation = random_orthogonal(box.dimension(), rng);
    m.bias = bias;
    m.value_scale = member_scale_probe(m, box.dimension());
    return m;
}

struct MemberPlan {
    FunctionId family;
    double sigma;
    double stretch;
};

ObjectiveSpec composition_spec(std::string label, std::size_t dimension, double f_min,
                               const std::vector<MemberPlan>& plans, bool rotated,
                               RandomStream& rng) {
    ObjectiveSpec spec;
    spec.id = FunctionId::Composition;
    spec.label = std::move(label);
    spec.dimension = dimension;
    spec.bounds = Bounds::symmetric(dimension, 5.0);
    spec.init_region = spec.bounds;
    spec.f_min = f_min;

    CompositionSpec comp;
    comp.bias = f_min;
    for (std::size_t i = 0; i < plans.size(); ++i)
        comp.members.push_back(make_member(plans[i].family, plans[i].sigma,
                                           plans[i].stretch, spec.bounds, rotated,
                                           100.0 * static_cast<double>(i), rng));
    spec.optimum = comp.members.front().shift;
    spec.composition = std::move(comp);
    return spec;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m;
    m.rows = m.cols = n;
    m.data.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix random_orthogonal(std::size_t n, RandomStream& rng) {
    if (n == 0) throw std::invalid_argument("orthogonal matrix needs positive size");
    Matrix m;
    m.rows = m.cols = n;
    m.data.resize(n * n);
    // Gaussian rows, then modified Gram-Schmidt; a degenerate row is redrawn.
    for (std::size_t r = 0; r < n; ++r) {
        for (int attempt = 0;; ++attempt) {
            for (std::size_t c = 0; c < n; ++c) m.at(r, c) = rng.normal();
            for (std::size_t prev = 0; prev < r; ++prev) {
                double dot = 0.0;
                for (std::size_t c = 0; c < n; ++c) dot += m.at(r, c) * m.at(prev, c);
                for (std::size_t c = 0; c < n; ++c) m.at(r, c) -= dot * m.at(prev, c);
            }
            double len = 0.0;
            for (std::size_t c = 0; c < n; ++c) len += m.at(r, c) * m.at(r, c);
            len = std::sqrt(len);
            if (len > 1e-8) {
                for (std::size_t c = 0; c < n; ++c) m.at(r, c) /= len;
                break;
            }
            if (attempt > 100)
                throw std::runtime_error("orthogonalization failed to converge");
        }
    }
    return m;
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows == 0 || cols == 0)
        throw std::runtime_error("bad matrix header in " + path);
    Matrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.resize(rows * cols);
    for (double& v : m.data)
        if (!(in >> v)) throw std::runtime_error("truncated matrix data in " + path);
    return m;
}

void save_matrix(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    out << m.rows << ' ' << m.cols << '\n' << std::setprecision(17);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c)
            out << m.at(r, c) << (c + 1 == m.cols ? '\n' : ' ');
    }
    if (!out) throw std::runtime_error("failed writing matrix file: " + path);
}

Vector Transform::apply(const Vector& x) const {
    Vector y(x.size());
    for (std::size_t d = 0; d < x.size(); ++d)
        y[d] = (x[d] - shift[d]) / stretch + offset;
    if (rotation) return rotate_row(y, *rotation);
    return y;
}

double evaluate(const ObjectiveSpec& spec, const Vector& x, RandomStream& rng) {
    if (x.size() != spec.dimension)
        throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                    " but the objective expects " +
                                    std::to_string(spec.dimension));
    switch (spec.id) {
        case FunctionId::F4: {
            const double factor = 1.0 + 0.4 * std::abs(rng.normal());
            return raw_double_sum(spec.transform.apply(x)) * factor + spec.f_min;
        }
        case FunctionId::F5: {
            double worst = 0.0;
            for (std::size_t i = 0; i < spec.dimension; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < spec.dimension; ++j)
                    acc += spec.a_matrix->at(i, j) * x[j];
                worst = std::max(worst, std::abs(acc - (*spec.b_vector)[i]));
            }
            return worst + spec.f_min;
        }
        case FunctionId::F12: {
            double total = 0.0;
            for (std::size_t i = 0; i < spec.dimension; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < spec.dimension; ++j)
                    acc += spec.trig_a->at(i, j) * std::sin(x[j]) +
                           spec.trig_b->at(i, j) * std::cos(x[j]);
                const double r = (*spec.trig_target)[i] - acc;
                total += r * r;
            }
            return total + spec.f_min;
        }
        case FunctionId::Composition:
            return evaluate_composition(*spec.composition, x);
        default:
            return basic_raw(spec.id, spec.transform.apply(x)) + spec.f_min;
    }
}

std::vector<ObjectiveSpec> make_suite(std::size_t dimension, std::uint64_t seed) {
    if (dimension < 2)
        throw std::invalid_argument("suite dimension must be at least 2");
    RandomStream rng(seed);
    std::vector<ObjectiveSpec> suite;
    suite.reserve(17);

    suite.push_back(shifted_spec(FunctionId::F1, "F1", dimension, 100.0, -450.0, rng));
    suite.push_back(shifted_spec(FunctionId::F2, "F2", dimension, 100.0, -450.0, rng));

    {
        auto spec = shifted_spec(FunctionId::F3, "F3", dimension, 100.0, -450.0, rng);
        spec.transform.rotation = random_orthogonal(dimension, rng);
        suite.push_back(std::move(spec));
    }

    suite.push_back(shifted_spec(FunctionId::F4, "F4", dimension, 100.0, -450.0, rng));

    {
        ObjectiveSpec spec;
        spec.id = FunctionId::F5;
        spec.label = "F5";
        spec.dimension = dimension;
        spec.bounds = Bounds::symmetric(dimension, 100.0);
        spec.init_region = spec.bounds;
        spec.f_min = -310.0;
        spec.a_matrix = random_square(dimension, -500.0, 500.0, rng);
        spec.optimum = random_point(spec.init_region, rng);
        Vector b(dimension, 0.0);
        for (std::size_t i = 0; i < dimension; ++i)
            for (std::size_t j = 0; j < dimension; ++j)
                b[i] += spec.a_matrix->at(i, j) * spec.optimum[j];
        spec.b_vector = std::move(b);
        suite.push_back(std::move(spec));
    }

    {
        auto spec = shifted_spec(FunctionId::F6, "F6", dimension, 100.0, 390.0, rng);
        spec.transform.offset = 1.0;
        suite.push_back(std::move(spec));
    }

    {
        // Search treated as unbounded; the box doubles as the init region.
        ObjectiveSpec spec;
        spec.id = FunctionId::F7;
        spec.label = "F7";
        spec.dimension = dimension;
        spec.bounds = Bounds::box(dimension, 0.0, 600.0);
        spec.init_region = spec.bounds;
        spec.bounded = false;
        spec.f_min = -180.0;
        spec.transform.shift = random_point(spec.init_region, rng);
        spec.transform.rotation = random_orthogonal(dimension, rng);
        spec.optimum = spec.transform.shift;
        suite.push_back(std::move(spec));
    }

    {
        auto spec = shifted_spec(FunctionId::F8, "F8", dimension, 32.0, -140.0, rng);
        spec.transform.rotation = random_orthogonal(dimension, rng);
        suite.push_back(std::move(spec));
    }

    suite.push_back(shifted_spec(FunctionId::F9, "F9", dimension, 5.0, -330.0, rng));

    {
        auto spec = shifted_spec(FunctionId::F10, "F10", dimension, 5.0, -330.0, rng);
        spec.transform.rotation = random_orthogonal(dimension, rng);
        suite.push_back(std::move(spec));
    }

    {
        auto spec = shifted_spec(FunctionId::F11, "F11", dimension, 0.5, 90.0, rng);
        spec.transform.rotation = random_orthogonal(dimension, rng);
        suite.push_back(std::move(spec));
    }

    {
        ObjectiveSpec spec;
        spec.id = FunctionId::F12;
        spec.label = "F12";
        spec.dimension = dimension;
        spec.bounds = Bounds::symmetric(dimension, std::numbers::pi);
        spec.init_region = spec.bounds;
        spec.f_min = -460.0;
        spec.trig_a = random_square(dimension, -100.0, 100.0, rng);
        spec.trig_b = random_square(dimension, -100.0, 100.0, rng);
        spec.optimum = random_point(spec.init_region, rng);
        Vector target(dimension, 0.0);
        for (std::size_t i = 0; i < dimension; ++i)
            for (std::size_t j = 0; j < dimension; ++j)
                target[i] += spec.trig_a->at(i, j) * std::sin(spec.optimum[j]) +
                             spec.trig_b->at(i, j) * std::cos(spec.optimum[j]);
        spec.trig_target = std::move(target);
        suite.push_back(std::move(spec));
    }

    {
        ObjectiveSpec spec;
        spec.id = FunctionId::F13;
        spec.label = "F13";
        spec.dimension = dimension;
        spec.bounds = Bounds::box(dimension, -3.0, 1.0);
        spec.init_region = spec.bounds;
        spec.f_min = -130.0;
        spec.transform.shift = random_point(spec.init_region, rng);
        spec.transform.offset = 1.0;
        spec.optimum = spec.transform.shift;
        suite.push_back(std::move(spec));
    }

    {
        auto spec = shifted_spec(FunctionId::F14, "F14", dimension, 100.0, -300.0, rng);
        spec.transform.rotation = random_orthogonal(dimension, rng);
        suite.push_back(std::move(spec));
    }

    suite.push_back(composition_spec("F15", dimension, 120.0,
                                     {{FunctionId::F9, 1.0, 1.0},
                                      {FunctionId::F11, 1.0, 10.0},
                                      {FunctionId::F7, 1.0, 5.0 / 60.0},
                                      {FunctionId::F8, 1.0, 5.0 / 32.0},
                                      {FunctionId::F1, 1.0, 5.0 / 100.0}},
                                     false, rng));
    suite.push_back(composition_spec("F18", dimension, 10.0,
                                     {{FunctionId::F8, 1.0, 5.0 / 32.0},
                                      {FunctionId::F9, 2.0, 1.0},
                                      {FunctionId::F1, 1.5, 5.0 / 100.0},
                                      {FunctionId::F11, 1.5, 10.0},
                                      {FunctionId::F7, 2.0, 5.0 / 60.0}},
                                     true, rng));
    suite.push_back(composition_spec("F21", dimension, 360.0,
                                     {{FunctionId::F14, 1.0, 5.0 / 100.0},
                                      {FunctionId::F9, 1.0, 1.0},
                                      {FunctionId::F13, 1.0, 10.0},
                                      {FunctionId::F11, 2.0, 5.0 / 200.0},
                                      {FunctionId::F7, 2.0, 5.0 / 100.0}},
                                     true, rng));
    return suite;
}

const ObjectiveSpec& find_spec(const std::vector<ObjectiveSpec>& suite,
                               const std::string& label) {
    for (const auto& spec : suite)
        if (spec.label == label) return spec;
    throw std::invalid_argument("unknown function label: " + label);
}

}  // namespace pmso::testbed
