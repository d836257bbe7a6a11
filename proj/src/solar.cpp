#include "pmso/solar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace pmso::solar {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

double power_of(const ArrayArrangement& arr, const PVParams& p) {
    return max_power(row_currents(arr, p), p.module_voltage).first;
}

void require_same_shape(const ArrayArrangement& a, const ArrayArrangement& b) {
    require(a.rows == b.rows && a.cols == b.cols,
            "arrangements have different shapes");
}

std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

// k-th permutation of 0..n-1 in lexicographic order.
std::vector<int> unrank_permutation(std::uint64_t k, std::size_t n) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> perm(n);
    std::uint64_t block = factorial(n);
    for (std::size_t i = 0; i < n; ++i) {
        block /= n - i;
        const std::size_t idx = static_cast<std::size_t>(k / block);
        k %= block;
        perm[i] = pool[idx];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return perm;
}

void check_brute_force_size(const IrradianceMatrix& irr) {
    double candidates = 1.0;
    for (std::size_t c = 1; c < irr.cols; ++c) {
        for (std::size_t i = 2; i <= irr.rows; ++i) candidates *= static_cast<double>(i);
        if (candidates > 1e7)
            throw std::invalid_argument(
                "exhaustive search would exceed 1e7 candidates for this array");
    }
}

}  // namespace

void IrradianceMatrix::validate() const {
    require(rows >= 1 && cols >= 1, "irradiance matrix must be non-empty");
    require(k.size() == rows * cols, "irradiance matrix size does not match its shape");
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = at(r, c);
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument(
                    "shading factor at row " + std::to_string(r) + ", column " +
                    std::to_string(c) + " is outside [0, 1]");
        }
}

IrradianceMatrix load_irradiance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open irradiance file: " + path);
    IrradianceMatrix m;
    if (!(in >> m.rows >> m.cols) || m.rows == 0 || m.cols == 0)
        throw std::runtime_error("bad irradiance header in " + path);
    m.k.resize(m.rows * m.cols);
    for (double& v : m.k)
        if (!(in >> v)) throw std::runtime_error("truncated irradiance data in " + path);
    m.validate();
    return m;
}

IrradianceMatrix short_wide_shadow_example() {
    IrradianceMatrix m;
    m.rows = m.cols = 9;
    m.k.assign(81, 0.9);
    const auto set_row = [&m](std::size_t r, std::initializer_list<double> values) {
        std::size_t c = 0;
        for (double v : values) m.k[r * 9 + c++] = v;
    };
    set_row(5, {0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.6, 0.3, 0.3});
    set_row(6, {0.6, 0.6, 0.6, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3});
    set_row(7, {0.3, 0.3, 0.3, 0.6, 0.6, 0.6, 0.3, 0.3, 0.3});
    set_row(8, {0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.6, 0.6, 0.6});
    return m;
}

ArrayArrangement ArrayArrangement::tct(std::shared_ptr<const IrradianceMatrix> irr) {
    irr->validate();
    ArrayArrangement arr;
    arr.rows = irr->rows;
    arr.cols = irr->cols;
    arr.labels.resize(arr.rows * arr.cols);
    for (std::size_t r = 0; r < arr.rows; ++r)
        for (std::size_t c = 0; c < arr.cols; ++c)
            arr.labels[r * arr.cols + c] = static_cast<int>(r);
    arr.irradiance = std::move(irr);
    return arr;
}

void ArrayArrangement::validate() const {
    require(irradiance != nullptr, "arrangement has no irradiance matrix");
    require(rows == irradiance->rows && cols == irradiance->cols,
            "arrangement shape does not match its irradiance matrix");
    require(labels.size() == rows * cols, "label count does not match the shape");
    std::vector<char> seen(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t r = 0; r < rows; ++r) {
            const int v = label(r, c);
            if (v < 0 || static_cast<std::size_t>(v) >= rows || seen[v])
                throw std::invalid_argument("column " + std::to_string(c) +
                                            " is not a permutation of the source rows");
            seen[v] = 1;
        }
    }
}

bool same_arrangement(const ArrayArrangement& a, const ArrayArrangement& b) {
    return a.rows == b.rows && a.cols == b.cols && a.labels == b.labels;
}

std::vector<double> row_currents(const ArrayArrangement& arr, const PVParams& p) {
    std::vector<double> currents(arr.rows);
    for (std::size_t r = 0; r < arr.rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < arr.cols; ++c) sum += arr.cell(r, c);
        currents[r] = p.module_current * sum;
    }
    return currents;
}

std::pair<double, PowerCurve> max_power(std::vector<double> currents,
                                        double module_voltage) {
    require(!currents.empty(), "power sweep needs at least one row current");
    std::sort(currents.begin(), currents.end());
    const int rows = static_cast<int>(currents.size());
    PowerCurve curve;
    curve.reserve(currents.size());
    double best = 0.0;
    for (int r = 1; r <= rows; ++r) {
        const int remaining = rows - r + 1;
        CurvePoint pt;
        pt.remaining_rows = remaining;
        pt.voltage = remaining * module_voltage;
        pt.current = currents[static_cast<std::size_t>(r - 1)];
        pt.power = pt.voltage * pt.current;
        best = std::max(best, pt.power);
        curve.push_back(pt);
    }
    return {best, std::move(curve)};
}

double arrangement_distance(const ArrayArrangement& a, const ArrayArrangement& b) {
    require_same_shape(a, b);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < a.labels.size(); ++i)
        if (a.labels[i] != b.labels[i]) ++mismatches;
    return std::sqrt(static_cast<double>(mismatches) /
                     static_cast<double>(a.rows * a.cols));
}

ArrayArrangement wave_swap_pass(ArrayArrangement arr, const ArrayArrangement& best,
                                RandomStream& rng) {
    require_same_shape(arr, best);
    const long long rows = static_cast<long long>(arr.rows);
    for (std::size_t c = 0; c < arr.cols; ++c) {
        // Swaps already made in earlier columns feed back into the distance.
        const double dist = arrangement_distance(arr, best);
        const double magnitude = std::llround(static_cast<double>(rows) * dist);
        for (std::size_t r = 0; r < arr.rows; ++r) {
            if (rng.uniform01() < dist) {
                const long long offset = std::llround(rng.uniform(-magnitude, magnitude));
                const long long target =
                    wrap_row(static_cast<long long>(r) + 1 + offset, rows);
                std::swap(arr.labels[r * arr.cols + c],
                          arr.labels[static_cast<std::size_t>(target - 1) * arr.cols + c]);
            }
        }
    }
    return arr;
}

ArrayArrangement local_search_discrete(const ArrayArrangement& arr, RandomStream& rng) {
    require(arr.rows >= 2, "in-column swaps need at least two rows");
    ArrayArrangement next = arr;
    const std::size_t c = rng.uniform_index(arr.cols);
    const std::size_t r1 = rng.uniform_index(arr.rows);
    std::size_t r2 = rng.uniform_index(arr.rows - 1);
    if (r2 >= r1) ++r2;
    std::swap(next.labels[r1 * next.cols + c], next.labels[r2 * next.cols + c]);
    return next;
}

void DiscreteConfig::validate() const {
    require(population >= 1, "NG must be positive");
    require(max_global_iterations >= 1, "IG must be positive");
    require(local_iterations >= 1, "IL must be positive");
    require(local_iteration_step >= 0, "S_IL must be nonnegative");
    require(local_iteration_floor >= 1, "L_IL must be positive");
    require(local_iteration_floor <= local_iterations, "L_IL must not exceed IL");
    require(evaluation_cap >= 1, "eval cap must be positive");
    require(collision_retry_limit >= 0, "collision retry limit must be nonnegative");
}

DiscreteRunResult run_discrete_pmso(const DiscreteConfig& cfg,
                                    std::shared_ptr<const IrradianceMatrix> irr,
                                    const PVParams& p, RandomStream& rng) {
    cfg.validate();
    irr->validate();
    require(irr->rows >= 2, "reconfiguration needs at least two rows");

    struct Swimmer {
        ArrayArrangement arr;
        double power = 0.0;
    };
    std::vector<Swimmer> swarm(static_cast<std::size_t>(cfg.population));

    for (std::size_t i = 0; i < swarm.size(); ++i) {
        ArrayArrangement arr = ArrayArrangement::tct(irr);
        int redraws = 0;
        for (;;) {
            for (std::size_t c = 0; c < arr.cols; ++c)
                for (std::size_t r = arr.rows - 1; r > 0; --r) {
                    const std::size_t j = rng.uniform_index(r + 1);
                    std::swap(arr.labels[r * arr.cols + c], arr.labels[j * arr.cols + c]);
                }
            bool collides = false;
            for (std::size_t k = 0; k < i && !collides; ++k)
                collides = arrangement_distance(arr, swarm[k].arr) == 0.0;
            if (!collides) break;
            if (redraws == cfg.collision_retry_limit) {
                std::cerr << "warning: arrangement " << i << " still collides after "
                          << redraws << " redraws, accepting placement\n";
                break;
            }
            ++redraws;
        }
        swarm[i].arr = std::move(arr);
    }

    std::uint64_t evaluations = 0;
    for (Swimmer& s : swarm) {
        s.power = power_of(s.arr, p);
        ++evaluations;
    }

    std::size_t founder = 0;
    for (std::size_t i = 1; i < swarm.size(); ++i)
        if (swarm[i].power > swarm[founder].power) founder = i;
    ArrayArrangement best = swarm[founder].arr;
    double best_power = swarm[founder].power;

    DiscreteRunResult result;
    result.trace.push_back({0, evaluations, best_power});

    int local_iterations = cfg.local_iterations;
    std::uint64_t iteration = 0;
    for (;;) {
        ++iteration;
        bool out_of_budget = false;
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            if (evaluations >= cfg.evaluation_cap) {
                out_of_budget = true;
                break;
            }
            Swimmer& s = swarm[i];
            if (iteration > 1) {
                if (i == founder) {
                    s.arr = best;  // searches exactly around the best, no re-evaluation
                    s.power = best_power;
                } else {
                    s.arr = wave_swap_pass(std::move(s.arr), best, rng);
                    s.power = power_of(s.arr, p);
                    ++evaluations;
                }
            }
            for (int j = 0; j < local_iterations; ++j) {
                if (evaluations >= cfg.evaluation_cap) {
                    out_of_budget = true;
                    break;
                }
                ArrayArrangement candidate = local_search_discrete(s.arr, rng);
                const double candidate_power = power_of(candidate, p);
                ++evaluations;
                if (candidate_power > s.power) {
                    s.power = candidate_power;
                    s.arr = std::move(candidate);
                }
            }
            if (s.power > best_power) {  // strict improvement takes the lead
                best_power = s.power;
                best = s.arr;
                founder = i;
            }
            if (out_of_budget) break;
        }
        local_iterations = std::max(local_iterations - cfg.local_iteration_step,
                                    cfg.local_iteration_floor);
        result.trace.push_back({iteration, evaluations, best_power});
        if (iteration >= cfg.max_global_iterations || evaluations >= cfg.evaluation_cap)
            break;
    }

    result.best = std::move(best);
    result.best_power = best_power;
    result.evaluations = evaluations;
    return result;
}

std::pair<double, ArrayArrangement> brute_force_best_serial(
    std::shared_ptr<const IrradianceMatrix> irr, const PVParams& p) {
    irr->validate();
    check_brute_force_size(*irr);
    const std::size_t rows = irr->rows, cols = irr->cols;

    ArrayArrangement current = ArrayArrangement::tct(irr);
    ArrayArrangement best = current;
    double best_power = -1.0;

    std::vector<double> sums(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) sums[r] = irr->at(r, 0);

    std::vector<int> perm(rows);
    const auto descend = [&](const auto& self, std::size_t c,
                             const std::vector<double>& partial) -> void {
        if (c == cols) {
            std::vector<double> currents(rows);
            for (std::size_t r = 0; r < rows; ++r)
                currents[r] = p.module_current * partial[r];
            const double power = max_power(std::move(currents), p.module_voltage).first;
            if (power > best_power) {  // first candidate in enumeration order wins ties
                best_power = power;
                best.labels = current.labels;
            }
            return;
        }
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<int> column = perm;
        do {
            std::vector<double> next = partial;
            for (std::size_t r = 0; r < rows; ++r) {
                current.labels[r * cols + c] = column[r];
                next[r] += irr->at(static_cast<std::size_t>(column[r]), c);
            }
            self(self, c + 1, next);
        } while (std::next_permutation(column.begin(), column.end()));
    };
    descend(descend, 1, sums);
    return {best_power, std::move(best)};
}

std::pair<double, ArrayArrangement> brute_force_best(
    std::shared_ptr<const IrradianceMatrix> irr, const PVParams& p) {
    irr->validate();
    check_brute_force_size(*irr);
    const std::size_t rows = irr->rows, cols = irr->cols;
    const std::uint64_t per_column = factorial(rows);
    std::uint64_t total = 1;
    for (std::size_t c = 1; c < cols; ++c) total *= per_column;

    double best_power = -1.0;
    std::uint64_t best_id = 0;

#pragma omp parallel
    {
        double local_power = -1.0;
        std::uint64_t local_id = 0;
        std::vector<double> sums(rows);
        std::vector<double> currents(rows);

#pragma omp for schedule(static)
        for (long long signed_id = 0; signed_id < static_cast<long long>(total);
             ++signed_id) {
            const std::uint64_t id = static_cast<std::uint64_t>(signed_id);
            for (std::size_t r = 0; r < rows; ++r) sums[r] = irr->at(r, 0);
            // column 1 holds the most significant digit of the candidate id
            std::uint64_t remainder = id;
            std::uint64_t scale = total;
            for (std::size_t c = 1; c < cols; ++c) {
                scale /= per_column;
                const auto column = unrank_permutation(remainder / scale, rows);
                remainder %= scale;
                for (std::size_t r = 0; r < rows; ++r)
                    sums[r] += irr->at(static_cast<std::size_t>(column[r]), c);
            }
            for (std::size_t r = 0; r < rows; ++r)
                currents[r] = p.module_current * sums[r];
            const double power = max_power(currents, p.module_voltage).first;
            if (power > local_power || (power == local_power && id < local_id)) {
                local_power = power;
                local_id = id;
            }
        }

#pragma omp critical
        {
            if (local_power > best_power ||
                (local_power == best_power && local_id < best_id)) {
                best_power = local_power;
                best_id = local_id;
            }
        }
    }

    ArrayArrangement best = ArrayArrangement::tct(irr);
    std::uint64_t remainder = best_id;
    std::uint64_t scale = total;
    for (std::size_t c = 1; c < cols; ++c) {
        scale /= per_column;
        const auto column = unrank_permutation(remainder / scale, rows);
        remainder %= scale;
        for (std::size_t r = 0; r < rows; ++r) best.labels[r * cols + c] = column[r];
    }
    return {best_power, std::move(best)};
}

std::pair<double, PowerCurve> baseline_tct(std::shared_ptr<const IrradianceMatrix> irr,
                                           const PVParams& p) {
    const auto arr = ArrayArrangement::tct(std::move(irr));
    return max_power(row_currents(arr, p), p.module_voltage);
}

ArrayArrangement load_arrangement(const std::string& path,
                                  std::shared_ptr<const IrradianceMatrix> irr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open arrangement file: " + path);
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols))
        throw std::runtime_error("bad arrangement header in " + path);
    if (rows != irr->rows || cols != irr->cols)
        throw std::runtime_error("arrangement shape in " + path +
                                 " does not match the irradiance matrix");
    ArrayArrangement arr = ArrayArrangement::tct(std::move(irr));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            long long v = 0;
            if (!(in >> v))
                throw std::runtime_error("truncated arrangement data in " + path);
            if (v < 1 || v > static_cast<long long>(rows))
                throw std::runtime_error("label " + std::to_string(v) + " in " + path +
                                         " is outside 1.." + std::to_string(rows));
            arr.labels[r * cols + c] = static_cast<int>(v - 1);
        }
    arr.validate();
    return arr;
}

void save_arrangement(const ArrayArrangement& arr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write arrangement file: " + path);
    out << arr.rows << ' ' << arr.cols << '\n';
    for (std::size_t r = 0; r < arr.rows; ++r)
        for (std::size_t c = 0; c < arr.cols; ++c)
            out << arr.label(r, c) + 1 << (c + 1 == arr.cols ? '\n' : ' ');
    if (!out) throw std::runtime_error("failed writing arrangement file: " + path);
}

}  // namespace pmso::solar
