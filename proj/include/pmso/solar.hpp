#ifndef PMSO_SOLAR_HPP
#define PMSO_SOLAR_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pmso/optimizer.hpp"  // TracePoint
#include "pmso/rng.hpp"

namespace pmso::solar {

/// Per-cell shading factors in [0, 1]; 1 means full nominal irradiance.
struct IrradianceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> k;  // row-major

    double at(std::size_t r, std::size_t c) const { return k[r * cols + c]; }

    /// Throws std::invalid_argument on shape/value violations.
    void validate() const;

    bool operator==(const IrradianceMatrix&) const = default;
};

/// Text format: first line "R C", then R rows of C shading factors.
IrradianceMatrix load_irradiance(const std::string& path);

/// The shipped 9x9 short-and-wide shadow pattern. Total-cross-tied row sums
/// are (8.1 x5, 6.6, 3.6 x3); the best reachable rearrangement balances the
/// rows to (6.6 x4, 6.3 x5).
IrradianceMatrix short_wide_shadow_example();

struct PVParams {
    double module_voltage = 22.512;  // V_m, volts at the module MPP
    double module_current = 3.902;   // I_m, amps at full irradiance
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// Electrical wiring stays total-cross-tied; reconfiguration relabels which
/// source row each cell's irradiance comes from, column by column.
/// labels[r*cols + c] is the source row of the cell sitting at (r, c).
struct ArrayArrangement {
    std::shared_ptr<const IrradianceMatrix> irradiance;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> labels;

    int label(std::size_t r, std::size_t c) const { return labels[r * cols + c]; }
    double cell(std::size_t r, std::size_t c) const {
        return irradiance->at(static_cast<std::size_t>(label(r, c)), c);
    }

    /// Identity arrangement: the plain TCT wiring of the given matrix.
    static ArrayArrangement tct(std::shared_ptr<const IrradianceMatrix> irr);

    /// Throws std::invalid_argument naming the first non-permutation column.
    void validate() const;
};

/// Label-level equality (same shape, same cell sources).
bool same_arrangement(const ArrayArrangement& a, const ArrayArrangement& b);

/// Row current under full conduction: I_m times the row's shading sum.
std::vector<double> row_currents(const ArrayArrangement& arr, const PVParams& p);

struct CurvePoint {
    int remaining_rows;
    double voltage;  // remaining_rows * V_m
    double current;
    double power;
};
using PowerCurve = std::vector<CurvePoint>;

/// Bypass sweep: sorting currents ascending, candidate r keeps (R-r+1) rows
/// conducting at the r-th lowest current. Returns the best power and the
/// whole curve (voltage strictly decreasing along it).
std::pair<double, PowerCurve> max_power(std::vector<double> currents,
                                        double module_voltage);

/// Normalized arrangement mismatch: sqrt(#differing cells / (R*C)), in [0,1].
double arrangement_distance(const ArrayArrangement& a, const ArrayArrangement& b);

/// Discrete sea wave toward `best`. Column by column the mismatch distance is
/// recomputed (earlier swaps count), then each row swaps within the column
/// with probability equal to the distance, by a rounded uniform offset of at
/// most round(R*distance), ring-wrapped.
ArrayArrangement wave_swap_pass(ArrayArrangement arr, const ArrayArrangement& best,
                                RandomStream& rng);

/// Candidate one in-column swap of two distinct uniform rows.
ArrayArrangement local_search_discrete(const ArrayArrangement& arr, RandomStream& rng);

/// Ring wrap of a 1-based row position after adding a wave offset.
inline long long wrap_row(long long position_1based, long long rows) {
    if (position_1based < 1) return position_1based + rows;
    if (position_1based > rows) return position_1based - rows;
    return position_1based;
}

struct DiscreteConfig {
    int population = 40;                          // NG
    std::uint64_t max_global_iterations = 1000000;  // IG
    int local_iterations = 50;                    // IL
    int local_iteration_step = 5;                 // S_IL
    int local_iteration_floor = 10;               // L_IL
    std::uint64_t evaluation_cap = 50000;
    int collision_retry_limit = 100;

    void validate() const;
};

struct DiscreteRunResult {
    ArrayArrangement best;
    double best_power = 0.0;
    std::vector<TracePoint> trace;  // best power per global iteration, non-decreasing
    std::uint64_t evaluations = 0;
};

/// Discrete swarm run: random in-column shuffles with collision redraw,
/// wave_swap_pass instead of the continuous wave, greedy single-swap local
/// search, no neighborhood adaptation, founder copied onto the best.
DiscreteRunResult run_discrete_pmso(const DiscreteConfig& cfg,
                                    std::shared_ptr<const IrradianceMatrix> irr,
                                    const PVParams& p, RandomStream& rng);

/// Exhaustive optimum over per-column permutations with the first column
/// fixed (row relabeling symmetry). Rejects instances with more than 1e7
/// candidates. Ties resolve to the first candidate in lexicographic order.
std::pair<double, ArrayArrangement> brute_force_best(
    std::shared_ptr<const IrradianceMatrix> irr, const PVParams& p);

/// Same enumeration, single-threaded recursive reference.
std::pair<double, ArrayArrangement> brute_force_best_serial(
    std::shared_ptr<const IrradianceMatrix> irr, const PVParams& p);

/// Power of the unmodified TCT wiring.
std::pair<double, PowerCurve> baseline_tct(std::shared_ptr<const IrradianceMatrix> irr,
                                           const PVParams& p);

/// Text format: first line "R C", then R rows of C 1-based source-row labels.
ArrayArrangement load_arrangement(const std::string& path,
                                  std::shared_ptr<const IrradianceMatrix> irr);
void save_arrangement(const ArrayArrangement& arr, const std::string& path);

}  // namespace pmso::solar

#endif
