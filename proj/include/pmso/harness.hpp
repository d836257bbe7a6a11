#ifndef PMSO_HARNESS_HPP
#define PMSO_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmso/optimizer.hpp"
#include "pmso/solar.hpp"
#include "pmso/testbed.hpp"

namespace pmso::harness {

enum class Mode { Benchmark, Solar };

/// One reproducible experiment: a target, a run count, a base seed and
/// optional hyperparameter overrides on top of the per-target defaults.
/// Run i uses seed base+i; the benchmark instance itself is built with
/// mix_seed(base) so instance draws never alias run-0 search draws.
struct ExperimentSpec {
    Mode mode = Mode::Benchmark;
    std::string function = "F1";   // benchmark target label
    std::size_t dimension = 2;
    int runs = 30;
    std::uint64_t seed = 1;
    std::string out_dir;           // empty: write nothing
    std::string irradiance_file;   // solar; empty uses the shipped 9x9 example
    std::string arrangement_file;  // solar; optional arrangement to score
    int threads = 0;               // 0 = library default, 1 = serial reference

    std::optional<int> population;                  // NG
    std::optional<std::uint64_t> max_global_iterations;  // IG
    std::optional<int> local_iterations;            // IL
    std::optional<int> local_iteration_step;        // S_IL
    std::optional<int> local_iteration_floor;       // L_IL
    std::optional<double> initial_radius;           // N_init
    std::optional<double> radius_step;              // S_N
    std::optional<double> radius_min;               // L_N
    std::optional<double> radius_max;               // U_N
    std::optional<int> buffer_capacity;             // B
    std::optional<double> neighborhood_fraction;    // F
    std::optional<double> founder_radius;           // N_GB
    std::optional<int> close_count;                 // NC
    std::optional<std::uint64_t> evaluation_cap;
    std::optional<double> time_budget_seconds;
    std::optional<double> convergence_eps;

    bool operator==(const ExperimentSpec&) const = default;
};

/// Flat "key = value" file with # comments. Unknown keys are rejected;
/// missing keys keep their defaults. Errors carry the key and line number.
ExperimentSpec load_config(const std::string& path);
void save_config(const ExperimentSpec& spec, const std::string& path);

struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<TracePoint> trace;
    double best_fitness = 0.0;
    double error = 0.0;  // best_fitness - f_min of the target
    std::uint64_t evaluations = 0;
    StopReason reason = StopReason::EvaluationCap;
};

struct SolarRunRecord {
    std::uint64_t seed = 0;
    std::vector<TracePoint> trace;  // best power per iteration
    double best_power = 0.0;
    solar::ArrayArrangement best;
    std::uint64_t evaluations = 0;
};

struct ExperimentResult {
    std::vector<RunRecord> benchmark_runs;   // filled in Benchmark mode
    std::vector<SolarRunRecord> solar_runs;  // filled in Solar mode
};

/// Executes spec.runs independent runs with derived seeds. Identical results
/// for any thread count; convergence CSVs are written per run when out_dir
/// is set (the directory is verified writable before any run starts).
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Resolved optimizer configuration the experiment would use for one run
/// (before the per-run seed is applied). Exposed for tests and tooling.
SwarmConfig resolve_swarm_config(const ExperimentSpec& spec, const Bounds& bounds,
                                 std::size_t dimension);
solar::DiscreteConfig resolve_discrete_config(const ExperimentSpec& spec);

struct SummaryStats {
    std::string function;
    std::size_t dimension = 0;
    double best = 0.0;   // minimum final error
    double mean = 0.0;
    double std_dev = 0.0;  // population standard deviation
};

SummaryStats summarize(const std::string& function, std::size_t dimension,
                       const std::vector<RunRecord>& records);

/// CSV writers. Doubles are printed with 17 significant digits so parsing
/// the file back reproduces them exactly.
void write_convergence_csv(const std::vector<TracePoint>& trace, const std::string& path);
void write_summary_csv(const std::vector<SummaryStats>& rows, const std::string& path);
void write_power_curve_csv(const solar::PowerCurve& curve, const std::string& path);

}  // namespace pmso::harness

#endif
