#include "pmso/harness.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmso::harness {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_error(std::size_t line, const std::string& message) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

long long parse_int(const std::string& value, const std::string& key, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const long long parsed = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE)
        config_error(line, "invalid integer '" + value + "' for key " + key);
    return parsed;
}

unsigned long long parse_uint(const std::string& value, const std::string& key,
                              std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || value[0] == '-' || end != value.c_str() + value.size() ||
        errno == ERANGE)
        config_error(line, "invalid nonnegative integer '" + value + "' for key " + key);
    return parsed;
}

double parse_double(const std::string& value, const std::string& key, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE)
        config_error(line, "invalid number '" + value + "' for key " + key);
    return parsed;
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value,
               std::size_t line) {
    if (key == "mode") {
        if (value == "benchmark")
            spec.mode = Mode::Benchmark;
        else if (value == "solar")
            spec.mode = Mode::Solar;
        else
            config_error(line, "mode must be benchmark or solar, got '" + value + "'");
    } else if (key == "function") {
        spec.function = value;
    } else if (key == "dim") {
        spec.dimension = static_cast<std::size_t>(parse_uint(value, key, line));
    } else if (key == "runs") {
        spec.runs = static_cast<int>(parse_int(value, key, line));
    } else if (key == "seed") {
        spec.seed = parse_uint(value, key, line);
    } else if (key == "out_dir") {
        spec.out_dir = value;
    } else if (key == "irradiance") {
        spec.irradiance_file = value;
    } else if (key == "arrangement") {
        spec.arrangement_file = value;
    } else if (key == "threads") {
        spec.threads = static_cast<int>(parse_int(value, key, line));
    } else if (key == "NG") {
        spec.population = static_cast<int>(parse_int(value, key, line));
    } else if (key == "IG") {
        spec.max_global_iterations = parse_uint(value, key, line);
    } else if (key == "IL") {
        spec.local_iterations = static_cast<int>(parse_int(value, key, line));
    } else if (key == "S_IL") {
        spec.local_iteration_step = static_cast<int>(parse_int(value, key, line));
    } else if (key == "L_IL") {
        spec.local_iteration_floor = static_cast<int>(parse_int(value, key, line));
    } else if (key == "N_init") {
        spec.initial_radius = parse_double(value, key, line);
    } else if (key == "S_N") {
        spec.radius_step = parse_double(value, key, line);
    } else if (key == "L_N") {
        spec.radius_min = parse_double(value, key, line);
    } else if (key == "U_N") {
        spec.radius_max = parse_double(value, key, line);
    } else if (key == "B") {
        spec.buffer_capacity = static_cast<int>(parse_int(value, key, line));
    } else if (key == "F") {
        spec.neighborhood_fraction = parse_double(value, key, line);
    } else if (key == "N_GB") {
        spec.founder_radius = parse_double(value, key, line);
    } else if (key == "NC") {
        spec.close_count = static_cast<int>(parse_int(value, key, line));
    } else if (key == "eval_cap") {
        spec.evaluation_cap = parse_uint(value, key, line);
    } else if (key == "time_budget") {
        spec.time_budget_seconds = parse_double(value, key, line);
    } else if (key == "convergence_eps") {
        spec.convergence_eps = parse_double(value, key, line);
    } else {
        config_error(line, "unknown key '" + key + "'");
    }
}

std::ofstream open_for_writing(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

/// Runs body(0..count-1) into preassigned slots; identical results for any
/// thread count. threads == 1 takes the serial reference path.
template <typename Body>
void run_indexed(int threads, int count, const Body& body) {
#ifdef _OPENMP
    if (threads != 1) {
        std::exception_ptr error;
        const int requested = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(requested)
        for (int i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    for (int i = 0; i < count; ++i) body(i);
}

}  // namespace

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    ExperimentSpec spec;
    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto equals = line.find('=');
        if (equals == std::string::npos)
            config_error(line_number, "expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, equals));
        const std::string value = trim(line.substr(equals + 1));
        if (key.empty()) config_error(line_number, "missing key before '='");
        apply_key(spec, key, value, line_number);
    }
    return spec;
}

void save_config(const ExperimentSpec& spec, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "mode = " << (spec.mode == Mode::Benchmark ? "benchmark" : "solar") << '\n';
    out << "function = " << spec.function << '\n';
    out << "dim = " << spec.dimension << '\n';
    out << "runs = " << spec.runs << '\n';
    out << "seed = " << spec.seed << '\n';
    out << "out_dir = " << spec.out_dir << '\n';
    out << "irradiance = " << spec.irradiance_file << '\n';
    out << "arrangement = " << spec.arrangement_file << '\n';
    out << "threads = " << spec.threads << '\n';
    if (spec.population) out << "NG = " << *spec.population << '\n';
    if (spec.max_global_iterations) out << "IG = " << *spec.max_global_iterations << '\n';
    if (spec.local_iterations) out << "IL = " << *spec.local_iterations << '\n';
    if (spec.local_iteration_step) out << "S_IL = " << *spec.local_iteration_step << '\n';
    if (spec.local_iteration_floor) out << "L_IL = " << *spec.local_iteration_floor << '\n';
    if (spec.initial_radius) out << "N_init = " << format_double(*spec.initial_radius) << '\n';
    if (spec.radius_step) out << "S_N = " << format_double(*spec.radius_step) << '\n';
    if (spec.radius_min) out << "L_N = " << format_double(*spec.radius_min) << '\n';
    if (spec.radius_max) out << "U_N = " << format_double(*spec.radius_max) << '\n';
    if (spec.buffer_capacity) out << "B = " << *spec.buffer_capacity << '\n';
    if (spec.neighborhood_fraction)
        out << "F = " << format_double(*spec.neighborhood_fraction) << '\n';
    if (spec.founder_radius) out << "N_GB = " << format_double(*spec.founder_radius) << '\n';
    if (spec.close_count) out << "NC = " << *spec.close_count << '\n';
    if (spec.evaluation_cap) out << "eval_cap = " << *spec.evaluation_cap << '\n';
    if (spec.time_budget_seconds)
        out << "time_budget = " << format_double(*spec.time_budget_seconds) << '\n';
    if (spec.convergence_eps)
        out << "convergence_eps = " << format_double(*spec.convergence_eps) << '\n';
    if (!out) throw std::runtime_error("failed writing config file: " + path);
}

SwarmConfig resolve_swarm_config(const ExperimentSpec& spec, const Bounds& bounds,
                                 std::size_t dimension) {
    if (bounds.dimension() != dimension)
        throw std::invalid_argument("bounds have dimension " +
                                    std::to_string(bounds.dimension()) +
                                    " but the experiment expects " + std::to_string(dimension));
    SwarmConfig cfg = SwarmConfig::defaults_for(bounds);
    if (spec.population) {
        cfg.population = *spec.population;
        cfg.close_count = (cfg.population + 3) / 4;  // keep the ceil(NG/4) default
    }
    if (spec.initial_radius) {
        cfg.initial_radius = *spec.initial_radius;
        cfg.radius_step = 0.1 * cfg.initial_radius;  // keep the 0.1 N_init default
    }
    if (spec.max_global_iterations) cfg.max_global_iterations = *spec.max_global_iterations;
    if (spec.local_iterations) cfg.local_iterations = *spec.local_iterations;
    if (spec.local_iteration_step) cfg.local_iteration_step = *spec.local_iteration_step;
    if (spec.local_iteration_floor) cfg.local_iteration_floor = *spec.local_iteration_floor;
    if (spec.radius_step) cfg.radius_step = *spec.radius_step;
    if (spec.radius_min) cfg.radius_min = *spec.radius_min;
    if (spec.radius_max) cfg.radius_max = *spec.radius_max;
    if (spec.buffer_capacity) cfg.buffer_capacity = *spec.buffer_capacity;
    if (spec.neighborhood_fraction) cfg.neighborhood_fraction = *spec.neighborhood_fraction;
    if (spec.founder_radius) cfg.founder_radius = *spec.founder_radius;
    if (spec.close_count) cfg.close_count = *spec.close_count;
    if (spec.evaluation_cap) cfg.evaluation_cap = *spec.evaluation_cap;
    if (spec.time_budget_seconds) cfg.time_budget_seconds = *spec.time_budget_seconds;
    if (spec.convergence_eps) cfg.convergence_eps = *spec.convergence_eps;
    cfg.validate();
    return cfg;
}

solar::DiscreteConfig resolve_discrete_config(const ExperimentSpec& spec) {
    solar::DiscreteConfig cfg;
    if (spec.population) cfg.population = *spec.population;
    if (spec.max_global_iterations) cfg.max_global_iterations = *spec.max_global_iterations;
    if (spec.local_iterations) cfg.local_iterations = *spec.local_iterations;
    if (spec.local_iteration_step) cfg.local_iteration_step = *spec.local_iteration_step;
    if (spec.local_iteration_floor) cfg.local_iteration_floor = *spec.local_iteration_floor;
    if (spec.evaluation_cap) cfg.evaluation_cap = *spec.evaluation_cap;
    cfg.validate();
    return cfg;
}

SummaryStats summarize(const std::string& function, std::size_t dimension,
                       const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("cannot summarize zero runs");
    SummaryStats stats;
    stats.function = function;
    stats.dimension = dimension;
    stats.best = records.front().error;
    double sum = 0.0;
    for (const RunRecord& r : records) {
        stats.best = std::min(stats.best, r.error);
        sum += r.error;
    }
    stats.mean = sum / static_cast<double>(records.size());
    double sq = 0.0;
    for (const RunRecord& r : records) {
        const double d = r.error - stats.mean;
        sq += d * d;
    }
    stats.std_dev = std::sqrt(sq / static_cast<double>(records.size()));
    return stats;
}

void write_convergence_csv(const std::vector<TracePoint>& trace, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "iteration,evaluations,best_fitness\n";
    for (const TracePoint& pt : trace)
        out << pt.iteration << ',' << pt.evaluations << ',' << format_double(pt.best_fitness)
            << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

void write_summary_csv(const std::vector<SummaryStats>& rows, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "function,dim,best,mean,std\n";
    for (const SummaryStats& s : rows)
        out << s.function << ',' << s.dimension << ',' << format_double(s.best) << ','
            << format_double(s.mean) << ',' << format_double(s.std_dev) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

void write_power_curve_csv(const solar::PowerCurve& curve, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "remaining_rows,V_a_volts,I_amperes,P_watts\n";
    for (const solar::CurvePoint& pt : curve)
        out << pt.remaining_rows << ',' << format_double(pt.voltage) << ','
            << format_double(pt.current) << ',' << format_double(pt.power) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (spec.threads < 0) throw std::invalid_argument("threads must be nonnegative");

    namespace fs = std::filesystem;
    fs::path out_dir;
    if (!spec.out_dir.empty()) {
        out_dir = spec.out_dir;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        const fs::path probe = out_dir / ".pmso_write_probe";
        {
            std::ofstream touch(probe);
            if (!touch)
                throw std::runtime_error("output directory is not writable: " + spec.out_dir);
        }
        fs::remove(probe, ec);
    }

    ExperimentResult result;
    if (spec.mode == Mode::Benchmark) {
        const auto suite = testbed::make_suite(spec.dimension, mix_seed(spec.seed));
        const auto& target = testbed::find_spec(suite, spec.function);
        const SwarmConfig base = resolve_swarm_config(spec, target.bounds, spec.dimension);

        result.benchmark_runs.resize(static_cast<std::size_t>(spec.runs));
        run_indexed(spec.threads, spec.runs, [&](int i) {
            SwarmConfig cfg = base;
            cfg.seed = spec.seed + static_cast<std::uint64_t>(i);
            // Noise draws (F4) come from a run-local stream outside both the
            // search stream (raw seed) and the instance stream (mix_seed(base)).
            RandomStream noise(mix_seed(mix_seed(cfg.seed)));
            const RunResult run_result =
                run(cfg, [&](const Vector& x) { return testbed::evaluate(target, x, noise); });
            RunRecord& record = result.benchmark_runs[static_cast<std::size_t>(i)];
            record.seed = cfg.seed;
            record.trace = run_result.trace;
            record.best_fitness = run_result.best_fitness;
            record.error = run_result.best_fitness - target.f_min;
            record.evaluations = run_result.evaluations;
            record.reason = run_result.reason;
        });

        if (!out_dir.empty()) {
            for (std::size_t i = 0; i < result.benchmark_runs.size(); ++i) {
                const fs::path file = out_dir / ("convergence_" + spec.function + "_run" +
                                                 std::to_string(i) + ".csv");
                write_convergence_csv(result.benchmark_runs[i].trace, file.string());
            }
            const SummaryStats stats =
                summarize(spec.function, spec.dimension, result.benchmark_runs);
            write_summary_csv({stats}, (out_dir / ("summary_" + spec.function + ".csv")).string());
        }
    } else {
        auto matrix = spec.irradiance_file.empty() ? solar::short_wide_shadow_example()
                                                   : solar::load_irradiance(spec.irradiance_file);
        const auto irradiance =
            std::make_shared<const solar::IrradianceMatrix>(std::move(matrix));
        const solar::DiscreteConfig cfg = resolve_discrete_config(spec);
        const solar::PVParams params{};

        result.solar_runs.resize(static_cast<std::size_t>(spec.runs));
        run_indexed(spec.threads, spec.runs, [&](int i) {
            RandomStream rng(spec.seed + static_cast<std::uint64_t>(i));
            solar::DiscreteRunResult run_result =
                solar::run_discrete_pmso(cfg, irradiance, params, rng);
            SolarRunRecord& record = result.solar_runs[static_cast<std::size_t>(i)];
            record.seed = spec.seed + static_cast<std::uint64_t>(i);
            record.trace = std::move(run_result.trace);
            record.best_power = run_result.best_power;
            record.best = std::move(run_result.best);
            record.evaluations = run_result.evaluations;
        });

        if (!out_dir.empty()) {
            std::size_t winner = 0;
            for (std::size_t i = 0; i < result.solar_runs.size(); ++i) {
                const fs::path file =
                    out_dir / ("convergence_solar_run" + std::to_string(i) + ".csv");
                write_convergence_csv(result.solar_runs[i].trace, file.string());
                if (result.solar_runs[i].best_power > result.solar_runs[winner].best_power)
                    winner = i;
            }
            const SolarRunRecord& champion = result.solar_runs[winner];
            solar::save_arrangement(champion.best, (out_dir / "best_arrangement.txt").string());
            const auto [power, curve] =
                solar::max_power(solar::row_currents(champion.best, params),
                                 params.module_voltage);
            (void)power;
            write_power_curve_csv(curve, (out_dir / "power_curve.csv").string());
        }
    }
    return result;
}

}  // namespace pmso::harness
