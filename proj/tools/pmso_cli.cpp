#include <cstdio>
#include <exception>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pmso/harness.hpp"

namespace {

using namespace pmso;

const char* reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::Converged: return "converged";
        case StopReason::TimeBudget: return "time-budget";
        case StopReason::IterationCap: return "iteration-cap";
        case StopReason::EvaluationCap: return "evaluation-cap";
    }
    return "unknown";
}

int run_benchmark(const harness::ExperimentSpec& spec) {
    const harness::ExperimentResult result = harness::run_experiment(spec);
    for (std::size_t i = 0; i < result.benchmark_runs.size(); ++i) {
        const harness::RunRecord& r = result.benchmark_runs[i];
        std::printf("run %zu  seed=%llu  best=%.10g  error=%.4g  evals=%llu  stop=%s\n", i,
                    static_cast<unsigned long long>(r.seed), r.best_fitness, r.error,
                    static_cast<unsigned long long>(r.evaluations), reason_name(r.reason));
    }
    const harness::SummaryStats stats =
        harness::summarize(spec.function, spec.dimension, result.benchmark_runs);
    std::printf("%s d=%zu over %d runs: best error %.6g, mean %.6g, std %.6g\n",
                stats.function.c_str(), stats.dimension, spec.runs, stats.best, stats.mean,
                stats.std_dev);
    if (!spec.out_dir.empty()) std::printf("results written to %s\n", spec.out_dir.c_str());
    return 0;
}

int score_arrangement(const harness::ExperimentSpec& spec) {
    auto matrix = spec.irradiance_file.empty() ? solar::short_wide_shadow_example()
                                               : solar::load_irradiance(spec.irradiance_file);
    const auto irradiance = std::make_shared<const solar::IrradianceMatrix>(std::move(matrix));
    const solar::PVParams params{};

    const solar::ArrayArrangement arr =
        solar::load_arrangement(spec.arrangement_file, irradiance);
    const auto [power, curve] =
        solar::max_power(solar::row_currents(arr, params), params.module_voltage);
    const auto [baseline, baseline_curve] = solar::baseline_tct(irradiance, params);
    (void)baseline_curve;

    std::printf("remaining_rows  V_a_volts  I_amperes  P_watts\n");
    for (const solar::CurvePoint& pt : curve)
        std::printf("%14d  %9.4f  %9.4f  %8.3f\n", pt.remaining_rows, pt.voltage, pt.current,
                    pt.power);
    std::printf("arrangement power %.4f W, TCT baseline %.4f W (%+.2f%%)\n", power, baseline,
                100.0 * (power / baseline - 1.0));
    if (!spec.out_dir.empty()) {
        const std::string file = spec.out_dir + "/power_curve.csv";
        harness::write_power_curve_csv(curve, file);
        std::printf("curve written to %s\n", file.c_str());
    }
    return 0;
}

int run_solar(const harness::ExperimentSpec& spec) {
    if (!spec.arrangement_file.empty()) return score_arrangement(spec);

    auto matrix = spec.irradiance_file.empty() ? solar::short_wide_shadow_example()
                                               : solar::load_irradiance(spec.irradiance_file);
    const auto irradiance = std::make_shared<const solar::IrradianceMatrix>(std::move(matrix));
    const auto [baseline, baseline_curve] = solar::baseline_tct(irradiance, solar::PVParams{});
    (void)baseline_curve;
    std::printf("array %zux%zu, TCT baseline %.4f W\n", irradiance->rows, irradiance->cols,
                baseline);

    const harness::ExperimentResult result = harness::run_experiment(spec);
    double best = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < result.solar_runs.size(); ++i) {
        const harness::SolarRunRecord& r = result.solar_runs[i];
        std::printf("run %zu  seed=%llu  best=%.4f W  evals=%llu\n", i,
                    static_cast<unsigned long long>(r.seed), r.best_power,
                    static_cast<unsigned long long>(r.evaluations));
        best = std::max(best, r.best_power);
        sum += r.best_power;
    }
    std::printf("best %.4f W, mean %.4f W over %d runs (%+.2f%% vs baseline)\n", best,
                sum / static_cast<double>(result.solar_runs.size()), spec.runs,
                100.0 * (best / baseline - 1.0));
    if (!spec.out_dir.empty()) std::printf("results written to %s\n", spec.out_dir.c_str());
    return 0;
}

int print_suite(std::size_t dimension, std::uint64_t seed) {
    const auto suite = testbed::make_suite(dimension, mix_seed(seed));
    RandomStream rng(seed);
    std::printf("%-5s %-6s %-20s %-8s %12s  %s\n", "label", "dim", "search box", "rotated",
                "f_min", "optimum");
    for (const auto& spec : suite) {
        bool rotated = spec.transform.rotation.has_value();
        if (spec.composition)
            for (const auto& member : spec.composition->members)
                rotated = rotated || member.rotation.has_value();
        char box[48];
        std::snprintf(box, sizeof box, "[%g, %g]%s", spec.bounds.lower[0], spec.bounds.upper[0],
                      spec.bounded ? "" : " (init)");
        const double at_optimum = testbed::evaluate(spec, spec.optimum, rng);
        std::printf("%-5s %-6zu %-20s %-8s %12g  %s\n", spec.label.c_str(), spec.dimension, box,
                    rotated ? "yes" : "no", spec.f_min,
                    at_optimum == spec.f_min ? "exact" : "MISMATCH");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PMSO swarm optimization toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string function;
    std::size_t dimension = 2;
    int runs = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string irradiance_file;
    std::string arrangement_file;
    int threads = 0;
    std::uint64_t eval_cap = 0;
    double time_budget = 0.0;
    double eps = 0.0;
    int population = 0;

    CLI::App* bench = app.add_subcommand("benchmark", "Optimize one benchmark function");
    bench->add_option("--config", config_path, "Config file; flags override its keys");
    bench->add_option("-f,--function", function, "Target label, F1..F14, F15, F18, F21");
    bench->add_option("-d,--dim", dimension, "Search dimension");
    bench->add_option("-r,--runs", runs, "Independent runs (seeds base, base+1, ...)");
    bench->add_option("-s,--seed", seed, "Base seed");
    bench->add_option("-o,--out", out_dir, "Directory for convergence and summary CSVs");
    bench->add_option("-t,--threads", threads, "0 = all cores, 1 = serial reference");
    bench->add_option("--population", population, "Swarm size NG");
    bench->add_option("--eval-cap", eval_cap, "Objective evaluation budget per run");
    bench->add_option("--time-budget", time_budget, "Wall-clock budget per run, seconds");
    bench->add_option("--eps", eps, "Convergence threshold on the best-fitness change");

    CLI::App* solar_cmd = app.add_subcommand("solar", "Reconfigure a shaded PV array");
    solar_cmd->add_option("--config", config_path, "Config file; flags override its keys");
    solar_cmd->add_option("--irradiance", irradiance_file,
                          "Shading matrix file; default is the shipped 9x9 pattern");
    solar_cmd->add_option("--arrangement", arrangement_file,
                          "Score this arrangement instead of optimizing");
    solar_cmd->add_option("-r,--runs", runs, "Independent runs (seeds base, base+1, ...)");
    solar_cmd->add_option("-s,--seed", seed, "Base seed");
    solar_cmd->add_option("-o,--out", out_dir, "Directory for CSVs and the best arrangement");
    solar_cmd->add_option("-t,--threads", threads, "0 = all cores, 1 = serial reference");
    solar_cmd->add_option("--population", population, "Swarm size NG");
    solar_cmd->add_option("--eval-cap", eval_cap, "Power evaluation budget per run");

    CLI::App* suite_cmd = app.add_subcommand("suite", "List the benchmark suite an experiment uses");
    suite_cmd->add_option("-d,--dim", dimension, "Search dimension");
    suite_cmd->add_option("-s,--seed", seed, "Base seed the instances derive from");

    CLI11_PARSE(app, argc, argv);

    try {
        if (suite_cmd->parsed()) return print_suite(dimension, seed);

        CLI::App* sub = bench->parsed() ? bench : solar_cmd;
        const auto given = [sub](const char* name) {
            const CLI::Option* opt = sub->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        harness::ExperimentSpec spec;
        if (given("--config")) spec = harness::load_config(config_path);
        spec.mode = bench->parsed() ? harness::Mode::Benchmark : harness::Mode::Solar;
        if (given("--function")) spec.function = function;
        if (given("--dim")) spec.dimension = dimension;
        if (given("--runs")) spec.runs = runs;
        if (given("--seed")) spec.seed = seed;
        if (given("--out")) spec.out_dir = out_dir;
        if (given("--threads")) spec.threads = threads;
        if (given("--population")) spec.population = population;
        if (given("--eval-cap")) spec.evaluation_cap = eval_cap;
        if (given("--time-budget")) spec.time_budget_seconds = time_budget;
        if (given("--eps")) spec.convergence_eps = eps;
        if (given("--irradiance")) spec.irradiance_file = irradiance_file;
        if (given("--arrangement")) spec.arrangement_file = arrangement_file;

        return bench->parsed() ? run_benchmark(spec) : run_solar(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
