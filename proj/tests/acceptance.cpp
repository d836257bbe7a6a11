#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "pmso/harness.hpp"

namespace {

using namespace pmso;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int index, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", index, detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

harness::SummaryStats campaign(const std::string& function, std::size_t dimension, int runs,
                               std::uint64_t eval_cap, std::uint64_t seed) {
    harness::ExperimentSpec spec;
    spec.function = function;
    spec.dimension = dimension;
    spec.runs = runs;
    spec.seed = seed;
    spec.evaluation_cap = eval_cap;
    const harness::ExperimentResult result = harness::run_experiment(spec);
    return harness::summarize(function, dimension, result.benchmark_runs);
}

std::string fmt(const char* pattern, ...) {
    char buffer[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buffer, sizeof buffer, pattern, args);
    va_end(args);
    return buffer;
}

solar::ArrayArrangement random_arrangement(std::shared_ptr<const solar::IrradianceMatrix> irr,
                                           RandomStream& rng) {
    solar::ArrayArrangement arr = solar::ArrayArrangement::tct(std::move(irr));
    for (std::size_t c = 0; c < arr.cols; ++c)
        for (std::size_t r = arr.rows - 1; r > 0; --r) {
            const std::size_t j = rng.uniform_index(r + 1);
            std::swap(arr.labels[r * arr.cols + c], arr.labels[j * arr.cols + c]);
        }
    return arr;
}

void criterion_1() {
    const auto start = Clock::now();
    const harness::SummaryStats s = campaign("F1", 2, 30, 20000, 1);
    const double secs = seconds_since(start);
    report(1, s.mean <= 1e-3 && s.best <= 1e-6 && secs < 10.0,
           fmt("2-D F1, 30 runs at 20000 evals: mean error %.3g (need <= 1e-3), best %.3g "
               "(need <= 1e-6), %.1f s (need < 10 s)",
               s.mean, s.best, secs));
}

void criterion_2() {
    const auto start = Clock::now();
    const harness::SummaryStats s = campaign("F9", 2, 30, 20000, 1);
    const double secs = seconds_since(start);
    report(2, s.mean <= 0.5 && s.best <= 1e-3 && secs < 10.0,
           fmt("2-D F9, 30 runs: mean error %.3g (need <= 0.5), best %.3g (need <= 1e-3), "
               "%.1f s (need < 10 s)",
               s.mean, s.best, secs));
}

void criterion_3() {
    const auto start = Clock::now();
    const harness::SummaryStats s = campaign("F8", 2, 30, 20000, 1);
    const double secs = seconds_since(start);
    report(3, s.mean <= 5.0 && secs < 10.0,
           fmt("2-D F8, 30 runs: mean error %.3g (need <= 5), %.1f s (need < 10 s)", s.mean,
               secs));
}

void criterion_4() {
    const auto start = Clock::now();
    const harness::SummaryStats s = campaign("F1", 10, 30, 100000, 1);
    const double secs = seconds_since(start);
    report(4, s.mean <= 1.0 && secs < 120.0,
           fmt("10-D F1, 30 runs at 100000 evals: mean error %.3g (need <= 1), %.1f s "
               "(need < 120 s)",
               s.mean, secs));
}

void criterion_5() {
    const auto start = Clock::now();
    RandomStream rng(42);
    double worst_roundtrip = 0.0;
    double worst_norm = 0.0;
    for (std::size_t d = 2; d <= 20; ++d) {
        for (int trial = 0; trial < 1000; ++trial) {
            Vector v(d);
            for (double& x : v) x = rng.uniform(-10.0, 10.0);
            const double length = norm(v);
            if (length < 1e-6) continue;
            const Vector w = compose_wave(length, direction_angles(v));
            worst_roundtrip = std::max(worst_roundtrip, euclidean_distance(v, w) / length);

            const double magnitude = rng.uniform(0.1, 5.0);
            const Vector u = compose_wave(magnitude, random_angles(d, rng));
            worst_norm = std::max(worst_norm, std::abs(norm(u) - magnitude) / magnitude);
        }
    }
    const double secs = seconds_since(start);
    report(5, worst_roundtrip <= 1e-9 && worst_norm <= 1e-9,
           fmt("angle round-trip over 1000 vectors per D in 2..20: worst relative error %.3g, "
               "worst norm error %.3g (need <= 1e-9), %.1f s",
               worst_roundtrip, worst_norm, secs));
}

void criterion_6() {
    const auto start = Clock::now();
    const auto irr =
        std::make_shared<const solar::IrradianceMatrix>(solar::short_wide_shadow_example());
    const solar::PVParams params{};
    const double scale = params.module_voltage * params.module_current;

    const auto [baseline, curve] = solar::baseline_tct(irr, params);
    (void)curve;
    const bool baseline_ok = std::abs(baseline - 40.5 * scale) <= 1e-12 * 40.5 * scale;

    const double target = 56.7 * scale;
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        solar::DiscreteConfig cfg;  // evaluation cap defaults to 50000
        RandomStream rng(seed);
        const auto result = solar::run_discrete_pmso(cfg, irr, params, rng);
        if (result.best_power >= target * (1.0 - 1e-12)) ++hits;
    }
    const double secs = seconds_since(start);
    report(6, baseline_ok && hits >= 8 && secs < 60.0,
           fmt("9x9 shadow: TCT baseline %.4f W vs 40.5 Vm Im = %.4f W, reconfiguration hit "
               "56.7 Vm Im = %.4f W in %d/10 runs (need >= 8), %.1f s (need < 60 s)",
               baseline, 40.5 * scale, target, hits, secs));
}

void criterion_7() {
    const auto start = Clock::now();
    RandomStream gen(99);
    const solar::PVParams params{};
    int matches = 0;
    for (int instance = 0; instance < 10; ++instance) {
        solar::IrradianceMatrix m;
        m.rows = 3;
        m.cols = 3;
        m.k.resize(9);
        for (double& v : m.k) v = gen.uniform(0.05, 1.0);
        const auto irr = std::make_shared<const solar::IrradianceMatrix>(std::move(m));

        const auto [optimum, arrangement] = solar::brute_force_best(irr, params);
        (void)arrangement;
        solar::DiscreteConfig cfg;
        cfg.evaluation_cap = 3000;
        RandomStream rng(1000 + static_cast<std::uint64_t>(instance));
        const auto result = solar::run_discrete_pmso(cfg, irr, params, rng);
        if (result.best_power == optimum) ++matches;
    }
    const double secs = seconds_since(start);
    report(7, matches >= 9 && secs < 30.0,
           fmt("10 random 3x3 instances: swarm matched the exhaustive optimum exactly in "
               "%d/10 (need >= 9), %.1f s (need < 30 s)",
               matches, secs));
}

void criterion_8() {
    const auto start = Clock::now();
    const auto suite = testbed::make_suite(2, mix_seed(1));
    const auto& f9 = testbed::find_spec(suite, "F9");
    RandomStream noise(5);
    const Objective objective = [&](const Vector& x) { return testbed::evaluate(f9, x, noise); };

    SwarmConfig cfg = SwarmConfig::defaults_for(f9.bounds);
    cfg.seed = 77;
    cfg.evaluation_cap = 5000;

    // Global best never worsens along the trace.
    const RunResult first = run(cfg, objective);
    bool monotone = true;
    for (std::size_t i = 1; i < first.trace.size(); ++i) {
        monotone = monotone && first.trace[i].best_fitness <= first.trace[i - 1].best_fitness;
        monotone = monotone && first.trace[i].evaluations >= first.trace[i - 1].evaluations;
    }

    // Close-particle waves never increase the distance to the best point.
    RandomStream rng(11);
    const Bounds box = Bounds::symmetric(4, 50.0);
    bool wave_contracts = true;
    for (int trial = 0; trial < 10000; ++trial) {
        Particle p;
        p.position.resize(4);
        Vector best(4);
        for (std::size_t d = 0; d < 4; ++d) {
            p.position[d] = rng.uniform(-50.0, 50.0);
            best[d] = rng.uniform(-50.0, 50.0);
        }
        const double before = euclidean_distance(p.position, best);
        const Vector moved = apply_wave(p, best, true, rng, box);
        const double after = euclidean_distance(moved, best);
        wave_contracts = wave_contracts && after <= before * (1.0 + 1e-9) + 1e-12;
    }

    // Radius stays inside [L_N, U_N] through spawn and every adaptation.
    bool radius_bounded = true;
    for (int trial = 0; trial < 1000; ++trial) {
        Particle p;
        p.position = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        Vector best = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        p.radius = init_neighborhood(p, best, cfg, false);
        radius_bounded =
            radius_bounded && p.radius >= cfg.radius_min && p.radius <= cfg.radius_max;
        for (int round = 1; round <= 10; ++round) {
            p.outcomes.push_back(false);
            if (p.outcomes.size() > static_cast<std::size_t>(cfg.buffer_capacity))
                p.outcomes.pop_front();
            adapt_neighborhood(p, cfg, round);
            radius_bounded =
                radius_bounded && p.radius >= cfg.radius_min && p.radius <= cfg.radius_max;
        }
    }
    Particle founder;
    founder.position = {0.0, 0.0};
    radius_bounded = radius_bounded &&
                     init_neighborhood(founder, founder.position, cfg, true) == cfg.founder_radius;

    // The local-iteration schedule never drops below its floor.
    bool il_floored = true;
    int il = cfg.local_iterations;
    for (int step = 0; step < 30; ++step) {
        il = decrement_local_iterations(il, cfg);
        il_floored = il_floored && il >= cfg.local_iteration_floor;
    }
    il_floored = il_floored && il == cfg.local_iteration_floor;

    // Evaluation cap respected within one population overshoot.
    SwarmConfig capped = cfg;
    capped.evaluation_cap = 1234;
    const RunResult capped_run = run(capped, objective);
    const bool cap_ok =
        capped_run.evaluations <= 1234 + static_cast<std::uint64_t>(capped.population) &&
        capped_run.reason == StopReason::EvaluationCap;

    // Discrete moves preserve each column's label multiset.
    const auto irr =
        std::make_shared<const solar::IrradianceMatrix>(solar::short_wide_shadow_example());
    RandomStream drng(21);
    solar::ArrayArrangement current = random_arrangement(irr, drng);
    const solar::ArrayArrangement anchor = random_arrangement(irr, drng);
    bool columns_ok = true;
    for (int op = 0; op < 10000; ++op) {
        current = (op % 2 == 0) ? solar::wave_swap_pass(current, anchor, drng)
                                : solar::local_search_discrete(current, drng);
        try {
            current.validate();
        } catch (const std::exception&) {
            columns_ok = false;
            break;
        }
    }

    // Arrangement distance behaves like a metric.
    bool metric_ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = random_arrangement(irr, drng);
        const auto b = random_arrangement(irr, drng);
        const auto c = random_arrangement(irr, drng);
        const double ab = solar::arrangement_distance(a, b);
        const double bc = solar::arrangement_distance(b, c);
        const double ac = solar::arrangement_distance(a, c);
        metric_ok = metric_ok && solar::arrangement_distance(a, a) == 0.0;
        metric_ok = metric_ok && ab == solar::arrangement_distance(b, a);
        metric_ok = metric_ok && ab >= 0.0 && ab <= 1.0;
        metric_ok = metric_ok && ac <= ab + bc + 1e-12;
        metric_ok = metric_ok && (solar::same_arrangement(a, b) ? ab == 0.0 : ab > 0.0);
    }

    // Same seed, same everything.
    RandomStream noise_again(5);
    const Objective objective_again = [&](const Vector& x) {
        return testbed::evaluate(f9, x, noise_again);
    };
    const RunResult second = run(cfg, objective_again);
    bool identical = first.best_position == second.best_position &&
                     first.best_fitness == second.best_fitness && first.trace == second.trace &&
                     first.evaluations == second.evaluations && first.reason == second.reason;
    solar::DiscreteConfig dcfg;
    dcfg.evaluation_cap = 2000;
    RandomStream s1(9);
    RandomStream s2(9);
    const auto d1 = solar::run_discrete_pmso(dcfg, irr, solar::PVParams{}, s1);
    const auto d2 = solar::run_discrete_pmso(dcfg, irr, solar::PVParams{}, s2);
    identical = identical && d1.trace == d2.trace && d1.best_power == d2.best_power &&
                solar::same_arrangement(d1.best, d2.best);

    const double secs = seconds_since(start);
    report(8,
           monotone && wave_contracts && radius_bounded && il_floored && cap_ok && columns_ok &&
               metric_ok && identical,
           fmt("invariants: GB monotone %s, close-wave contraction %s, radius bounds %s, IL "
               "floor %s, eval cap %s, column multisets %s, metric axioms %s, bit-identical "
               "reruns %s, %.1f s",
               monotone ? "ok" : "VIOLATED", wave_contracts ? "ok" : "VIOLATED",
               radius_bounded ? "ok" : "VIOLATED", il_floored ? "ok" : "VIOLATED",
               cap_ok ? "ok" : "VIOLATED", columns_ok ? "ok" : "VIOLATED",
               metric_ok ? "ok" : "VIOLATED", identical ? "ok" : "VIOLATED", secs));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures == 0) {
        std::printf("all 8 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
