#include <chrono>
#include <cstdio>
#include <memory>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pmso/harness.hpp"

namespace {

using namespace pmso;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_benchmark_records(const harness::ExperimentResult& a,
                            const harness::ExperimentResult& b) {
    if (a.benchmark_runs.size() != b.benchmark_runs.size()) return false;
    for (std::size_t i = 0; i < a.benchmark_runs.size(); ++i) {
        const harness::RunRecord& x = a.benchmark_runs[i];
        const harness::RunRecord& y = b.benchmark_runs[i];
        if (x.best_fitness != y.best_fitness || x.evaluations != y.evaluations ||
            x.trace != y.trace)
            return false;
    }
    return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, %d thread(s) available\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP, both paths run serially\n\n");
#endif
    bool all_match = true;

    {
        harness::ExperimentSpec spec;
        spec.function = "F9";
        spec.dimension = 10;
        spec.runs = 6;
        spec.seed = 1;
        spec.evaluation_cap = 15000;

        spec.threads = 1;
        auto start = std::chrono::steady_clock::now();
        const harness::ExperimentResult serial = harness::run_experiment(spec);
        const double serial_s = seconds_since(start);

        spec.threads = 0;
        start = std::chrono::steady_clock::now();
        const harness::ExperimentResult parallel = harness::run_experiment(spec);
        const double parallel_s = seconds_since(start);

        const bool match = same_benchmark_records(serial, parallel);
        all_match = all_match && match;
        std::printf("benchmark campaign (F9 d=10, 6 runs x 15000 evals)\n");
        std::printf("  serial reference: %8.3f s\n", serial_s);
        std::printf("  OpenMP runs:      %8.3f s  (speedup %.2fx, results %s)\n\n", parallel_s,
                    serial_s / parallel_s, match ? "identical" : "DIFFER");
    }

    {
        RandomStream rng(7);
        solar::IrradianceMatrix m;
        m.rows = 5;
        m.cols = 4;
        m.k.resize(m.rows * m.cols);
        for (double& v : m.k) v = rng.uniform(0.05, 1.0);
        const auto irr = std::make_shared<const solar::IrradianceMatrix>(std::move(m));
        const solar::PVParams params{};

        auto start = std::chrono::steady_clock::now();
        const auto serial = solar::brute_force_best_serial(irr, params);
        const double serial_s = seconds_since(start);

        start = std::chrono::steady_clock::now();
        const auto parallel = solar::brute_force_best(irr, params);
        const double parallel_s = seconds_since(start);

        const bool match = serial.first == parallel.first &&
                           solar::same_arrangement(serial.second, parallel.second);
        all_match = all_match && match;
        std::printf("exhaustive 5x4 reconfiguration scan (120^3 candidates)\n");
        std::printf("  serial reference: %8.3f s\n", serial_s);
        std::printf("  OpenMP scan:      %8.3f s  (speedup %.2fx, results %s)\n", parallel_s,
                    serial_s / parallel_s, match ? "identical" : "DIFFER");
    }

    return all_match ? 0 : 1;
}
