#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>

#include "pmso/optimizer.hpp"

using namespace pmso;

namespace {

double sphere(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

SwarmConfig small_config(std::size_t dim = 2, double half_width = 100.0) {
    SwarmConfig cfg = SwarmConfig::defaults_for(Bounds::symmetric(dim, half_width));
    cfg.seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("defaults scale with the bound width") {
    const Bounds b = Bounds::symmetric(2, 100.0);  // mean width 200
    const SwarmConfig cfg = SwarmConfig::defaults_for(b);
    CHECK(cfg.population == 40);
    CHECK(cfg.local_iterations == 50);
    CHECK(cfg.initial_radius == doctest::Approx(10.0));
    CHECK(cfg.radius_step == doctest::Approx(1.0));
    CHECK(cfg.radius_min == doctest::Approx(2e-4));
    CHECK(cfg.radius_max == doctest::Approx(100.0));
    CHECK(cfg.founder_radius == doctest::Approx(2.0));
    CHECK(cfg.close_count == 10);
    REQUIRE(cfg.evaluation_cap.has_value());
    CHECK(*cfg.evaluation_cap == 20000);
    CHECK_NOTHROW(cfg.validate());

    // The probe floor rises with dimension and saturates at the founder scale.
    const SwarmConfig ten = SwarmConfig::defaults_for(Bounds::symmetric(10, 100.0));
    CHECK(ten.radius_min == doctest::Approx(ten.founder_radius));
    const SwarmConfig thirty = SwarmConfig::defaults_for(Bounds::symmetric(30, 100.0));
    CHECK(thirty.radius_min == doctest::Approx(thirty.founder_radius));
    CHECK_NOTHROW(ten.validate());
    CHECK_NOTHROW(thirty.validate());
}

TEST_CASE("config validation names the offending parameter") {
    SwarmConfig cfg = small_config();
    cfg.population = -1;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("NG"), std::invalid_argument);

    cfg = small_config();
    cfg.local_iteration_floor = 80;  // above IL
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("L_IL"), std::invalid_argument);

    cfg = small_config();
    cfg.close_count = 41;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("NC"), std::invalid_argument);

    cfg = small_config();
    cfg.founder_radius = 1e9;  // above U_N
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("N_GB"), std::invalid_argument);

    cfg = SwarmConfig::defaults_for(Bounds::symmetric(1, 1.0));
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // one-dimensional search rejected
}

TEST_CASE("initialization spreads particles and counts evaluations") {
    SwarmConfig cfg = small_config();
    cfg.initial_radius = 1.0;
    RandomStream rng(cfg.seed);
    const SwarmState st = initialize_swarm(cfg, sphere, rng);

    REQUIRE(st.particles.size() == 40);
    CHECK(st.evaluations == 40);  // one evaluation per particle
    CHECK(st.iteration == 0);
    CHECK(st.local_iterations == 50);

    double best = std::numeric_limits<double>::infinity();
    for (const Particle& p : st.particles) {
        CHECK(cfg.bounds.contains(p.position));
        CHECK(p.best_position == p.position);
        CHECK(p.best_fitness == sphere(p.position));
        best = std::min(best, p.best_fitness);
    }
    CHECK(st.best_fitness == best);
    CHECK(st.best_fitness == sphere(st.best_position));
    CHECK(st.particles[st.founder].best_fitness == best);

    // collision rule: pairwise spacing at least N_init
    for (std::size_t i = 0; i < st.particles.size(); ++i)
        for (std::size_t j = i + 1; j < st.particles.size(); ++j)
            CHECK(euclidean_distance(st.particles[i].position, st.particles[j].position) >= 1.0);
}

TEST_CASE("proximity classification sorts by distance with index ties") {
    // distances (3, 1, 4, 1, 5) from the best point; NC=2 picks indices 1 and 3
    SwarmConfig cfg = small_config();
    SwarmState st;
    st.best_position = {0.0, 0.0};
    st.best_fitness = 0.0;
    for (double d : {3.0, 1.0, 4.0, 1.0, 5.0}) {
        Particle p;
        p.position = {d, 0.0};
        st.particles.push_back(p);
    }
    const auto close = classify_proximity(st, 2);
    REQUIRE(close.size() == 2);
    CHECK(close[0] == 1);
    CHECK(close[1] == 3);

    const auto all = classify_proximity(st, 5);
    CHECK(all == std::vector<std::size_t>{1, 3, 0, 2, 4});
}

TEST_CASE("close waves ride toward the best point and never overshoot") {
    RandomStream rng(5);
    const Bounds b = Bounds::symmetric(4, 100.0);
    const Vector best{10.0, -20.0, 5.0, 40.0};
    for (int t = 0; t < 2000; ++t) {
        Particle p;
        p.position = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0),
                      rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        const double before = euclidean_distance(best, p.position);
        const Vector moved = apply_wave(p, best, true, rng, b);
        const double after = euclidean_distance(best, moved);
        CHECK(after <= before);
        CHECK(b.contains(moved));
    }
}

TEST_CASE("far waves stay within the wave magnitude and the box") {
    RandomStream rng(6);
    const Bounds b = Bounds::symmetric(3, 50.0);
    const Vector best{0.0, 0.0, 0.0};
    for (int t = 0; t < 2000; ++t) {
        Particle p;
        p.position = {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0),
                      rng.uniform(-50.0, 50.0)};
        const double before = euclidean_distance(best, p.position);
        const Vector moved = apply_wave(p, best, false, rng, b);
        CHECK(b.contains(moved));
        // displacement is bounded by the drawn magnitude, itself below distance
        CHECK(euclidean_distance(moved, p.position) <= before + 1e-9);
    }
}

TEST_CASE("a particle sitting on the best point does not move") {
    RandomStream rng(7);
    const Bounds b = Bounds::symmetric(2, 10.0);
    Particle p;
    p.position = {1.5, -2.5};
    const Vector best = p.position;
    CHECK(apply_wave(p, best, true, rng, b) == p.position);
    CHECK(apply_wave(p, best, false, rng, b) == p.position);
}

TEST_CASE("neighborhood initialization follows distance and role") {
    SwarmConfig cfg = small_config();  // F=0.1, L_N=2e-4, U_N=100, N_GB=2
    Particle p;
    p.position = {30.0, 0.0};
    const Vector best{0.0, 0.0};
    CHECK(init_neighborhood(p, best, cfg, false) == doctest::Approx(3.0));
    CHECK(init_neighborhood(p, best, cfg, true) == doctest::Approx(2.0));

    p.position = {1e-9, 0.0};  // F*distance under L_N clamps up
    CHECK(init_neighborhood(p, best, cfg, false) == doctest::Approx(cfg.radius_min));

    p.position = {0.0, 0.0};  // zero distance, non-founder
    CHECK(init_neighborhood(p, best, cfg, false) == doctest::Approx(cfg.radius_min));
}

TEST_CASE("local search is a strict hill climb with window bookkeeping") {
    RandomStream rng(8);
    const Bounds b = Bounds::symmetric(2, 100.0);
    Particle p;
    p.position = {3.0, 4.0};
    p.best_position = p.position;
    p.best_fitness = std::numeric_limits<double>::infinity();
    p.radius = 0.0;  // candidate is always the current position

    // first evaluation always improves on an empty record
    CHECK(local_search_step(p, sphere, rng, b, 5));
    CHECK(p.best_fitness == 25.0);
    CHECK(p.position == Vector{3.0, 4.0});
    // repeating the same point cannot strictly improve
    CHECK_FALSE(local_search_step(p, sphere, rng, b, 5));
    CHECK(p.outcomes == std::deque<bool>{true, false});

    // window holds at most the configured number of outcomes
    for (int i = 0; i < 10; ++i) local_search_step(p, sphere, rng, b, 5);
    CHECK(p.outcomes.size() == 5);

    // NaN fitness counts as +inf and never improves
    Particle q;
    q.position = {1.0, 1.0};
    q.best_position = q.position;
    q.best_fitness = std::numeric_limits<double>::infinity();
    q.radius = 0.5;
    const Objective nan_objective = [](const Vector&) { return std::nan(""); };
    CHECK_FALSE(local_search_step(q, nan_objective, rng, b, 5));
    CHECK(q.best_fitness == std::numeric_limits<double>::infinity());
}

TEST_CASE("stagnation flips the status and steps the radius within limits") {
    SwarmConfig cfg = small_config();
    cfg.radius_step = 1.0;
    cfg.radius_min = 0.5;
    cfg.radius_max = 4.0;

    Particle p;
    p.radius = 2.0;
    p.status = NeighborhoodStatus::NoChange;
    p.outcomes = {false, false, false, false, false};

    // window not yet full: nothing happens
    adapt_neighborhood(p, cfg, 4);
    CHECK(p.status == NeighborhoodStatus::NoChange);
    CHECK(p.radius == 2.0);

    adapt_neighborhood(p, cfg, 5);  // NoChange -> Increase
    CHECK(p.status == NeighborhoodStatus::Increase);
    CHECK(p.radius == 3.0);

    adapt_neighborhood(p, cfg, 6);  // Increase -> Decrease
    CHECK(p.status == NeighborhoodStatus::Decrease);
    CHECK(p.radius == 2.0);

    adapt_neighborhood(p, cfg, 7);  // Decrease -> Increase
    CHECK(p.status == NeighborhoodStatus::Increase);
    CHECK(p.radius == 3.0);

    // an improvement inside the window suppresses the change
    p.outcomes = {false, true, false, false, false};
    p.status = NeighborhoodStatus::NoChange;
    adapt_neighborhood(p, cfg, 8);
    CHECK(p.status == NeighborhoodStatus::NoChange);
    CHECK(p.radius == 3.0);

    // documented clamp case: Increase with radius just above the floor
    p.outcomes = {false, false, false, false, false};
    p.status = NeighborhoodStatus::Increase;
    p.radius = cfg.radius_min + cfg.radius_step / 2.0;
    adapt_neighborhood(p, cfg, 9);
    CHECK(p.status == NeighborhoodStatus::Decrease);
    CHECK(p.radius == cfg.radius_min);

    // ceiling clamp on the way up
    p.status = NeighborhoodStatus::Decrease;
    p.radius = cfg.radius_max - cfg.radius_step / 2.0;
    adapt_neighborhood(p, cfg, 10);
    CHECK(p.status == NeighborhoodStatus::Increase);
    CHECK(p.radius == cfg.radius_max);
}

TEST_CASE("radius never leaves its limits under random adaptation") {
    SwarmConfig cfg = small_config();
    cfg.radius_step = 0.7;
    cfg.radius_min = 0.2;
    cfg.radius_max = 3.0;
    RandomStream rng(9);
    Particle p;
    p.radius = 1.0;
    for (int j = 1; j <= 100000; ++j) {
        p.outcomes.push_back(rng.uniform01() < 0.3);
        if (p.outcomes.size() > 5) p.outcomes.pop_front();
        adapt_neighborhood(p, cfg, j);
        CHECK(p.radius >= cfg.radius_min);
        CHECK(p.radius <= cfg.radius_max);
    }
}

TEST_CASE("local iteration schedule decays to its floor") {
    SwarmConfig cfg = small_config();  // S_IL=5, L_IL=10
    CHECK(decrement_local_iterations(50, cfg) == 45);
    CHECK(decrement_local_iterations(12, cfg) == 10);
    CHECK(decrement_local_iterations(10, cfg) == 10);
}

TEST_CASE("stop criteria fire in the documented order") {
    SwarmConfig cfg = small_config();
    SwarmState st;
    st.best_fitness = 1.0;
    st.previous_best_fitness = 1.0;
    st.iteration = 5;
    st.evaluations = 100;

    cfg.evaluation_cap = 1000;
    CHECK_FALSE(check_stop(st, cfg, 0.0).has_value());

    cfg.convergence_eps = 1e-8;
    CHECK(check_stop(st, cfg, 0.0) == StopReason::Converged);

    st.previous_best_fitness = 2.0;  // still improving
    CHECK_FALSE(check_stop(st, cfg, 0.0).has_value());

    cfg.time_budget_seconds = 10.0;
    CHECK(check_stop(st, cfg, 11.0) == StopReason::TimeBudget);

    cfg.time_budget_seconds.reset();
    cfg.max_global_iterations = 5;
    CHECK(check_stop(st, cfg, 0.0) == StopReason::IterationCap);

    cfg.max_global_iterations = 50;
    st.evaluations = 1000;
    CHECK(check_stop(st, cfg, 0.0) == StopReason::EvaluationCap);
}

TEST_CASE("runs are deterministic given the seed") {
    SwarmConfig cfg = small_config();
    cfg.evaluation_cap = 4000;
    const RunResult a = run(cfg, sphere);
    const RunResult b = run(cfg, sphere);
    CHECK(a.best_position == b.best_position);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.trace == b.trace);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.reason == b.reason);

    cfg.seed = 43;
    const RunResult c = run(cfg, sphere);
    CHECK(c.trace != a.trace);  // different stream, different path
}

TEST_CASE("best fitness is monotone along the trace and matches the report") {
    SwarmConfig cfg = small_config();
    cfg.evaluation_cap = 6000;
    const RunResult r = run(cfg, sphere);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.front().iteration == 0);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(r.trace[i].best_fitness <= r.trace[i - 1].best_fitness);
        CHECK(r.trace[i].evaluations >= r.trace[i - 1].evaluations);
    }
    CHECK(r.trace.back().best_fitness == r.best_fitness);
    CHECK(r.best_fitness == sphere(r.best_position));
    CHECK(r.reason == StopReason::EvaluationCap);
}

TEST_CASE("the evaluation cap is honored to within the initial pass") {
    SwarmConfig cfg = small_config();
    cfg.evaluation_cap = 1003;
    std::uint64_t counted = 0;
    const Objective counting = [&counted](const Vector& x) {
        ++counted;
        return sphere(x);
    };
    const RunResult r = run(cfg, counting);
    CHECK(r.evaluations == counted);
    CHECK(r.evaluations <= 1003);

    // cap below the population still pays for initialization once
    cfg.evaluation_cap = 10;
    counted = 0;
    const RunResult tiny = run(cfg, counting);
    CHECK(tiny.evaluations == 40);
    CHECK(tiny.evaluations <= 10 + 40u);
    CHECK(tiny.reason == StopReason::EvaluationCap);
}

TEST_CASE("observer sees every global iteration") {
    SwarmConfig cfg = small_config();
    cfg.evaluation_cap = 3000;
    std::vector<TracePoint> seen;
    const RunResult r = run(cfg, sphere, [&seen](std::uint64_t it, std::uint64_t ev, double f) {
        seen.push_back({it, ev, f});
    });
    REQUIRE(seen.size() + 1 == r.trace.size());  // trace adds the init point
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == r.trace[i + 1]);
    CHECK(seen.front().iteration == 1);
}

TEST_CASE("a constant objective stops by convergence when enabled") {
    SwarmConfig cfg = small_config();
    cfg.convergence_eps = 1e-8;
    cfg.evaluation_cap.reset();
    cfg.max_global_iterations = 1000;
    const RunResult r = run(cfg, [](const Vector&) { return 7.25; });
    CHECK(r.reason == StopReason::Converged);
    CHECK(r.best_fitness == 7.25);
    CHECK(r.trace.back().iteration == 1);
}

TEST_CASE("the time budget stops a run") {
    SwarmConfig cfg = small_config();
    cfg.evaluation_cap.reset();
    cfg.time_budget_seconds = 0.05;
    const RunResult r = run(cfg, sphere);
    CHECK(r.reason == StopReason::TimeBudget);
}

TEST_CASE("the swarm closes in on a shifted quadratic") {
    SwarmConfig cfg = small_config();
    cfg.evaluation_cap = 20000;
    const Vector target{12.5, -40.0};
    const Objective f = [&target](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - target[i]) * (x[i] - target[i]);
        return s;
    };
    const RunResult r = run(cfg, f);
    CHECK(r.best_fitness < 1e-3);
}

TEST_CASE("doubling the population roughly doubles the work") {
    // coarse scaling check: cost grows linearly in NG at fixed IG
    SwarmConfig cfg = small_config(5);
    cfg.evaluation_cap.reset();
    cfg.max_global_iterations = 150;
    cfg.population = 50;
    cfg.close_count = 10;

    const auto time_once = [&cfg]() {
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            run(cfg, sphere);
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };

    const double small = time_once();
    cfg.population = 100;
    const double large = time_once();
    CHECK(large <= 3.0 * small + 0.01);
}
