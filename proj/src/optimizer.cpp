#include "pmso/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace pmso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// NaN fitness counts as +inf; warn once per process, not per evaluation.
double sanitize_fitness(double f) {
    if (std::isnan(f)) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::cerr << "warning: objective returned NaN, treating as +inf\n";
        return kInf;
    }
    return f;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

SwarmConfig SwarmConfig::defaults_for(const Bounds& bounds) {
    bounds.validate();
    const double range = bounds.mean_width();
    SwarmConfig cfg;
    cfg.bounds = bounds;
    cfg.initial_radius = 0.05 * range;
    cfg.radius_step = 0.1 * cfg.initial_radius;
    // Low dimension rewards a fine probe floor; in high dimension the floor
    // must stay at the founder scale so near-best particles keep contributing.
    const double floor_exponent =
        std::min(-6.0 + 0.5 * (static_cast<double>(bounds.dimension()) - 2.0), -2.0);
    cfg.radius_min = std::pow(10.0, floor_exponent) * range;
    cfg.radius_max = 0.5 * range;
    cfg.founder_radius = 0.01 * range;
    cfg.close_count = (cfg.population + 3) / 4;
    cfg.evaluation_cap = 10000ull * bounds.dimension();
    return cfg;
}

void SwarmConfig::validate() const {
    bounds.validate();
    require(bounds.dimension() >= 2, "dim must be at least 2");
    require(population >= 1, "NG must be positive");
    require(max_global_iterations >= 1, "IG must be positive");
    require(local_iterations >= 1, "IL must be positive");
    require(local_iteration_step >= 0, "S_IL must be nonnegative");
    require(local_iteration_floor >= 1, "L_IL must be positive");
    require(local_iteration_floor <= local_iterations, "L_IL must not exceed IL");
    require(buffer_capacity >= 1, "B must be positive");
    require(neighborhood_fraction > 0.0, "F must be positive");
    require(close_count >= 0 && close_count <= population, "NC must lie in [0, NG]");
    require(radius_step >= 0.0, "S_N must be nonnegative");
    require(radius_min >= 0.0, "L_N must be nonnegative");
    require(radius_min <= radius_max, "L_N must not exceed U_N");
    require(initial_radius >= radius_min && initial_radius <= radius_max,
            "N_init must lie in [L_N, U_N]");
    require(founder_radius >= radius_min && founder_radius <= radius_max,
            "N_GB must lie in [L_N, U_N]");
    require(collision_retry_limit >= 0, "collision retry limit must be nonnegative");
    if (convergence_eps) require(*convergence_eps > 0.0, "convergence eps must be positive");
    if (time_budget_seconds) require(*time_budget_seconds > 0.0, "time budget must be positive");
    if (evaluation_cap) require(*evaluation_cap >= 1, "eval cap must be positive");
}

SwarmState initialize_swarm(const SwarmConfig& cfg, const Objective& objective,
                            RandomStream& rng) {
    cfg.validate();
    const std::size_t dim = cfg.bounds.dimension();
    SwarmState st;
    st.particles.resize(static_cast<std::size_t>(cfg.population));

    for (std::size_t i = 0; i < st.particles.size(); ++i) {
        Vector pos(dim);
        int redraws = 0;
        for (;;) {
            for (std::size_t d = 0; d < dim; ++d)
                pos[d] = rng.uniform(cfg.bounds.lower[d], cfg.bounds.upper[d]);
            bool collides = false;
            for (std::size_t j = 0; j < i && !collides; ++j)
                collides = euclidean_distance(pos, st.particles[j].position) <
                           cfg.initial_radius;
            if (!collides) break;
            if (redraws == cfg.collision_retry_limit) {
                std::cerr << "warning: particle " << i << " still collides after "
                          << redraws << " redraws, accepting placement\n";
                break;
            }
            ++redraws;
        }
        st.particles[i].position = std::move(pos);
        st.particles[i].radius = cfg.initial_radius;
    }

    for (Particle& p : st.particles) {
        p.best_position = p.position;
        p.best_fitness = sanitize_fitness(objective(p.position));
        ++st.evaluations;
    }

    st.founder = 0;
    for (std::size_t i = 1; i < st.particles.size(); ++i)
        if (st.particles[i].best_fitness < st.particles[st.founder].best_fitness)
            st.founder = i;
    st.best_position = st.particles[st.founder].position;
    st.best_fitness = st.particles[st.founder].best_fitness;
    st.previous_best_fitness = st.best_fitness;
    st.local_iterations = cfg.local_iterations;
    st.iteration = 0;
    return st;
}

std::vector<std::size_t> classify_proximity(const SwarmState& state, int close_count) {
    const std::size_t n = state.particles.size();
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(close_count, 0)), n);
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = {euclidean_distance(state.best_position, state.particles[i].position), i};
    std::sort(order.begin(), order.end());  // pair ordering breaks ties by lower index
    std::vector<std::size_t> close(take);
    for (std::size_t i = 0; i < take; ++i) close[i] = order[i].second;
    return close;
}

Vector apply_wave(const Particle& p, const Vector& best, bool is_close,
                  RandomStream& rng, const Bounds& bounds) {
    const double dist = euclidean_distance(best, p.position);
    if (dist == 0.0) return p.position;

    const double magnitude = rng.uniform01() * dist;
    AngleSet angles;
    if (is_close) {
        Vector toward(p.position.size());
        for (std::size_t d = 0; d < toward.size(); ++d) toward[d] = best[d] - p.position[d];
        angles = direction_angles(toward);
    } else {
        angles = random_angles(p.position.size(), rng);
    }
    Vector next = compose_wave(magnitude, angles);
    for (std::size_t d = 0; d < next.size(); ++d) next[d] += p.position[d];
    return clamp_to_bounds(std::move(next), bounds);
}

double init_neighborhood(const Particle& p, const Vector& best,
                         const SwarmConfig& cfg, bool is_founder) {
    if (is_founder) return cfg.founder_radius;
    const double dist = euclidean_distance(best, p.position);
    return std::clamp(cfg.neighborhood_fraction * dist, cfg.radius_min, cfg.radius_max);
}

bool local_search_step(Particle& p, const Objective& objective, RandomStream& rng,
                       const Bounds& bounds, int buffer_capacity) {
    Vector candidate = clamp_to_bounds(sample_in_ball(p.position, p.radius, rng), bounds);
    const double fitness = sanitize_fitness(objective(candidate));
    const bool improved = fitness < p.best_fitness;
    if (improved) {
        p.best_fitness = fitness;
        p.best_position = candidate;
        p.position = std::move(candidate);
    }
    p.outcomes.push_back(improved);
    while (p.outcomes.size() > static_cast<std::size_t>(buffer_capacity)) p.outcomes.pop_front();
    return improved;
}

void adapt_neighborhood(Particle& p, const SwarmConfig& cfg, int local_round) {
    if (local_round < cfg.buffer_capacity) return;  // window not yet representative
    for (bool improved : p.outcomes)
        if (improved) return;
    switch (p.status) {
        case NeighborhoodStatus::NoChange:
        case NeighborhoodStatus::Decrease:
            p.status = NeighborhoodStatus::Increase;
            p.radius = std::min(p.radius + cfg.radius_step, cfg.radius_max);
            break;
        case NeighborhoodStatus::Increase:
            p.status = NeighborhoodStatus::Decrease;
            p.radius = std::max(p.radius - cfg.radius_step, cfg.radius_min);
            break;
    }
}

int decrement_local_iterations(int current, const SwarmConfig& cfg) {
    return std::max(current - cfg.local_iteration_step, cfg.local_iteration_floor);
}

std::optional<StopReason> check_stop(const SwarmState& state, const SwarmConfig& cfg,
                                     double elapsed_seconds) {
    if (cfg.convergence_eps &&
        std::abs(state.best_fitness - state.previous_best_fitness) < *cfg.convergence_eps)
        return StopReason::Converged;
    if (cfg.time_budget_seconds && elapsed_seconds >= *cfg.time_budget_seconds)
        return StopReason::TimeBudget;
    if (state.iteration >= cfg.max_global_iterations) return StopReason::IterationCap;
    if (cfg.evaluation_cap && state.evaluations >= *cfg.evaluation_cap)
        return StopReason::EvaluationCap;
    return std::nullopt;
}

RunResult run(const SwarmConfig& cfg, const Objective& objective,
              const IterationObserver& observer) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RandomStream rng(cfg.seed);
    SwarmState st = initialize_swarm(cfg, objective, rng);
    const std::uint64_t cap =
        cfg.evaluation_cap ? *cfg.evaluation_cap : std::numeric_limits<std::uint64_t>::max();

    RunResult result;
    result.trace.push_back({0, st.evaluations, st.best_fitness});

    std::optional<StopReason> stop;
    while (!stop) {
        ++st.iteration;
        const bool first = st.iteration == 1;

        std::vector<char> is_close(st.particles.size(), 0);
        if (!first)
            for (std::size_t i : classify_proximity(st, cfg.close_count)) is_close[i] = 1;

        // The exact-best slot for this iteration; mid-loop improvements update
        // st.founder for the next iteration without re-routing this one.
        const std::size_t role = st.founder;

        bool out_of_budget = st.evaluations >= cap;
        for (std::size_t i = 0; i < st.particles.size() && !out_of_budget; ++i) {
            Particle& p = st.particles[i];
            if (!first) {
                if (i == role) {
                    p.position = st.best_position;  // searches exactly around the best
                    p.best_fitness = st.best_fitness;  // known without re-evaluating
                } else {
                    p.position = apply_wave(p, st.best_position, is_close[i] != 0, rng,
                                            cfg.bounds);
                    p.best_fitness = kInf;  // landing unevaluated; the first probe seeds LB
                }
                p.best_position = p.position;
            }
            // Iteration 1 keeps the initialization evaluation as the seed LB.
            p.radius = init_neighborhood(p, st.best_position, cfg, i == role);
            p.status = NeighborhoodStatus::NoChange;
            p.outcomes.clear();

            for (int j = 1; j <= st.local_iterations; ++j) {
                if (st.evaluations >= cap) {
                    out_of_budget = true;
                    break;
                }
                local_search_step(p, objective, rng, cfg.bounds, cfg.buffer_capacity);
                ++st.evaluations;
                adapt_neighborhood(p, cfg, j);
            }

            if (p.best_fitness < st.best_fitness) {  // strict improvement takes the lead
                st.best_fitness = p.best_fitness;
                st.best_position = p.best_position;
                st.founder = i;
            }
        }

        st.local_iterations = decrement_local_iterations(st.local_iterations, cfg);
        result.trace.push_back({st.iteration, st.evaluations, st.best_fitness});
        if (observer) observer(st.iteration, st.evaluations, st.best_fitness);

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        stop = check_stop(st, cfg, elapsed);
        st.previous_best_fitness = st.best_fitness;
    }

    result.best_position = st.best_position;
    result.best_fitness = st.best_fitness;
    result.reason = *stop;
    result.evaluations = st.evaluations;
    return result;
}

}  // namespace pmso
