#ifndef PMSO_OPTIMIZER_HPP
#define PMSO_OPTIMIZER_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "pmso/geometry.hpp"
#include "pmso/rng.hpp"

namespace pmso {

using Objective = std::function<double(const Vector&)>;

/// Invoked after every global iteration with
/// (global iteration, total evaluations, best fitness so far).
using IterationObserver = std::function<void(std::uint64_t, std::uint64_t, double)>;

enum class NeighborhoodStatus { NoChange, Increase, Decrease };

enum class StopReason { Converged, TimeBudget, IterationCap, EvaluationCap };

/// Swarm hyperparameters. Symbol names from the method's parameter table
/// are kept in the trailing comments; config files use those short names.
struct SwarmConfig {
    int population = 40;                         // NG
    std::uint64_t max_global_iterations = 1000000;  // IG
    int local_iterations = 50;                   // IL at the first global iteration
    int local_iteration_step = 5;                // S_IL
    int local_iteration_floor = 10;              // L_IL
    double initial_radius = 0.0;                 // N_init, also the spawn collision distance
    double radius_step = 0.0;                    // S_N
    double radius_min = 0.0;                     // L_N
    double radius_max = 0.0;                     // U_N
    int buffer_capacity = 5;                     // B, local-search outcome window
    double neighborhood_fraction = 0.1;          // F
    double founder_radius = 0.0;                 // N_GB
    int close_count = 10;                        // NC
    Bounds bounds;
    std::optional<double> convergence_eps;       // stop I: |delta best| below eps
    std::optional<double> time_budget_seconds;   // stop II
    std::optional<std::uint64_t> evaluation_cap; // stop IV; the iteration cap is stop III
    std::uint64_t seed = 0;
    int collision_retry_limit = 100;

    /// Radius family scaled from the mean bound width, evaluation cap
    /// 10000*D, everything else the documented defaults.
    static SwarmConfig defaults_for(const Bounds& bounds);

    /// Throws std::invalid_argument naming the offending parameter.
    void validate() const;
};

struct Particle {
    Vector position;
    double radius = 0.0;
    NeighborhoodStatus status = NeighborhoodStatus::NoChange;
    std::deque<bool> outcomes;   // most recent local-search results, at most B
    Vector best_position;        // best point this particle evaluated this iteration (LB)
    double best_fitness = 0.0;
};

struct SwarmState {
    std::vector<Particle> particles;
    Vector best_position;        // global best (GB)
    double best_fitness = 0.0;
    std::size_t founder = 0;     // particle that produced the global best
    std::uint64_t evaluations = 0;
    std::uint64_t iteration = 0;
    int local_iterations = 0;    // current IL
    double previous_best_fitness = 0.0;  // best at the previous stop check
};

struct TracePoint {
    std::uint64_t iteration;
    std::uint64_t evaluations;
    double best_fitness;

    bool operator==(const TracePoint&) const = default;
};

struct RunResult {
    Vector best_position;
    double best_fitness = 0.0;
    std::vector<TracePoint> trace;   // one point after init, one per global iteration
    StopReason reason = StopReason::IterationCap;
    std::uint64_t evaluations = 0;
};

/// Uniform placement in bounds, redrawing any particle closer than N_init
/// to an already placed one (at most collision_retry_limit redraws, then the
/// position is accepted with a warning). Evaluates everyone once.
SwarmState initialize_swarm(const SwarmConfig& cfg, const Objective& objective,
                            RandomStream& rng);

/// Indices of the close_count particles nearest the global best, ascending
/// by distance, ties broken by lower index.
std::vector<std::size_t> classify_proximity(const SwarmState& state, int close_count);

/// Sea-wave move. Magnitude is U(0,1) times the distance to the best point;
/// close particles ride toward it, far ones in a random direction. A particle
/// already at the best point stays put without consuming draws. The result is
/// clamped to the bounds; for close particles the move is along the chord, so
/// the distance to the best point never increases.
Vector apply_wave(const Particle& p, const Vector& best, bool is_close,
                  RandomStream& rng, const Bounds& bounds);

/// Fresh neighborhood radius for a particle at the start of its local phase:
/// founder gets N_GB, others F times their distance to the best point,
/// clamped into [L_N, U_N].
double init_neighborhood(const Particle& p, const Vector& best,
                         const SwarmConfig& cfg, bool is_founder);

/// One hill-climb probe: sample in the particle's ball, clamp, evaluate
/// (NaN counts as +inf). On strict improvement of LB the particle relocates.
/// The outcome flag is pushed into the particle's window. Returns improved.
bool local_search_step(Particle& p, const Objective& objective, RandomStream& rng,
                       const Bounds& bounds, int buffer_capacity);

/// Status/radius update after local round j (1-based). Active once the
/// window is full: if none of the last B probes improved, the status flips
/// (NoChange->Increase, Decrease->Increase, Increase->Decrease) and the
/// radius moves by S_N, clamped into [L_N, U_N].
void adapt_neighborhood(Particle& p, const SwarmConfig& cfg, int local_round);

/// IL schedule between global iterations: max(IL - S_IL, L_IL).
int decrement_local_iterations(int current, const SwarmConfig& cfg);

/// First enabled criterion that fires, checked in the order convergence,
/// time budget, iteration cap, evaluation cap.
std::optional<StopReason> check_stop(const SwarmState& state, const SwarmConfig& cfg,
                                     double elapsed_seconds);

/// Full optimization run. Strictly sequential over particles within an
/// iteration: global-best updates made by particle i are visible to i+1.
RunResult run(const SwarmConfig& cfg, const Objective& objective,
              const IterationObserver& observer = nullptr);

}  // namespace pmso

#endif
