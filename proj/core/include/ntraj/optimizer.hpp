#pragma once

#include <string>
#include <vector>

#include "ntraj/losses.hpp"
#include "ntraj/trajectory.hpp"

namespace ntraj {

/// Configuration of the waypoint-space gradient descent. Weights are the
/// coefficients of the three objective terms (environment hinge, inter-agent
/// hinge, travel length).
struct OptimizerConfig {
    double weight_env = 10.0;
    double weight_inter = 10.0;
    double weight_length = 1.0;
    double step_size = 1e-2;
    int max_iterations = 500;
    double tolerance = 0.0;        // stop once J <= tolerance
    bool pin_endpoints = true;     // first/last waypoints held fixed
    bool freeze_timestamps = true; // gradients flow to positions only
    bool stop_when_feasible = true;
    double wall_clock_budget_s = 0.0;  // 0 = unlimited

    void validate() const;
};

struct ObjectiveTerms {
    double total = 0.0;
    double env = 0.0;
    double inter = 0.0;
    double length = 0.0;
};

/// J = weight_env * env hinge + weight_inter * separation hinge +
/// weight_length * mean path length (reference-free).
ObjectiveTerms objective_terms(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
                               const Thresholds& thresholds, const OptimizerConfig& config,
                               BundleGrad* grad = nullptr);
double objective_value(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                       const Thresholds& thresholds, const OptimizerConfig& config);

struct IterationRecord {
    int iteration = 0;
    double total = 0.0;
    double env = 0.0;
    double inter = 0.0;
    double length = 0.0;
    double best_total = 0.0;  // running minimum, non-increasing
};

struct OptimizeResult {
    TrajectoryBundle bundle;
    std::vector<IterationRecord> log;
    int iterations = 0;
    bool feasible = false;       // returned iterate passes both predicates
    bool hit_time_budget = false;
};

/// Iterates w <- w - step * dJ/dw over waypoint coordinates. Stops when J
/// falls to the tolerance, when both collision predicates pass (if
/// configured), at the iteration cap, or at the wall-clock budget. Returns
/// the lowest-J iterate, preferring predicate-passing iterates when any
/// exist; the input counts as iterate zero, so the result is never worse
/// than the input.
OptimizeResult optimize(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                        const Thresholds& thresholds, const OptimizerConfig& config);

/// CSV iteration log: iteration, J, loss_env, loss_inter, loss_perf.
void write_iteration_log_csv(const std::string& path, const std::vector<IterationRecord>& log);

}  // namespace ntraj
