#pragma once

#include <span>
#include <string>

#include "ntraj/trajectory.hpp"

namespace ntraj {

struct MetricCounts {
    int instances = 0;
    int trajectories = 0;
    int unsolved = 0;
};

/// One evaluation condition: collision rates, mean travel distance, and
/// planning-time statistics.
struct EvalReport {
    std::string name;
    double ecr = 0.0;
    double icr = 0.0;
    double td = 0.0;
    double ct_mean = 0.0;
    double ct_std = 0.0;
    MetricCounts counts;
};

/// Environmental collision rate: trajectories with any waypoint at or below
/// the clearance threshold, plus unsolved cases, over the total including
/// unsolved.
double compute_ecr(std::span<const TrajectoryBundle> bundles, const EnvironmentSdf& env,
                   const Thresholds& thresholds, int unsolved_count = 0);

/// Inter collision rate: trajectories participating in at least one
/// within-bundle conflict, over the total number of trajectories.
double compute_icr(std::span<const TrajectoryBundle> bundles, const Thresholds& thresholds);

/// Mean polyline length over all trajectories.
double compute_td(std::span<const TrajectoryBundle> bundles);

}  // namespace ntraj
