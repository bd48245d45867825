#pragma once

#include <cstdint>

#include "ntraj/dataset.hpp"
#include "ntraj/optimizer.hpp"
#include "ntraj/sdf.hpp"

namespace ntraj {

/// Ground-truth generation settings. Instances are produced from
/// independent per-candidate seeds derived from (seed, candidate index), so
/// output is byte-identical for a fixed seed regardless of worker count.
struct DatagenConfig {
    int instance_count = 100;  // M
    int agents = 8;            // N
    int horizon = 24;          // T
    Thresholds thresholds;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;

    int grid_resolution = 64;
    /// Extra clearance (normalized units) added on top of the collision
    /// thresholds during sampling, rasterization, and optimizer feasibility
    /// checks, so accepted instances pass the strict predicates with room to
    /// spare.
    double validation_margin = 0.01;
    /// Minimum pairwise distance among starts (and among goals), normalized
    /// units. Must exceed `thresholds.separation`, otherwise endpoints pinned
    /// at equal timestamps could never be conflict-free.
    double endpoint_separation = 0.0;  // 0 = separation + 2*validation_margin

    double min_acceptance_rate = 0.05;
    int threads = 0;  // 0 = hardware concurrency
    double wall_clock_budget_s = 0.0;  // 0 = unlimited

    void validate() const;
};

struct DatagenReport {
    int requested = 0;
    int generated = 0;
    long long candidates = 0;
    long long rejected_unsolvable = 0;  // A* failures
    long long rejected_infeasible = 0;  // optimizer failed the predicates
    bool timed_out = false;
};

struct DatagenOutput {
    Dataset dataset;
    DatagenReport report;
};

/// Samples free start-goal sets, proposes per-agent grid paths, refines them
/// with the trajectory optimizer, and keeps only instances whose bundles
/// pass both collision predicates. Deterministic for a fixed seed; aborts
/// when the running acceptance rate falls below the configured floor.
DatagenOutput generate_dataset(const EnvironmentSdf& env, const DatagenConfig& config);

}  // namespace ntraj
