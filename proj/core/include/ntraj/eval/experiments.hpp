#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ntraj/dataset.hpp"
#include "ntraj/eval/metrics.hpp"
#include "ntraj/model/inference.hpp"

namespace ntraj {

enum class Protocol { Dataset, Plan, Deconflict, Ablation, Scaling };

Protocol protocol_from_string(const std::string& name);
std::string to_string(Protocol protocol);

struct ExperimentConfig {
    Thresholds thresholds;
    OptimizerConfig refine;      // template for refinement; step counts set per condition
    int refine_steps = 0;        // plan protocol
    std::vector<int> ablation_steps{0, 5, 10};
    std::vector<int> scaling_agents{1, 8, 64};
    int timing_repetitions = 10;  // scaling protocol, after 2 warmup runs
    double deconflict_target_icr = 0.8;
    int deconflict_refine_steps = 10;
    std::uint64_t seed = 0;
    int max_instances = 0;  // 0 = whole dataset

    // Echoed into the report for provenance.
    std::string env_hash;
    std::string model_hash;
    std::string dataset_hash;
};

struct PerInstanceRow {
    std::string condition;
    int instance = 0;
    double ecr = 0.0;
    double icr = 0.0;
    double td = 0.0;
    double ct = 0.0;
};

struct ExperimentReport {
    std::string protocol;
    std::string env_hash;
    std::string model_hash;
    std::string dataset_hash;
    std::uint64_t seed = 0;
    Thresholds thresholds;
    std::vector<EvalReport> conditions;
    std::vector<PerInstanceRow> per_instance;
    /// Model outputs, one per evaluated instance (plan: the planned bundles;
    /// deconflict: the corrected bundles). Empty for other protocols.
    std::vector<TrajectoryBundle> outputs;
};

/// Runs one of the named evaluation protocols over the dataset:
///  - Dataset: metrics of the stored bundles, no model involved.
///  - Plan: model answers each instance's queries (optional refinement);
///    a ground-truth reference condition is included when bundles exist.
///  - Deconflict: stored bundles are perturbed until the target inter
///    collision rate, then corrected by the model plus refinement;
///    before/after conditions.
///  - Ablation: plan conditions at each configured refinement step count.
///  - Scaling: inference timing at each configured agent count on sampled
///    queries.
/// Planning time excludes I/O and metric computation throughout.
ExperimentReport run_experiment(Protocol protocol, const NtmModel* model, const Dataset& dataset,
                                const EnvironmentSdf& env, const ExperimentConfig& config);

/// Pulls interior waypoints toward the bundle's mean path (plus seeded
/// noise) with growing strength until the inter collision rate reaches the
/// target. Endpoints stay fixed. Throws for single-agent bundles.
TrajectoryBundle perturb_until_conflicted(const TrajectoryBundle& bundle, double target_icr,
                                          const Thresholds& thresholds, std::uint64_t seed);

void write_report_json(const std::string& path, const ExperimentReport& report);
void write_per_instance_csv(const std::string& path, const ExperimentReport& report);

}  // namespace ntraj
