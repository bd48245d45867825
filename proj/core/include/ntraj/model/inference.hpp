#pragma once

#include <span>
#include <utility>

#include "ntraj/model/ntm.hpp"
#include "ntraj/optimizer.hpp"

namespace ntraj {

/// Optional refinement of a model output by the trajectory optimizer; the
/// step count is the optimizer config's max_iterations.
struct RefineContext {
    const EnvironmentSdf* env = nullptr;
    const Thresholds* thresholds = nullptr;
    OptimizerConfig optimizer;
};

/// Answers start-goal queries: straight-line proposals, one model forward,
/// optional refinement. Queries sitting in occupied space produce a warning
/// on stderr and a best-effort answer. Coordinates are normalized.
TrajectoryBundle infer(const NtmModel& model,
                       std::span<const std::pair<Vec3, Vec3>> queries,
                       const EnvironmentSdf* env = nullptr,
                       const RefineContext* refine = nullptr);

/// Same as infer with the proposal stage replaced by the given bundle:
/// endpoints are pinned to the bundle's endpoints. Bundles with a different
/// horizon are arc-length resampled first; interior positions are clamped
/// into the model's normalized domain.
TrajectoryBundle deconflict(const NtmModel& model, const TrajectoryBundle& input,
                            const RefineContext* refine = nullptr);

/// Uniform arc-length resampling to a new horizon (timestamps re-spaced
/// uniformly on [0,1]).
Trajectory resample_uniform(const Trajectory& traj, int horizon);

}  // namespace ntraj
