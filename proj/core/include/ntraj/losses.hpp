#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ntraj/trajectory.hpp"

namespace ntraj {

/// Per-agent gradient buffers, same shapes as the waypoint matrices.
using BundleGrad = std::vector<WaypointMatrix>;

BundleGrad make_zero_grads(std::span<const WaypointMatrix> mats);

/// Mean L1 distance between predicted and ground-truth 4D waypoints
/// (timestamp channel included), summed over waypoints 1..T and divided by
/// N*T. When `grad_pred` is given, weight * d(loss)/d(pred) is accumulated
/// into it.
double ground_truth_loss(std::span<const WaypointMatrix> pred,
                         std::span<const WaypointMatrix> truth,
                         BundleGrad* grad_pred = nullptr, double weight = 1.0);

/// Environmental safety hinge: mean over all N*(T+1) waypoints of
/// max(clearance - SDF(p), 0), positions in the normalized frame.
double env_collision_loss(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
                          const Thresholds& thresholds, BundleGrad* grad = nullptr,
                          double weight = 1.0);

/// Inter-agent separation hinge: over ordered pairs of distinct agents and
/// all waypoint pairs whose time gap is within the threshold, the spatial
/// hinge max(0, separation - |dp|), normalized by T*N. Exactly-coincident
/// waypoints repel along a deterministic pseudo-random direction so
/// gradient descent can break the tie.
double inter_conflict_loss(std::span<const WaypointMatrix> mats, const Thresholds& thresholds,
                           BundleGrad* grad = nullptr, double weight = 1.0);

/// Travel-length penalty. With reference lengths: mean over agents of
/// max(0, length_i - reference_i), penalizing paths longer than the
/// reference. Without references: mean polyline length.
double path_length_loss(std::span<const WaypointMatrix> mats,
                        const std::vector<double>* reference_lengths = nullptr,
                        BundleGrad* grad = nullptr, double weight = 1.0);

// Validated-bundle overloads.
double ground_truth_loss(const TrajectoryBundle& pred, const TrajectoryBundle& truth);
double env_collision_loss(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                          const Thresholds& thresholds);
double inter_conflict_loss(const TrajectoryBundle& bundle, const Thresholds& thresholds);
double path_length_loss(const TrajectoryBundle& bundle,
                        const std::vector<double>* reference_lengths = nullptr);

}  // namespace ntraj
