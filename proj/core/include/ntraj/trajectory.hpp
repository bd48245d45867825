#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ntraj/sdf.hpp"

namespace ntraj {

/// One timestamped sample of a path. Time lives in [0,1] and positions in
/// the environment's normalized frame throughout the planning stack.
struct Waypoint {
    double t = 0.0;
    Vec3 p = Vec3::Zero();
};

/// Numeric view of a trajectory: one row per waypoint, columns (t, x, y, z).
using WaypointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4>;

/// An ordered, strictly time-increasing sequence of at least two waypoints.
class Trajectory {
  public:
    explicit Trajectory(std::vector<Waypoint> waypoints);
    explicit Trajectory(const WaypointMatrix& m);

    const std::vector<Waypoint>& waypoints() const { return waypoints_; }
    const Waypoint& operator[](std::size_t i) const { return waypoints_[i]; }
    std::size_t size() const { return waypoints_.size(); }
    int horizon() const { return static_cast<int>(waypoints_.size()) - 1; }

    const Vec3& start() const { return waypoints_.front().p; }
    const Vec3& goal() const { return waypoints_.back().p; }

    /// Polyline length: sum of Euclidean distances between consecutive
    /// waypoints.
    double length() const;

    WaypointMatrix to_matrix() const;

  private:
    std::vector<Waypoint> waypoints_;
};

/// N trajectories with a uniform horizon, one per agent.
class TrajectoryBundle {
  public:
    explicit TrajectoryBundle(std::vector<Trajectory> trajectories);

    const std::vector<Trajectory>& trajectories() const { return trajectories_; }
    const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
    std::size_t size() const { return trajectories_.size(); }
    int horizon() const { return trajectories_.front().horizon(); }

    std::vector<WaypointMatrix> to_matrices() const;
    static TrajectoryBundle from_matrices(std::span<const WaypointMatrix> mats);

  private:
    std::vector<Trajectory> trajectories_;
};

/// Safety and separation parameters, all in normalized units, all >= 0:
/// `clearance` is the minimum obstacle distance, and a pair of waypoints of
/// different agents conflicts when both the time gap and the spatial
/// separation fall at or below `time_gap` / `separation`.
struct Thresholds {
    double clearance = 0.02;
    double time_gap = 0.1;
    double separation = 0.05;

    void validate() const;
};

/// Straight-line proposal: T+1 waypoints uniformly interpolating start to
/// goal, timestamps uniform on [0,1].
Trajectory propose_line(const Vec3& start, const Vec3& goal, int horizon);

/// True iff every waypoint keeps signed distance strictly above the
/// clearance threshold. Positions are in the environment's normalized frame.
bool env_collision_free(const Trajectory& traj, const EnvironmentSdf& env,
                        const Thresholds& thresholds);

/// True iff every cross pair of waypoints is separated in time or in space
/// (strict inequalities).
bool inter_conflict_free(const Trajectory& a, const Trajectory& b, const Thresholds& thresholds);

/// Bundle-level conjunctions of the two predicates.
bool bundle_collision_free(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                           const Thresholds& thresholds);
bool bundle_conflict_free(const TrajectoryBundle& bundle, const Thresholds& thresholds);

// Matrix-level predicate twins used on raw optimizer/model state.
bool env_collision_free(const WaypointMatrix& m, const EnvironmentSdf& env,
                        const Thresholds& thresholds);
bool inter_conflict_free(const WaypointMatrix& a, const WaypointMatrix& b,
                         const Thresholds& thresholds);
bool matrices_collision_free(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
                             const Thresholds& thresholds);
bool matrices_conflict_free(std::span<const WaypointMatrix> mats, const Thresholds& thresholds);

double polyline_length(const WaypointMatrix& m);

}  // namespace ntraj
