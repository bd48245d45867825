#include "ntraj/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace ntraj {

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
    if (waypoints_.size() < 2) {
        throw std::invalid_argument("Trajectory: needs at least two waypoints");
    }
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
        const auto& w = waypoints_[i];
        if (!std::isfinite(w.t) || !w.p.allFinite()) {
            throw std::invalid_argument("Trajectory: non-finite waypoint");
        }
        if (i > 0 && !(w.t > waypoints_[i - 1].t)) {
            throw std::invalid_argument("Trajectory: timestamps must be strictly increasing");
        }
    }
}

Trajectory::Trajectory(const WaypointMatrix& m)
    : Trajectory([&m] {
          std::vector<Waypoint> w(m.rows());
          for (Eigen::Index i = 0; i < m.rows(); ++i) {
              w[i].t = m(i, 0);
              w[i].p = Vec3(m(i, 1), m(i, 2), m(i, 3));
          }
          return w;
      }()) {}

double Trajectory::length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < waypoints_.size(); ++i) {
        len += (waypoints_[i].p - waypoints_[i - 1].p).norm();
    }
    return len;
}

WaypointMatrix Trajectory::to_matrix() const {
    WaypointMatrix m(waypoints_.size(), 4);
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
        m(i, 0) = waypoints_[i].t;
        m(i, 1) = waypoints_[i].p.x();
        m(i, 2) = waypoints_[i].p.y();
        m(i, 3) = waypoints_[i].p.z();
    }
    return m;
}

TrajectoryBundle::TrajectoryBundle(std::vector<Trajectory> trajectories)
    : trajectories_(std::move(trajectories)) {
    if (trajectories_.empty()) {
        throw std::invalid_argument("TrajectoryBundle: needs at least one trajectory");
    }
    const int horizon = trajectories_.front().horizon();
    for (const auto& traj : trajectories_) {
        if (traj.horizon() != horizon) {
            throw std::invalid_argument("TrajectoryBundle: horizons must be uniform");
        }
    }
}

std::vector<WaypointMatrix> TrajectoryBundle::to_matrices() const {
    std::vector<WaypointMatrix> mats;
    mats.reserve(trajectories_.size());
    for (const auto& traj : trajectories_) mats.push_back(traj.to_matrix());
    return mats;
}

TrajectoryBundle TrajectoryBundle::from_matrices(std::span<const WaypointMatrix> mats) {
    std::vector<Trajectory> trajs;
    trajs.reserve(mats.size());
    for (const auto& m : mats) trajs.emplace_back(m);
    return TrajectoryBundle(std::move(trajs));
}

void Thresholds::validate() const {
    if (!(clearance >= 0.0) || !(time_gap >= 0.0) || !(separation >= 0.0)) {
        throw std::invalid_argument("Thresholds: all values must be >= 0");
    }
}

Trajectory propose_line(const Vec3& start, const Vec3& goal, int horizon) {
    if (horizon < 1) throw std::invalid_argument("propose_line: horizon must be >= 1");
    std::vector<Waypoint> w(horizon + 1);
    for (int j = 0; j <= horizon; ++j) {
        const double s = static_cast<double>(j) / horizon;
        w[j].t = s;
        w[j].p = start + s * (goal - start);
    }
    return Trajectory(std::move(w));
}

bool env_collision_free(const WaypointMatrix& m, const EnvironmentSdf& env,
                        const Thresholds& thresholds) {
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        const Vec3 p(m(j, 1), m(j, 2), m(j, 3));
        if (!(env.signed_distance_normalized(p) > thresholds.clearance)) return false;
    }
    return true;
}

bool inter_conflict_free(const WaypointMatrix& a, const WaypointMatrix& b,
                         const Thresholds& thresholds) {
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        for (Eigen::Index k = 0; k < b.rows(); ++k) {
            const double dt = std::abs(a(j, 0) - b(k, 0));
            if (dt > thresholds.time_gap) continue;
            const double dist = (a.row(j).tail<3>() - b.row(k).tail<3>()).norm();
            if (!(dist > thresholds.separation)) return false;
        }
    }
    return true;
}

bool env_collision_free(const Trajectory& traj, const EnvironmentSdf& env,
                        const Thresholds& thresholds) {
    for (const auto& w : traj.waypoints()) {
        if (!(env.signed_distance_normalized(w.p) > thresholds.clearance)) return false;
    }
    return true;
}

bool inter_conflict_free(const Trajectory& a, const Trajectory& b, const Thresholds& thresholds) {
    return inter_conflict_free(a.to_matrix(), b.to_matrix(), thresholds);
}

bool bundle_collision_free(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                           const Thresholds& thresholds) {
    for (const auto& traj : bundle.trajectories()) {
        if (!env_collision_free(traj, env, thresholds)) return false;
    }
    return true;
}

bool bundle_conflict_free(const TrajectoryBundle& bundle, const Thresholds& thresholds) {
    const auto mats = bundle.to_matrices();
    return matrices_conflict_free(mats, thresholds);
}

bool matrices_collision_free(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
                             const Thresholds& thresholds) {
    for (const auto& m : mats) {
        if (!env_collision_free(m, env, thresholds)) return false;
    }
    return true;
}

bool matrices_conflict_free(std::span<const WaypointMatrix> mats, const Thresholds& thresholds) {
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t k = i + 1; k < mats.size(); ++k) {
            if (!inter_conflict_free(mats[i], mats[k], thresholds)) return false;
        }
    }
    return true;
}

double polyline_length(const WaypointMatrix& m) {
    double len = 0.0;
    for (Eigen::Index j = 1; j < m.rows(); ++j) {
        len += (m.row(j).tail<3>() - m.row(j - 1).tail<3>()).norm();
    }
    return len;
}

}  // namespace ntraj
