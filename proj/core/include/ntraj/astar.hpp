#pragma once

#include <cstdint>
#include <vector>

#include "ntraj/occupancy.hpp"
#include "ntraj/trajectory.hpp"

namespace ntraj {

/// A grid path: 26-connected free cells plus their world-space centers.
struct GridPath {
    std::vector<GridIndex> cells;
    std::vector<Vec3> world_points;
    double cost = 0.0;  // sum of Euclidean edge lengths between cell centers
};

struct AstarOptions {
    int snap_radius_cells = 2;           // start/goal snap to nearest free cell
    std::int64_t expansion_budget = 2'000'000;
};

struct AstarResult {
    enum class Status { Found, Unsolvable };
    Status status = Status::Unsolvable;
    GridPath path;
    std::int64_t expanded = 0;

    bool found() const { return status == Status::Found; }
};

/// Cost-minimal 26-connected grid search with a Euclidean heuristic and
/// lexicographic tie-breaking, so results are deterministic. Never throws
/// for unreachable goals; reports Unsolvable instead.
AstarResult astar_plan(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                       const AstarOptions& options = {});

/// Resamples a grid path (with the exact start/goal substituted for the
/// snapped endpoints) into a fixed-horizon trajectory by arc length, with
/// uniform timestamps on [0,1].
Trajectory path_to_trajectory(const GridPath& path, const Vec3& start, const Vec3& goal,
                              int horizon);

}  // namespace ntraj
