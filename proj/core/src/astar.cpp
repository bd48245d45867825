#include "ntraj/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ntraj {
namespace {

struct Neighbor {
    GridIndex offset;
    double cost;  // in cell units
};

// 26-neighborhood in fixed lexicographic order (determinism).
const std::vector<Neighbor>& neighbors() {
    static const std::vector<Neighbor> n = [] {
        std::vector<Neighbor> v;
        v.reserve(26);
        for (int dz = -1; dz <= 1; ++dz) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    v.push_back({GridIndex(dx, dy, dz),
                                 std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz))});
                }
            }
        }
        return v;
    }();
    return n;
}

struct OpenEntry {
    double f;
    double g;
    std::size_t cell;  // flat index; doubles as the lexicographic tie-break

    bool operator>(const OpenEntry& other) const {
        if (f != other.f) return f > other.f;
        return cell > other.cell;
    }
};

GridIndex clamp_to_grid(const OccupancyGrid& grid, const Vec3& p) {
    const Vec3 rel = (p - grid.origin) / grid.cell_size;
    GridIndex c;
    for (int i = 0; i < 3; ++i) {
        c[i] = std::clamp(static_cast<int>(std::floor(rel[i])), 0, grid.dims[i] - 1);
    }
    return c;
}

/// Nearest free cell within a Chebyshev radius, smaller true distance first,
/// then lexicographic scan order.
bool snap_to_free(const OccupancyGrid& grid, const GridIndex& cell, int radius, GridIndex& out) {
    if (grid.is_free(cell)) {
        out = cell;
        return true;
    }
    int best = std::numeric_limits<int>::max();
    bool found = false;
    for (int dz = -radius; dz <= radius; ++dz) {
        for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
                const GridIndex c = cell + GridIndex(dx, dy, dz);
                if (!grid.is_free(c)) continue;
                const int d2 = dx * dx + dy * dy + dz * dz;
                if (d2 < best) {
                    best = d2;
                    out = c;
                    found = true;
                }
            }
        }
    }
    return found;
}

GridIndex unflatten(const OccupancyGrid& grid, std::size_t flat) {
    const int x = static_cast<int>(flat % grid.dims.x());
    const int y = static_cast<int>((flat / grid.dims.x()) % grid.dims.y());
    const int z = static_cast<int>(flat / (static_cast<std::size_t>(grid.dims.x()) * grid.dims.y()));
    return GridIndex(x, y, z);
}

}  // namespace

AstarResult astar_plan(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                       const AstarOptions& options) {
    if (!start.allFinite() || !goal.allFinite()) {
        throw std::invalid_argument("astar_plan: non-finite endpoint");
    }
    AstarResult result;

    GridIndex start_cell, goal_cell;
    if (!snap_to_free(grid, clamp_to_grid(grid, start), options.snap_radius_cells, start_cell) ||
        !snap_to_free(grid, clamp_to_grid(grid, goal), options.snap_radius_cells, goal_cell)) {
        return result;  // no free cell near an endpoint
    }

    const std::size_t n_cells = grid.cell_count();
    const std::size_t start_flat = grid.flat(start_cell);
    const std::size_t goal_flat = grid.flat(goal_cell);
    const Vec3 goal_center = grid.cell_center(goal_cell).eval();

    const auto heuristic = [&](const GridIndex& c) {
        return (grid.cell_center(c) - goal_center).norm() / grid.cell_size;
    };

    constexpr double kUnvisited = std::numeric_limits<double>::infinity();
    std::vector<double> g(n_cells, kUnvisited);
    std::vector<std::size_t> parent(n_cells, std::numeric_limits<std::size_t>::max());
    std::vector<std::uint8_t> closed(n_cells, 0);

    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    g[start_flat] = 0.0;
    open.push({heuristic(start_cell), 0.0, start_flat});

    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        if (closed[top.cell] || top.g > g[top.cell]) continue;  // stale entry
        closed[top.cell] = 1;
        ++result.expanded;
        if (top.cell == goal_flat) break;
        if (result.expanded > options.expansion_budget) return result;

        const GridIndex cell = unflatten(grid, top.cell);
        for (const auto& nb : neighbors()) {
            const GridIndex next = cell + nb.offset;
            if (!grid.is_free(next)) continue;
            const std::size_t next_flat = grid.flat(next);
            if (closed[next_flat]) continue;
            const double tentative = g[top.cell] + nb.cost;
            if (tentative < g[next_flat]) {
                g[next_flat] = tentative;
                parent[next_flat] = top.cell;
                open.push({tentative + heuristic(next), tentative, next_flat});
            }
        }
    }

    if (!closed[goal_flat]) return result;

    std::vector<std::size_t> chain;
    for (std::size_t c = goal_flat; c != std::numeric_limits<std::size_t>::max(); c = parent[c]) {
        chain.push_back(c);
        if (c == start_flat) break;
    }
    std::reverse(chain.begin(), chain.end());

    result.status = AstarResult::Status::Found;
    result.path.cells.reserve(chain.size());
    result.path.world_points.reserve(chain.size());
    for (const std::size_t flat : chain) {
        const GridIndex c = unflatten(grid, flat);
        result.path.cells.push_back(c);
        result.path.world_points.push_back(grid.cell_center(c));
    }
    result.path.cost = g[goal_flat] * grid.cell_size;
    return result;
}

Trajectory path_to_trajectory(const GridPath& path, const Vec3& start, const Vec3& goal,
                              int horizon) {
    if (path.world_points.empty()) {
        throw std::invalid_argument("path_to_trajectory: empty path");
    }
    if (horizon < 1) throw std::invalid_argument("path_to_trajectory: horizon must be >= 1");

    std::vector<Vec3> poly = path.world_points;
    poly.front() = start;
    poly.back() = goal;
    if (poly.size() == 1) poly = {start, goal};

    std::vector<double> cum(poly.size(), 0.0);
    for (std::size_t i = 1; i < poly.size(); ++i) {
        cum[i] = cum[i - 1] + (poly[i] - poly[i - 1]).norm();
    }
    const double total = cum.back();

    std::vector<Waypoint> waypoints(horizon + 1);
    std::size_t seg = 0;
    for (int j = 0; j <= horizon; ++j) {
        const double s = static_cast<double>(j) / horizon;
        waypoints[j].t = s;
        if (total <= 0.0) {
            waypoints[j].p = start;
            continue;
        }
        const double target = s * total;
        while (seg + 2 < poly.size() && cum[seg + 1] < target) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double alpha = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
        waypoints[j].p = poly[seg] + std::clamp(alpha, 0.0, 1.0) * (poly[seg + 1] - poly[seg]);
    }
    // Exact endpoints regardless of arithmetic above.
    waypoints.front().p = start;
    waypoints.back().p = goal;
    return Trajectory(std::move(waypoints));
}

}  // namespace ntraj
