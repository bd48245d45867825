#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ntraj/geometry.hpp"

namespace ntraj {

using GridIndex = Eigen::Vector3i;

/// Dense boolean voxelization of an environment, cubic cells.
struct OccupancyGrid {
    Vec3 origin = Vec3::Zero();  // world position of the (0,0,0) cell corner
    double cell_size = 1.0;
    GridIndex dims = GridIndex::Zero();
    std::vector<std::uint8_t> occupied;

    std::size_t cell_count() const {
        return static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
    }

    bool in_bounds(const GridIndex& c) const {
        return (c.array() >= 0).all() && (c.array() < dims.array()).all();
    }

    std::size_t flat(const GridIndex& c) const {
        return (static_cast<std::size_t>(c.z()) * dims.y() + c.y()) * dims.x() + c.x();
    }

    bool is_occupied(const GridIndex& c) const { return occupied[flat(c)] != 0; }

    bool is_free(const GridIndex& c) const { return in_bounds(c) && !is_occupied(c); }

    Vec3 cell_center(const GridIndex& c) const {
        return origin + cell_size * (c.cast<double>() + Vec3::Constant(0.5));
    }

    /// Grid cell containing a world point; false when outside the grid.
    bool cell_of(const Vec3& p, GridIndex& out) const;

    /// Fraction of occupied cells (diagnostics).
    double occupied_fraction() const;
};

}  // namespace ntraj
