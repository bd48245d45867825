#include "ntraj/occupancy.hpp"

#include <cmath>

namespace ntraj {

bool OccupancyGrid::cell_of(const Vec3& p, GridIndex& out) const {
    const Vec3 rel = (p - origin) / cell_size;
    const GridIndex c(static_cast<int>(std::floor(rel.x())),
                      static_cast<int>(std::floor(rel.y())),
                      static_cast<int>(std::floor(rel.z())));
    if (!in_bounds(c)) return false;
    out = c;
    return true;
}

double OccupancyGrid::occupied_fraction() const {
    if (occupied.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto v : occupied) n += (v != 0);
    return static_cast<double>(n) / static_cast<double>(occupied.size());
}

}  // namespace ntraj
