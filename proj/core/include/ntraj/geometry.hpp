#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace ntraj {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box, used both as world bounds and as a sampling region.
struct Aabb {
    Vec3 min{-1.0, -1.0, -1.0};
    Vec3 max{1.0, 1.0, 1.0};

    Vec3 center() const { return 0.5 * (min + max); }
    Vec3 extent() const { return max - min; }

    bool contains(const Vec3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }

    // Signed clearance to the box surface: positive inside, negative outside.
    double interior_distance(const Vec3& p) const {
        const Vec3 to_min = p - min;
        const Vec3 to_max = max - p;
        if (contains(p)) {
            return std::min(to_min.minCoeff(), to_max.minCoeff());
        }
        const Vec3 q = (min - p).cwiseMax(p - max).cwiseMax(0.0);
        return -q.norm();
    }

    void validate() const {
        if (!min.allFinite() || !max.allFinite() || (min.array() >= max.array()).any()) {
            throw std::invalid_argument("Aabb: min must be finite and strictly below max");
        }
    }
};

/// Isotropic affine map from world coordinates into the cube [-1,1]^3.
/// The scale is uniform so normalized distances remain metric.
struct Normalization {
    Vec3 center{0.0, 0.0, 0.0};
    double scale = 1.0;  // normalized = (world - center) * scale

    static Normalization for_bounds(const Aabb& bounds) {
        Normalization n;
        n.center = bounds.center();
        n.scale = 2.0 / bounds.extent().maxCoeff();
        return n;
    }

    Vec3 to_normalized(const Vec3& world) const { return (world - center) * scale; }
    Vec3 to_world(const Vec3& normalized) const { return normalized / scale + center; }
    double distance_to_normalized(double world_distance) const { return world_distance * scale; }
    double distance_to_world(double normalized_distance) const { return normalized_distance / scale; }
};

}  // namespace ntraj
