#include "ntraj/envgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ntraj/rng.hpp"

namespace ntraj {
namespace {

// Radius of a sphere centered at the primitive's reference center that
// encloses it; used for conservative placement gap checks.
double bounding_radius(const SdfPrimitive& prim) {
    switch (prim.kind) {
        case PrimitiveKind::Sphere: return prim.radius;
        case PrimitiveKind::Box: return prim.b.norm();
        case PrimitiveKind::Capsule: return 0.5 * (prim.b - prim.a).norm() + prim.radius;
        case PrimitiveKind::Cylinder:
            return std::sqrt(prim.radius * prim.radius + prim.half_height * prim.half_height);
    }
    return 0.0;
}

}  // namespace

void EnvGenConfig::validate() const {
    bounds.validate();
    if (obstacle_count < 0 || obstacle_count > kMaxObstacles) {
        throw std::invalid_argument("EnvGenConfig: obstacle_count out of range");
    }
    if (!(min_size > 0.0) || !(max_size >= min_size)) {
        throw std::invalid_argument("EnvGenConfig: invalid size range");
    }
    if (min_gap < 0.0 || wall_margin < 0.0) {
        throw std::invalid_argument("EnvGenConfig: gaps must be >= 0");
    }
}

EnvironmentSdf generate_environment(const EnvGenConfig& config) {
    config.validate();
    Rng rng(config.seed);
    std::vector<SdfPrimitive> prims;
    prims.reserve(config.obstacle_count);

    // Sampling region keeps obstacle centers away from the walls.
    Aabb region = config.bounds;
    const double shrink = config.wall_margin + config.max_size;
    region.min += Vec3::Constant(shrink);
    region.max -= Vec3::Constant(shrink);
    if ((region.min.array() >= region.max.array()).any()) {
        throw std::runtime_error("generate_environment: bounds too small for obstacle size");
    }

    const long long budget = 200LL * std::max(config.obstacle_count, 1);
    long long attempts = 0;
    while (static_cast<int>(prims.size()) < config.obstacle_count) {
        if (attempts++ >= budget) {
            throw std::runtime_error(
                "generate_environment: infeasible density, placement budget exhausted");
        }
        const Vec3 center = rng.point_in(region);
        const double size = rng.uniform(config.min_size, config.max_size);

        SdfPrimitive candidate;
        switch (config.kind) {
            case EnvKind::SphereForest:
                candidate = SdfPrimitive::sphere(center, size);
                break;
            case EnvKind::BoxCity: {
                const Vec3 half(size * rng.uniform(0.6, 1.0), size * rng.uniform(0.6, 1.0),
                                size * rng.uniform(0.8, 1.6));
                candidate = SdfPrimitive::box(center, half);
                break;
            }
            case EnvKind::CapsuleGrove: {
                Vec3 axis = rng.unit_vector();
                axis.z() = std::abs(axis.z()) + 0.5;  // mostly upright stems
                axis.normalize();
                const double half_len = size * rng.uniform(1.0, 2.0);
                candidate = SdfPrimitive::capsule(center - half_len * axis,
                                                  center + half_len * axis, 0.5 * size);
                break;
            }
        }

        // Conservative gap check: existing surface vs. candidate's bounding
        // sphere around its reference center.
        const double candidate_radius = bounding_radius(candidate);
        bool ok = true;
        for (const auto& prim : prims) {
            if (prim.distance(center) - candidate_radius < config.min_gap) {
                ok = false;
                break;
            }
        }
        if (ok) prims.push_back(candidate);
    }

    return EnvironmentSdf(config.bounds, std::move(prims));
}

EnvKind env_kind_from_string(const std::string& name) {
    if (name == "sphere-forest") return EnvKind::SphereForest;
    if (name == "box-city") return EnvKind::BoxCity;
    if (name == "capsule-grove") return EnvKind::CapsuleGrove;
    throw std::invalid_argument("unknown environment kind '" + name + "'");
}

std::string to_string(EnvKind kind) {
    switch (kind) {
        case EnvKind::SphereForest: return "sphere-forest";
        case EnvKind::BoxCity: return "box-city";
        case EnvKind::CapsuleGrove: return "capsule-grove";
    }
    return "unknown";
}

}  // namespace ntraj
