#pragma once

#include <cstdint>
#include <string>

#include "ntraj/sdf.hpp"

namespace ntraj {

enum class EnvKind { SphereForest, BoxCity, CapsuleGrove };

/// Procedural obstacle field settings. `obstacle_count` plays the density
/// role: obstacles are placed by rejection sampling with a minimum mutual
/// gap, so overly dense requests fail with an error instead of producing a
/// sealed world.
struct EnvGenConfig {
    EnvKind kind = EnvKind::SphereForest;
    int obstacle_count = 25;
    std::uint64_t seed = 0;
    Aabb bounds{Vec3(-1.0, -1.0, -1.0), Vec3(1.0, 1.0, 1.0)};
    double min_size = 0.08;   // radius / half-extent scale, world units
    double max_size = 0.16;
    double min_gap = 0.08;    // minimum surface-to-surface distance between obstacles
    double wall_margin = 0.05;

    static constexpr int kMaxObstacles = 200;

    void validate() const;
};

EnvironmentSdf generate_environment(const EnvGenConfig& config);

EnvKind env_kind_from_string(const std::string& name);
std::string to_string(EnvKind kind);

}  // namespace ntraj
