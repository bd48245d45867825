#pragma once

#include <string>

#include "ntraj/sdf.hpp"

namespace ntraj {

/// Environment spec file (world units):
/// { "bounds": {"min": [x,y,z], "max": [x,y,z]},
///   "primitives": [ {"kind": "sphere", "center": [x,y,z], "radius": r},
///                   {"kind": "box", "center": [...], "half_extents": [...]},
///                   {"kind": "capsule", "p0": [...], "p1": [...], "radius": r},
///                   {"kind": "cylinder", "center": [...], "radius": r,
///                    "half_height": h} ] }
void save_environment_json(const std::string& path, const EnvironmentSdf& env);
EnvironmentSdf load_environment_json(const std::string& path);

std::string environment_to_json(const EnvironmentSdf& env);
EnvironmentSdf environment_from_json(const std::string& text);

}  // namespace ntraj
