#pragma once

#include <span>

#include <Eigen/Core>

#include "ntraj/trajectory.hpp"

namespace ntraj {

/// Stacks a bundle's waypoints into one token coordinate matrix, agent-major:
/// token a*(T+1)+j holds agent a's waypoint j as (t, x, y, z).
Eigen::MatrixXd stack_coordinates(std::span<const WaypointMatrix> bundle);

/// Sinusoidal features of normalized 4D coordinates, computed per channel at
/// width/4 geometrically spaced frequencies (sin and cos per frequency),
/// giving 2*width columns. Throws when coordinates leave the normalized
/// range (space [-1,1], time [0,1]) by more than 1e-6.
Eigen::MatrixXd coordinate_features(const Eigen::MatrixXd& coords, int width);

/// Frequency ladder used by coordinate_features: pi * 2^(6k/(F-1)).
std::vector<double> embedding_frequencies(int count);

}  // namespace ntraj
