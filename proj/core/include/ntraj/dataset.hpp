#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ntraj/trajectory.hpp"

namespace ntraj {

/// One planning problem: N start-goal pairs, optionally with the solved
/// trajectories (absent for query-only instances). Coordinates are in the
/// environment's normalized frame.
struct PlanningInstance {
    std::vector<std::pair<Vec3, Vec3>> starts_goals;
    std::optional<TrajectoryBundle> trajectories;

    std::size_t agent_count() const { return starts_goals.size(); }
};

struct Dataset {
    std::vector<PlanningInstance> instances;

    std::size_t size() const { return instances.size(); }
    bool empty() const { return instances.empty(); }
};

/// JSONL, one instance per line:
/// {"starts_goals": [[sx,sy,sz,gx,gy,gz],...],
///  "trajectories": [[[t,x,y,z],...],...]}   (omitted for query-only rows)
void save_dataset_jsonl(const std::string& path, const Dataset& dataset);
Dataset load_dataset_jsonl(const std::string& path);

std::string instance_to_jsonl(const PlanningInstance& instance);
PlanningInstance instance_from_jsonl(const std::string& line);

/// Deterministic shuffled partition. Fractions must sum to 1; integer
/// remainders go to the training split.
std::array<Dataset, 3> split_dataset(const Dataset& dataset, double train_fraction,
                                     double val_fraction, double test_fraction,
                                     std::uint64_t seed);

}  // namespace ntraj
