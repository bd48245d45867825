#include "ntraj/dataset.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ntraj/rng.hpp"

namespace ntraj {

using nlohmann::json;

std::string instance_to_jsonl(const PlanningInstance& instance) {
    json row;
    auto& sg = row["starts_goals"];
    sg = json::array();
    for (const auto& [s, g] : instance.starts_goals) {
        sg.push_back({s.x(), s.y(), s.z(), g.x(), g.y(), g.z()});
    }
    if (instance.trajectories) {
        auto& trajs = row["trajectories"];
        trajs = json::array();
        for (const auto& traj : instance.trajectories->trajectories()) {
            json points = json::array();
            for (const auto& w : traj.waypoints()) {
                points.push_back({w.t, w.p.x(), w.p.y(), w.p.z()});
            }
            trajs.push_back(std::move(points));
        }
    }
    return row.dump();
}

PlanningInstance instance_from_jsonl(const std::string& line) {
    const json row = json::parse(line);
    PlanningInstance instance;
    for (const auto& sg : row.at("starts_goals")) {
        if (sg.size() != 6) throw std::runtime_error("dataset: start-goal row must have 6 values");
        instance.starts_goals.emplace_back(
            Vec3(sg[0].get<double>(), sg[1].get<double>(), sg[2].get<double>()),
            Vec3(sg[3].get<double>(), sg[4].get<double>(), sg[5].get<double>()));
    }
    if (instance.starts_goals.empty()) {
        throw std::runtime_error("dataset: instance without start-goal pairs");
    }
    if (row.contains("trajectories")) {
        std::vector<Trajectory> trajs;
        for (const auto& points : row.at("trajectories")) {
            std::vector<Waypoint> w;
            w.reserve(points.size());
            for (const auto& q : points) {
                if (q.size() != 4) throw std::runtime_error("dataset: waypoint must have 4 values");
                w.push_back({q[0].get<double>(), Vec3(q[1].get<double>(), q[2].get<double>(),
                                                      q[3].get<double>())});
            }
            trajs.emplace_back(std::move(w));
        }
        if (trajs.size() != instance.starts_goals.size()) {
            throw std::runtime_error("dataset: trajectory count differs from start-goal count");
        }
        instance.trajectories = TrajectoryBundle(std::move(trajs));
    }
    return instance;
}

void save_dataset_jsonl(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_dataset_jsonl: cannot open " + path);
    for (const auto& instance : dataset.instances) {
        out << instance_to_jsonl(instance) << '\n';
    }
    if (!out) throw std::runtime_error("save_dataset_jsonl: write failed for " + path);
}

Dataset load_dataset_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_dataset_jsonl: cannot open " + path);
    Dataset dataset;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        dataset.instances.push_back(instance_from_jsonl(line));
    }
    return dataset;
}

std::array<Dataset, 3> split_dataset(const Dataset& dataset, double train_fraction,
                                     double val_fraction, double test_fraction,
                                     std::uint64_t seed) {
    if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9) {
        throw std::invalid_argument("split_dataset: fractions must sum to 1");
    }
    if (train_fraction < 0.0 || val_fraction < 0.0 || test_fraction < 0.0) {
        throw std::invalid_argument("split_dataset: fractions must be >= 0");
    }
    const std::size_t n = dataset.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    const auto n_val = static_cast<std::size_t>(std::floor(val_fraction * n + 1e-9));
    const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * n + 1e-9));
    const std::size_t n_train = n - n_val - n_test;  // remainder goes to train

    std::array<Dataset, 3> out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& instance = dataset.instances[order[i]];
        if (i < n_train) {
            out[0].instances.push_back(instance);
        } else if (i < n_train + n_val) {
            out[1].instances.push_back(instance);
        } else {
            out[2].instances.push_back(instance);
        }
    }
    return out;
}

}  // namespace ntraj
