#include "ntraj/eval/metrics.hpp"

#include <stdexcept>
#include <vector>

namespace ntraj {

double compute_ecr(std::span<const TrajectoryBundle> bundles, const EnvironmentSdf& env,
                   const Thresholds& thresholds, int unsolved_count) {
    if (unsolved_count < 0) throw std::invalid_argument("compute_ecr: negative unsolved count");
    long long total = unsolved_count;
    long long colliding = unsolved_count;
    for (const auto& bundle : bundles) {
        for (const auto& traj : bundle.trajectories()) {
            ++total;
            if (!env_collision_free(traj, env, thresholds)) ++colliding;
        }
    }
    return total > 0 ? static_cast<double>(colliding) / static_cast<double>(total) : 0.0;
}

double compute_icr(std::span<const TrajectoryBundle> bundles, const Thresholds& thresholds) {
    long long total = 0;
    long long conflicting = 0;
    for (const auto& bundle : bundles) {
        const auto mats = bundle.to_matrices();
        std::vector<std::uint8_t> in_conflict(mats.size(), 0);
        for (std::size_t i = 0; i < mats.size(); ++i) {
            for (std::size_t k = i + 1; k < mats.size(); ++k) {
                if (!inter_conflict_free(mats[i], mats[k], thresholds)) {
                    in_conflict[i] = 1;
                    in_conflict[k] = 1;
                }
            }
        }
        total += static_cast<long long>(mats.size());
        for (const auto flag : in_conflict) conflicting += flag;
    }
    return total > 0 ? static_cast<double>(conflicting) / static_cast<double>(total) : 0.0;
}

double compute_td(std::span<const TrajectoryBundle> bundles) {
    long long total = 0;
    double sum = 0.0;
    for (const auto& bundle : bundles) {
        for (const auto& traj : bundle.trajectories()) {
            sum += traj.length();
            ++total;
        }
    }
    return total > 0 ? sum / static_cast<double>(total) : 0.0;
}

}  // namespace ntraj
