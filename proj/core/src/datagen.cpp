#include "ntraj/datagen.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "ntraj/astar.hpp"
#include "ntraj/rng.hpp"
#include "ntraj/thread_pool.hpp"

namespace ntraj {

void DatagenConfig::validate() const {
    if (instance_count < 1 || agents < 1 || horizon < 1) {
        throw std::invalid_argument("DatagenConfig: instance_count, agents, horizon must be >= 1");
    }
    if (grid_resolution < 2) {
        throw std::invalid_argument("DatagenConfig: grid_resolution must be >= 2");
    }
    if (validation_margin < 0.0 || endpoint_separation < 0.0) {
        throw std::invalid_argument("DatagenConfig: margins must be >= 0");
    }
    if (!(min_acceptance_rate > 0.0 && min_acceptance_rate <= 1.0)) {
        throw std::invalid_argument("DatagenConfig: min_acceptance_rate must be in (0,1]");
    }
    thresholds.validate();
    optimizer.validate();
}

namespace {

struct CandidateOutcome {
    enum class Status { Accepted, Unsolvable, Infeasible };
    Status status = Status::Infeasible;
    std::optional<PlanningInstance> instance;
};

/// Samples one endpoint set (starts then goals) in world units with the
/// required clearance and mutual separation. Throws when free space is too
/// scarce to sample at all.
std::vector<Vec3> sample_separated(const EnvironmentSdf& env, Rng& rng, int count,
                                   double margin_world, double separation_world) {
    std::vector<Vec3> points;
    points.reserve(count);
    const long long budget = 500LL * std::max(count, 1);
    long long attempts = 0;
    while (static_cast<int>(points.size()) < count) {
        if (attempts++ >= budget) {
            throw std::runtime_error(
                "generate_dataset: environment too dense to sample separated endpoints");
        }
        const Vec3 p = rng.point_in(env.bounds());
        if (!(env.signed_distance(p) > margin_world)) continue;
        bool ok = true;
        for (const auto& q : points) {
            if ((p - q).norm() < separation_world) {
                ok = false;
                break;
            }
        }
        if (ok) points.push_back(p);
    }
    return points;
}

CandidateOutcome process_candidate(const EnvironmentSdf& env, const OccupancyGrid& grid,
                                   const DatagenConfig& config, const Thresholds& validation,
                                   std::uint64_t candidate_seed) {
    CandidateOutcome outcome;
    Rng rng(candidate_seed);
    const auto& norm = env.normalization();
    const double margin_world =
        norm.distance_to_world(config.thresholds.clearance + config.validation_margin);
    const double sep_norm = config.endpoint_separation > 0.0
                                ? config.endpoint_separation
                                : config.thresholds.separation + 2.0 * config.validation_margin;
    const double sep_world = norm.distance_to_world(sep_norm);

    const auto starts = sample_separated(env, rng, config.agents, margin_world, sep_world);
    const auto goals = sample_separated(env, rng, config.agents, margin_world, sep_world);

    std::vector<Trajectory> proposals;
    proposals.reserve(config.agents);
    for (int i = 0; i < config.agents; ++i) {
        const auto plan = astar_plan(grid, starts[i], goals[i]);
        if (!plan.found()) {
            outcome.status = CandidateOutcome::Status::Unsolvable;
            return outcome;
        }
        const Trajectory world_traj =
            path_to_trajectory(plan.path, starts[i], goals[i], config.horizon);
        std::vector<Waypoint> normalized(world_traj.size());
        for (std::size_t j = 0; j < world_traj.size(); ++j) {
            normalized[j].t = world_traj[j].t;
            normalized[j].p = norm.to_normalized(world_traj[j].p);
        }
        proposals.emplace_back(std::move(normalized));
    }

    const TrajectoryBundle proposal_bundle(std::move(proposals));
    const auto optimized = optimize(proposal_bundle, env, validation, config.optimizer);

    // Re-validate with the strict spec thresholds; the inflated validation
    // thresholds above should guarantee this, but never emit unchecked data.
    if (!optimized.feasible ||
        !bundle_collision_free(optimized.bundle, env, config.thresholds) ||
        !bundle_conflict_free(optimized.bundle, config.thresholds)) {
        outcome.status = CandidateOutcome::Status::Infeasible;
        return outcome;
    }

    PlanningInstance instance;
    for (int i = 0; i < config.agents; ++i) {
        instance.starts_goals.emplace_back(norm.to_normalized(starts[i]),
                                           norm.to_normalized(goals[i]));
    }
    instance.trajectories = optimized.bundle;
    outcome.status = CandidateOutcome::Status::Accepted;
    outcome.instance = std::move(instance);
    return outcome;
}

}  // namespace

DatagenOutput generate_dataset(const EnvironmentSdf& env, const DatagenConfig& config) {
    config.validate();
    const auto start_time = std::chrono::steady_clock::now();
    const auto elapsed_s = [&start_time] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    };

    // Inflated thresholds used during optimization so the strict predicates
    // pass with margin.
    Thresholds validation = config.thresholds;
    validation.clearance += config.validation_margin;
    validation.separation += config.validation_margin;

    const double inflation_world =
        env.normalization().distance_to_world(validation.clearance);
    OccupancyGrid grid = env.rasterize(config.grid_resolution, inflation_world);

    DatagenOutput out;
    out.report.requested = config.instance_count;

    auto& pool = ThreadPool::shared(config.threads);
    const std::size_t block = std::max<std::size_t>(8, 4 * (pool.worker_count() + 1));

    long long next_candidate = 0;
    const long long probation = 200;  // candidates before the acceptance floor applies
    while (static_cast<int>(out.dataset.size()) < config.instance_count) {
        if (config.wall_clock_budget_s > 0.0 && elapsed_s() > config.wall_clock_budget_s) {
            out.report.timed_out = true;
            break;
        }
        std::vector<CandidateOutcome> outcomes(block);
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        pool.parallel_for(block, [&](std::size_t i) {
            if (failed.load(std::memory_order_relaxed)) return;
            try {
                outcomes[i] = process_candidate(
                    env, grid, config, validation,
                    Rng::derive(config.seed, static_cast<std::uint64_t>(next_candidate + i)));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
        if (failure) std::rethrow_exception(failure);
        next_candidate += block;

        // Consume strictly in candidate-index order and stop at the M-th
        // accepted one, so dataset and report do not depend on block size.
        for (auto& outcome : outcomes) {
            ++out.report.candidates;
            switch (outcome.status) {
                case CandidateOutcome::Status::Accepted:
                    out.dataset.instances.push_back(std::move(*outcome.instance));
                    break;
                case CandidateOutcome::Status::Unsolvable:
                    ++out.report.rejected_unsolvable;
                    break;
                case CandidateOutcome::Status::Infeasible:
                    ++out.report.rejected_infeasible;
                    break;
            }
            if (static_cast<int>(out.dataset.size()) >= config.instance_count) break;
        }

        if (out.report.candidates >= probation &&
            static_cast<int>(out.dataset.size()) < config.instance_count) {
            const double acceptance = static_cast<double>(out.dataset.size()) /
                                      static_cast<double>(out.report.candidates);
            if (acceptance < config.min_acceptance_rate) {
                throw std::runtime_error(
                    "generate_dataset: acceptance rate " + std::to_string(acceptance) +
                    " below floor; environment/thresholds likely infeasible");
            }
        }
    }

    out.report.generated = static_cast<int>(out.dataset.size());
    return out;
}

}  // namespace ntraj
