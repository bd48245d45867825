#include "ntraj/optimizer.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ntraj {

void OptimizerConfig::validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("OptimizerConfig: step_size must be > 0");
    if (max_iterations < 1) {
        throw std::invalid_argument("OptimizerConfig: max_iterations must be >= 1");
    }
    if (weight_env < 0.0 || weight_inter < 0.0 || weight_length < 0.0) {
        throw std::invalid_argument("OptimizerConfig: weights must be >= 0");
    }
}

ObjectiveTerms objective_terms(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
                               const Thresholds& thresholds, const OptimizerConfig& config,
                               BundleGrad* grad) {
    ObjectiveTerms terms;
    terms.env = env_collision_loss(mats, env, thresholds, grad, config.weight_env);
    terms.inter = inter_conflict_loss(mats, thresholds, grad, config.weight_inter);
    terms.length = path_length_loss(mats, nullptr, grad, config.weight_length);
    terms.total = config.weight_env * terms.env + config.weight_inter * terms.inter +
                  config.weight_length * terms.length;
    return terms;
}

double objective_value(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                       const Thresholds& thresholds, const OptimizerConfig& config) {
    const auto mats = bundle.to_matrices();
    return objective_terms(mats, env, thresholds, config).total;
}

namespace {

bool feasible(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
              const Thresholds& thresholds) {
    return matrices_collision_free(mats, env, thresholds) &&
           matrices_conflict_free(mats, thresholds);
}

}  // namespace

OptimizeResult optimize(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                        const Thresholds& thresholds, const OptimizerConfig& config) {
    config.validate();
    thresholds.validate();
    const auto start_time = std::chrono::steady_clock::now();
    const auto elapsed_s = [&start_time] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    };

    std::vector<WaypointMatrix> current = bundle.to_matrices();
    const Eigen::Index last_row = current.front().rows() - 1;

    OptimizeResult result{bundle, {}, 0, false, false};

    ObjectiveTerms terms = objective_terms(current, env, thresholds, config);
    double best_total = terms.total;
    std::vector<WaypointMatrix> best_overall = current;
    bool have_feasible = feasible(current, env, thresholds);
    double best_feasible_total = have_feasible ? terms.total : 0.0;
    std::vector<WaypointMatrix> best_feasible = have_feasible ? current : std::vector<WaypointMatrix>{};

    result.log.push_back({0, terms.total, terms.env, terms.inter, terms.length, best_total});

    const bool done_at_input =
        terms.total <= config.tolerance || (config.stop_when_feasible && have_feasible);

    if (!done_at_input) {
        for (int iter = 1; iter <= config.max_iterations; ++iter) {
            BundleGrad grad = make_zero_grads(current);
            objective_terms(current, env, thresholds, config, &grad);
            for (std::size_t i = 0; i < current.size(); ++i) {
                if (!grad[i].allFinite()) {
                    throw std::runtime_error("optimize: non-finite gradient at iteration " +
                                             std::to_string(iter));
                }
                if (config.freeze_timestamps) grad[i].col(0).setZero();
                if (config.pin_endpoints) {
                    grad[i].row(0).setZero();
                    grad[i].row(last_row).setZero();
                }
                current[i] -= config.step_size * grad[i];
            }
            result.iterations = iter;

            terms = objective_terms(current, env, thresholds, config);
            const bool now_feasible = feasible(current, env, thresholds);
            if (terms.total < best_total) {
                best_total = terms.total;
                best_overall = current;
            }
            if (now_feasible && (!have_feasible || terms.total < best_feasible_total)) {
                have_feasible = true;
                best_feasible_total = terms.total;
                best_feasible = current;
            }
            result.log.push_back(
                {iter, terms.total, terms.env, terms.inter, terms.length, best_total});

            if (terms.total <= config.tolerance) break;
            if (config.stop_when_feasible && now_feasible) break;
            if (config.wall_clock_budget_s > 0.0 && elapsed_s() > config.wall_clock_budget_s) {
                result.hit_time_budget = true;
                break;
            }
        }
    }

    const auto& chosen = have_feasible ? best_feasible : best_overall;
    result.bundle = TrajectoryBundle::from_matrices(chosen);
    result.feasible = have_feasible;
    return result;
}

void write_iteration_log_csv(const std::string& path, const std::vector<IterationRecord>& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_iteration_log_csv: cannot open " + path);
    out << "iteration,J,loss_env,loss_inter,loss_perf\n";
    char buf[160];
    for (const auto& rec : log) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", rec.iteration, rec.total,
                      rec.env, rec.inter, rec.length);
        out << buf;
    }
}

}  // namespace ntraj
