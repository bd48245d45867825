#include "ntraj/eval/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ntraj/rng.hpp"

namespace ntraj {

using nlohmann::json;

Protocol protocol_from_string(const std::string& name) {
    if (name == "dataset") return Protocol::Dataset;
    if (name == "plan") return Protocol::Plan;
    if (name == "deconflict") return Protocol::Deconflict;
    if (name == "ablation") return Protocol::Ablation;
    if (name == "scaling") return Protocol::Scaling;
    throw std::invalid_argument("unknown protocol '" + name + "'");
}

std::string to_string(Protocol protocol) {
    switch (protocol) {
        case Protocol::Dataset: return "dataset";
        case Protocol::Plan: return "plan";
        case Protocol::Deconflict: return "deconflict";
        case Protocol::Ablation: return "ablation";
        case Protocol::Scaling: return "scaling";
    }
    return "unknown";
}

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct ConditionAccumulator {
    std::vector<TrajectoryBundle> bundles;
    std::vector<double> times;
};

EvalReport summarize(const std::string& name, const ConditionAccumulator& acc,
                     const EnvironmentSdf& env, const Thresholds& thresholds, int unsolved = 0) {
    EvalReport r;
    r.name = name;
    r.ecr = compute_ecr(acc.bundles, env, thresholds, unsolved);
    r.icr = compute_icr(acc.bundles, thresholds);
    r.td = compute_td(acc.bundles);
    r.counts.instances = static_cast<int>(acc.bundles.size());
    r.counts.unsolved = unsolved;
    for (const auto& b : acc.bundles) r.counts.trajectories += static_cast<int>(b.size());
    if (!acc.times.empty()) {
        double sum = 0.0;
        for (const double t : acc.times) sum += t;
        r.ct_mean = sum / static_cast<double>(acc.times.size());
        double sq = 0.0;
        for (const double t : acc.times) sq += (t - r.ct_mean) * (t - r.ct_mean);
        r.ct_std = std::sqrt(sq / static_cast<double>(acc.times.size()));
    }
    return r;
}

void add_per_instance_rows(ExperimentReport& report, const std::string& condition,
                           const ConditionAccumulator& acc, const EnvironmentSdf& env,
                           const Thresholds& thresholds) {
    for (std::size_t i = 0; i < acc.bundles.size(); ++i) {
        const TrajectoryBundle* b = &acc.bundles[i];
        PerInstanceRow row;
        row.condition = condition;
        row.instance = static_cast<int>(i);
        row.ecr = compute_ecr({b, 1}, env, thresholds);
        row.icr = compute_icr({b, 1}, thresholds);
        row.td = compute_td({b, 1});
        row.ct = i < acc.times.size() ? acc.times[i] : 0.0;
        report.per_instance.push_back(std::move(row));
    }
}

std::size_t instance_limit(const Dataset& dataset, const ExperimentConfig& config) {
    if (config.max_instances > 0) {
        return std::min<std::size_t>(dataset.size(), config.max_instances);
    }
    return dataset.size();
}

/// Runs the plan pipeline at a fixed refinement step count; planning time
/// covers proposal + forward + refinement only.
ConditionAccumulator run_plan(const NtmModel& model, const Dataset& dataset,
                              const EnvironmentSdf& env, const ExperimentConfig& config,
                              int refine_steps) {
    ConditionAccumulator acc;
    RefineContext refine;
    refine.env = &env;
    refine.thresholds = &config.thresholds;
    refine.optimizer = config.refine;
    refine.optimizer.max_iterations = refine_steps;
    const RefineContext* refine_ptr = refine_steps > 0 ? &refine : nullptr;

    const std::size_t n = instance_limit(dataset, config);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& queries = dataset.instances[i].starts_goals;
        const double t0 = now_seconds();
        TrajectoryBundle bundle = infer(model, queries, &env, refine_ptr);
        acc.times.push_back(now_seconds() - t0);
        acc.bundles.push_back(std::move(bundle));
    }
    return acc;
}

}  // namespace

TrajectoryBundle perturb_until_conflicted(const TrajectoryBundle& bundle, double target_icr,
                                          const Thresholds& thresholds, std::uint64_t seed) {
    if (bundle.size() < 2) {
        throw std::invalid_argument("perturb_until_conflicted: needs at least two agents");
    }
    const auto base = bundle.to_matrices();
    const Eigen::Index rows = base.front().rows();

    // Mean path across agents; pulling everyone toward it manufactures
    // same-time proximity.
    Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(rows, 3);
    for (const auto& m : base) centroid += m.rightCols<3>();
    centroid /= static_cast<double>(base.size());

    for (int step = 1; step <= 10; ++step) {
        const double alpha = 0.1 * step;
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(step)));
        std::vector<WaypointMatrix> perturbed = base;
        for (auto& m : perturbed) {
            for (Eigen::Index j = 1; j + 1 < rows; ++j) {
                for (int c = 0; c < 3; ++c) {
                    const double pull = alpha * (centroid(j, c) - m(j, c + 1));
                    const double noise = 0.05 * alpha * rng.normal();
                    m(j, c + 1) = std::clamp(m(j, c + 1) + pull + noise, -0.999, 0.999);
                }
            }
        }
        TrajectoryBundle candidate = TrajectoryBundle::from_matrices(perturbed);
        if (compute_icr({&candidate, 1}, thresholds) >= target_icr || step == 10) {
            return candidate;
        }
    }
    return bundle;  // unreachable
}

ExperimentReport run_experiment(Protocol protocol, const NtmModel* model, const Dataset& dataset,
                                const EnvironmentSdf& env, const ExperimentConfig& config) {
    config.thresholds.validate();
    if (protocol != Protocol::Dataset && model == nullptr) {
        throw std::invalid_argument("run_experiment: protocol requires a model");
    }
    ExperimentReport report;
    report.protocol = to_string(protocol);
    report.env_hash = config.env_hash;
    report.model_hash = config.model_hash;
    report.dataset_hash = config.dataset_hash;
    report.seed = config.seed;
    report.thresholds = config.thresholds;

    switch (protocol) {
        case Protocol::Dataset: {
            ConditionAccumulator acc;
            const std::size_t n = instance_limit(dataset, config);
            for (std::size_t i = 0; i < n; ++i) {
                if (dataset.instances[i].trajectories) {
                    acc.bundles.push_back(*dataset.instances[i].trajectories);
                }
            }
            report.conditions.push_back(
                summarize("ground-truth", acc, env, config.thresholds));
            add_per_instance_rows(report, "ground-truth", acc, env, config.thresholds);
            break;
        }
        case Protocol::Plan: {
            const auto acc = run_plan(*model, dataset, env, config, config.refine_steps);
            report.conditions.push_back(summarize("model", acc, env, config.thresholds));
            add_per_instance_rows(report, "model", acc, env, config.thresholds);
            report.outputs = acc.bundles;

            ConditionAccumulator gt;
            const std::size_t n = instance_limit(dataset, config);
            for (std::size_t i = 0; i < n; ++i) {
                if (dataset.instances[i].trajectories) {
                    gt.bundles.push_back(*dataset.instances[i].trajectories);
                }
            }
            if (!gt.bundles.empty()) {
                report.conditions.push_back(
                    summarize("ground-truth", gt, env, config.thresholds));
            }
            break;
        }
        case Protocol::Deconflict: {
            ConditionAccumulator before, after;
            RefineContext refine;
            refine.env = &env;
            refine.thresholds = &config.thresholds;
            refine.optimizer = config.refine;
            refine.optimizer.max_iterations = config.deconflict_refine_steps;
            const RefineContext* refine_ptr =
                config.deconflict_refine_steps > 0 ? &refine : nullptr;

            const std::size_t n = instance_limit(dataset, config);
            for (std::size_t i = 0; i < n; ++i) {
                if (!dataset.instances[i].trajectories) continue;
                TrajectoryBundle conflicted = perturb_until_conflicted(
                    *dataset.instances[i].trajectories, config.deconflict_target_icr,
                    config.thresholds, Rng::derive(config.seed, i));
                const double t0 = now_seconds();
                TrajectoryBundle corrected = deconflict(*model, conflicted, refine_ptr);
                after.times.push_back(now_seconds() - t0);
                before.bundles.push_back(std::move(conflicted));
                after.bundles.push_back(std::move(corrected));
            }
            report.conditions.push_back(
                summarize("before-coordination", before, env, config.thresholds));
            report.conditions.push_back(
                summarize("after-coordination", after, env, config.thresholds));
            add_per_instance_rows(report, "before-coordination", before, env, config.thresholds);
            add_per_instance_rows(report, "after-coordination", after, env, config.thresholds);
            break;
        }
        case Protocol::Ablation: {
            for (const int steps : config.ablation_steps) {
                const auto acc = run_plan(*model, dataset, env, config, steps);
                const std::string name = "refine-" + std::to_string(steps);
                report.conditions.push_back(summarize(name, acc, env, config.thresholds));
                add_per_instance_rows(report, name, acc, env, config.thresholds);
            }
            break;
        }
        case Protocol::Scaling: {
            for (const int agents : config.scaling_agents) {
                Rng rng(Rng::derive(config.seed, 7000 + static_cast<std::uint64_t>(agents)));
                const auto points = env.sample_free_points(
                    2 * agents, env.normalization().distance_to_world(config.thresholds.clearance),
                    rng.next_u64());
                std::vector<std::pair<Vec3, Vec3>> queries(agents);
                for (int a = 0; a < agents; ++a) {
                    queries[a] = {env.normalization().to_normalized(points[2 * a]),
                                  env.normalization().to_normalized(points[2 * a + 1])};
                }
                ConditionAccumulator acc;
                for (int warm = 0; warm < 2; ++warm) {
                    (void)infer(*model, queries, &env, nullptr);
                }
                TrajectoryBundle last = infer(*model, queries, &env, nullptr);
                for (int rep = 0; rep < config.timing_repetitions; ++rep) {
                    const double t0 = now_seconds();
                    last = infer(*model, queries, &env, nullptr);
                    acc.times.push_back(now_seconds() - t0);
                }
                acc.bundles.push_back(std::move(last));
                report.conditions.push_back(summarize("agents-" + std::to_string(agents), acc,
                                                      env, config.thresholds));
            }
            break;
        }
    }
    return report;
}

void write_report_json(const std::string& path, const ExperimentReport& report) {
    json doc;
    doc["protocol"] = report.protocol;
    doc["env_hash"] = report.env_hash;
    doc["model_hash"] = report.model_hash;
    doc["dataset_hash"] = report.dataset_hash;
    doc["seed"] = report.seed;
    doc["thresholds"] = {{"clearance", report.thresholds.clearance},
                         {"time_gap", report.thresholds.time_gap},
                         {"separation", report.thresholds.separation}};
    auto& conditions = doc["conditions"];
    conditions = json::array();
    for (const auto& c : report.conditions) {
        conditions.push_back({{"name", c.name},
                              {"ecr", c.ecr},
                              {"icr", c.icr},
                              {"td", c.td},
                              {"ct_mean", c.ct_mean},
                              {"ct_std", c.ct_std},
                              {"counts",
                               {{"instances", c.counts.instances},
                                {"trajectories", c.counts.trajectories},
                                {"unsolved", c.counts.unsolved}}}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
    out << doc.dump(2) << "\n";
}

void write_per_instance_csv(const std::string& path, const ExperimentReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_per_instance_csv: cannot open " + path);
    out << "condition,instance,ecr,icr,td,ct\n";
    char buf[220];
    for (const auto& row : report.per_instance) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%.17g,%.17g\n", row.condition.c_str(),
                      row.instance, row.ecr, row.icr, row.td, row.ct);
        out << buf;
    }
}

}  // namespace ntraj
