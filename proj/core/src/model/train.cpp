#include "ntraj/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "ntraj/losses.hpp"
#include "ntraj/rng.hpp"
#include "ntraj/thread_pool.hpp"

namespace ntraj {
namespace {

struct Adam {
    double lr;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long step = 0;
    GradBuffer m;
    GradBuffer v;

    Adam(const NtmParams& params, double lr_) : lr(lr_), m(params), v(params) {}

    void update(NtmParams& params, const GradBuffer& grad) {
        ++step;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        auto& tensors = params.tensors();
        for (std::size_t i = 0; i < tensors.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i].array().matrix() +
                   (1.0 - beta2) * grad[i].array().square().matrix();
            tensors[i].value.array() -=
                lr * (m[i].array() / bc1) / ((v[i].array() / bc2).sqrt() + eps);
        }
    }
};

struct SampleSettings {
    bool augmented = false;
    std::uint64_t noise_seed = 0;
};

struct SampleResult {
    double gt = 0.0, env = 0.0, inter = 0.0, length = 0.0, total = 0.0;
};

std::vector<WaypointMatrix> line_proposal(const PlanningInstance& instance, int horizon) {
    std::vector<WaypointMatrix> proposal;
    proposal.reserve(instance.starts_goals.size());
    for (const auto& [s, g] : instance.starts_goals) {
        proposal.push_back(propose_line(s, g, horizon).to_matrix());
    }
    return proposal;
}

/// Ground truth with noisy interior waypoints, endpoints intact, positions
/// clamped to the embedder's domain.
std::vector<WaypointMatrix> perturbed_proposal(const std::vector<WaypointMatrix>& truth,
                                               double scale, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<WaypointMatrix> proposal = truth;
    for (auto& m : proposal) {
        for (Eigen::Index j = 1; j + 1 < m.rows(); ++j) {
            for (int c = 1; c < 4; ++c) {
                m(j, c) = std::clamp(m(j, c) + scale * rng.normal(), -0.999, 0.999);
            }
        }
    }
    return proposal;
}

SampleResult process_sample(const NtmModel& model, const PlanningInstance& instance,
                            const SampleSettings& settings, const EnvironmentSdf& env,
                            const Thresholds& thresholds, GradBuffer& grads) {
    const auto& cfg = model.config().training;
    const auto truth = instance.trajectories->to_matrices();
    const auto proposal =
        settings.augmented
            ? perturbed_proposal(truth, cfg.proposal_noise_scale, settings.noise_seed)
            : line_proposal(instance, model.config().horizon);

    ForwardCache cache;
    const auto output = model.forward(proposal, &cache);

    std::vector<double> reference_lengths;
    reference_lengths.reserve(truth.size());
    for (const auto& m : truth) reference_lengths.push_back(polyline_length(m));

    BundleGrad out_grad = make_zero_grads(output);
    SampleResult r;
    r.gt = ground_truth_loss(output, truth, &out_grad, cfg.weight_gt);
    r.env = env_collision_loss(output, env, thresholds, &out_grad, cfg.weight_env);
    r.inter = inter_conflict_loss(output, thresholds, &out_grad, cfg.weight_inter);
    r.length = path_length_loss(output, &reference_lengths, &out_grad, cfg.weight_length);
    r.total = cfg.weight_gt * r.gt + cfg.weight_env * r.env + cfg.weight_inter * r.inter +
              cfg.weight_length * r.length;

    model.backward(cache, out_grad, grads);
    return r;
}

}  // namespace

TrainResult train_model(const Dataset& data, const EnvironmentSdf& env,
                        const Thresholds& thresholds, const NtmConfig& config) {
    config.validate();
    thresholds.validate();
    if (data.empty()) throw std::invalid_argument("train_model: empty dataset");
    for (const auto& instance : data.instances) {
        if (!instance.trajectories) {
            throw std::invalid_argument("train_model: query-only instance in training data");
        }
        if (instance.trajectories->horizon() != config.horizon) {
            throw std::invalid_argument("train_model: dataset horizon differs from config");
        }
        if (instance.agent_count() != data.instances.front().agent_count()) {
            throw std::invalid_argument("train_model: non-uniform agent counts");
        }
    }

    const auto& tcfg = config.training;
    NtmModel model = NtmModel::init(config, tcfg.seed);
    TrainResult result{model, {}, false, 0};
    if (tcfg.epochs == 0) return result;

    Adam adam(model.params(), tcfg.learning_rate);
    auto& pool = ThreadPool::shared(tcfg.threads);
    const std::size_t n = data.size();

    NtmParams last_good = model.params();

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        Rng epoch_rng(Rng::derive(tcfg.seed, 1000 + static_cast<std::uint64_t>(epoch)));
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        epoch_rng.shuffle(order);

        // Pre-draw augmentation decisions in fixed order so the parallel
        // section consumes no randomness.
        std::vector<SampleSettings> settings(n);
        for (std::size_t i = 0; i < n; ++i) {
            settings[i].augmented = epoch_rng.uniform() < tcfg.proposal_noise_fraction;
            settings[i].noise_seed = epoch_rng.next_u64();
        }

        EpochStats stats;
        stats.epoch = epoch;
        bool finite = true;

        for (std::size_t begin = 0; begin < n && finite; begin += tcfg.batch_size) {
            const std::size_t count = std::min<std::size_t>(tcfg.batch_size, n - begin);
            std::vector<GradBuffer> local;
            local.reserve(count);
            for (std::size_t i = 0; i < count; ++i) local.emplace_back(model.params());
            std::vector<SampleResult> results(count);
            std::exception_ptr failure;
            std::mutex failure_mutex;

            pool.parallel_for(count, [&](std::size_t i) {
                try {
                    const std::size_t inst = order[begin + i];
                    results[i] = process_sample(model, data.instances[inst], settings[inst], env,
                                                thresholds, local[i]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
            if (failure) std::rethrow_exception(failure);

            GradBuffer batch_grad(model.params());
            for (std::size_t i = 0; i < count; ++i) {
                batch_grad.add(local[i], 1.0 / static_cast<double>(count));
                stats.gt += results[i].gt;
                stats.env += results[i].env;
                stats.inter += results[i].inter;
                stats.length += results[i].length;
                stats.total += results[i].total;
                if (!std::isfinite(results[i].total)) finite = false;
            }
            if (!finite || !batch_grad.all_finite()) {
                finite = false;
                break;
            }

            if (tcfg.grad_clip > 0.0) {
                const double norm = std::sqrt(batch_grad.squared_norm());
                if (norm > tcfg.grad_clip) batch_grad.scale(tcfg.grad_clip / norm);
            }
            adam.update(model.params(), batch_grad);
        }

        if (!finite || !model.params().all_finite()) {
            result.diverged = true;
            model.params() = last_good;
            break;
        }

        const double inv_n = 1.0 / static_cast<double>(n);
        stats.gt *= inv_n;
        stats.env *= inv_n;
        stats.inter *= inv_n;
        stats.length *= inv_n;
        stats.total *= inv_n;
        result.log.push_back(stats);
        result.completed_epochs = epoch + 1;
        last_good = model.params();
    }

    result.model = std::move(model);
    return result;
}

void write_training_log_csv(const std::string& path, const std::vector<EpochStats>& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_training_log_csv: cannot open " + path);
    out << "epoch,l_gt,l_sdist,l_inter,l_dist,total\n";
    char buf[200];
    for (const auto& s : log) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.epoch, s.gt,
                      s.env, s.inter, s.length, s.total);
        out << buf;
    }
}

}  // namespace ntraj
