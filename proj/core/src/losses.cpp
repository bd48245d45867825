#include "ntraj/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "ntraj/rng.hpp"

namespace ntraj {
namespace {

void require_uniform(std::span<const WaypointMatrix> mats) {
    if (mats.empty()) throw std::invalid_argument("loss: empty bundle");
    for (const auto& m : mats) {
        if (m.rows() < 2) throw std::invalid_argument("loss: trajectory shorter than 2 waypoints");
        if (m.rows() != mats.front().rows()) {
            throw std::invalid_argument("loss: non-uniform horizons");
        }
    }
}

// Antisymmetric deterministic unit vector for exactly-coincident waypoints:
// dir(i,j,k,j') == -dir(k,j',i,j).
Vec3 tiebreak_direction(std::size_t i, Eigen::Index j, std::size_t k, Eigen::Index j2) {
    const bool swapped = (k < i) || (k == i && j2 < j);
    if (swapped) return -tiebreak_direction(k, j2, i, j);
    std::uint64_t h = Rng::derive(0x5eedULL, (static_cast<std::uint64_t>(i) << 40) ^
                                                 (static_cast<std::uint64_t>(j) << 20) ^
                                                 (static_cast<std::uint64_t>(k) << 10) ^
                                                 static_cast<std::uint64_t>(j2));
    Vec3 v;
    for (int c = 0; c < 3; ++c) {
        v[c] = static_cast<double>((h >> (c * 21)) & 0x1fffff) / 0x1fffff * 2.0 - 1.0;
    }
    const double n = v.norm();
    return n > 1e-9 ? Vec3(v / n) : Vec3(0.0, 0.0, 1.0);
}

}  // namespace

BundleGrad make_zero_grads(std::span<const WaypointMatrix> mats) {
    BundleGrad grads;
    grads.reserve(mats.size());
    for (const auto& m : mats) grads.push_back(WaypointMatrix::Zero(m.rows(), 4));
    return grads;
}

double ground_truth_loss(std::span<const WaypointMatrix> pred,
                         std::span<const WaypointMatrix> truth, BundleGrad* grad_pred,
                         double weight) {
    require_uniform(pred);
    if (pred.size() != truth.size() || pred.front().rows() != truth.front().rows()) {
        throw std::invalid_argument("ground_truth_loss: shape mismatch");
    }
    const std::size_t agents = pred.size();
    const Eigen::Index horizon = pred.front().rows() - 1;
    const double denom = static_cast<double>(agents) * static_cast<double>(horizon);
    double sum = 0.0;
    for (std::size_t i = 0; i < agents; ++i) {
        for (Eigen::Index j = 1; j <= horizon; ++j) {
            for (int c = 0; c < 4; ++c) {
                const double d = pred[i](j, c) - truth[i](j, c);
                sum += std::abs(d);
                if (grad_pred && d != 0.0) {
                    (*grad_pred)[i](j, c) += weight * (d > 0.0 ? 1.0 : -1.0) / denom;
                }
            }
        }
    }
    return sum / denom;
}

double env_collision_loss(std::span<const WaypointMatrix> mats, const EnvironmentSdf& env,
                          const Thresholds& thresholds, BundleGrad* grad, double weight) {
    require_uniform(mats);
    const double denom =
        static_cast<double>(mats.size()) * static_cast<double>(mats.front().rows());
    double sum = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (Eigen::Index j = 0; j < mats[i].rows(); ++j) {
            const Vec3 p(mats[i](j, 1), mats[i](j, 2), mats[i](j, 3));
            const double sd = env.signed_distance_normalized(p);
            const double hinge = thresholds.clearance - sd;
            if (hinge <= 0.0) continue;
            sum += hinge;
            if (grad) {
                const Vec3 g = -weight / denom * env.gradient_normalized(p);
                (*grad)[i].row(j).tail<3>() += g.transpose();
            }
        }
    }
    return sum / denom;
}

double inter_conflict_loss(std::span<const WaypointMatrix> mats, const Thresholds& thresholds,
                           BundleGrad* grad, double weight) {
    require_uniform(mats);
    const std::size_t agents = mats.size();
    if (agents < 2) return 0.0;
    const Eigen::Index rows = mats.front().rows();
    const double denom = static_cast<double>(rows - 1) * static_cast<double>(agents);
    double sum = 0.0;
    // Unordered pairs, each counted twice to match the ordered double sum.
    for (std::size_t i = 0; i < agents; ++i) {
        for (std::size_t k = i + 1; k < agents; ++k) {
            for (Eigen::Index j = 0; j < rows; ++j) {
                for (Eigen::Index j2 = 0; j2 < rows; ++j2) {
                    const double dt = std::abs(mats[i](j, 0) - mats[k](j2, 0));
                    if (dt > thresholds.time_gap) continue;
                    const Eigen::RowVector3d dp =
                        mats[i].row(j).tail<3>() - mats[k].row(j2).tail<3>();
                    const double dist = dp.norm();
                    const double hinge = thresholds.separation - dist;
                    if (hinge <= 0.0) continue;
                    sum += 2.0 * hinge;
                    if (grad) {
                        const Eigen::RowVector3d dir =
                            dist > 0.0 ? Eigen::RowVector3d(dp / dist)
                                       : tiebreak_direction(i, j, k, j2).transpose();
                        const double scale = 2.0 * weight / denom;
                        (*grad)[i].row(j).tail<3>() -= scale * dir;
                        (*grad)[k].row(j2).tail<3>() += scale * dir;
                    }
                }
            }
        }
    }
    return sum / denom;
}

double path_length_loss(std::span<const WaypointMatrix> mats,
                        const std::vector<double>* reference_lengths, BundleGrad* grad,
                        double weight) {
    require_uniform(mats);
    if (reference_lengths && reference_lengths->size() != mats.size()) {
        throw std::invalid_argument("path_length_loss: one reference length per agent required");
    }
    const double denom = static_cast<double>(mats.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const double len = polyline_length(mats[i]);
        if (reference_lengths) {
            const double excess = len - (*reference_lengths)[i];
            if (excess <= 0.0) continue;
            sum += excess;
        } else {
            sum += len;
        }
        if (grad) {
            const auto& m = mats[i];
            for (Eigen::Index j = 1; j < m.rows(); ++j) {
                const Eigen::RowVector3d seg = m.row(j).tail<3>() - m.row(j - 1).tail<3>();
                const double n = seg.norm();
                if (n <= 0.0) continue;
                const Eigen::RowVector3d u = weight / denom * (seg / n);
                (*grad)[i].row(j).tail<3>() += u;
                (*grad)[i].row(j - 1).tail<3>() -= u;
            }
        }
    }
    return sum / denom;
}

double ground_truth_loss(const TrajectoryBundle& pred, const TrajectoryBundle& truth) {
    const auto a = pred.to_matrices();
    const auto b = truth.to_matrices();
    return ground_truth_loss(a, b);
}

double env_collision_loss(const TrajectoryBundle& bundle, const EnvironmentSdf& env,
                          const Thresholds& thresholds) {
    const auto mats = bundle.to_matrices();
    return env_collision_loss(mats, env, thresholds);
}

double inter_conflict_loss(const TrajectoryBundle& bundle, const Thresholds& thresholds) {
    const auto mats = bundle.to_matrices();
    return inter_conflict_loss(mats, thresholds);
}

double path_length_loss(const TrajectoryBundle& bundle,
                        const std::vector<double>* reference_lengths) {
    const auto mats = bundle.to_matrices();
    return path_length_loss(mats, reference_lengths);
}

}  // namespace ntraj
