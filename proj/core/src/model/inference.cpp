#include "ntraj/model/inference.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace ntraj {

Trajectory resample_uniform(const Trajectory& traj, int horizon) {
    if (horizon < 1) throw std::invalid_argument("resample_uniform: horizon must be >= 1");
    const auto& w = traj.waypoints();
    std::vector<double> cum(w.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i) {
        cum[i] = cum[i - 1] + (w[i].p - w[i - 1].p).norm();
    }
    const double total = cum.back();

    std::vector<Waypoint> out(horizon + 1);
    std::size_t seg = 0;
    for (int j = 0; j <= horizon; ++j) {
        const double s = static_cast<double>(j) / horizon;
        out[j].t = s;
        if (total <= 0.0) {
            out[j].p = w.front().p;
            continue;
        }
        const double target = s * total;
        while (seg + 2 < w.size() && cum[seg + 1] < target) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double alpha = seg_len > 0.0 ? std::clamp((target - cum[seg]) / seg_len, 0.0, 1.0)
                                           : 0.0;
        out[j].p = w[seg].p + alpha * (w[seg + 1].p - w[seg].p);
    }
    out.front().p = w.front().p;
    out.back().p = w.back().p;
    return Trajectory(std::move(out));
}

namespace {

TrajectoryBundle run_model(const NtmModel& model, const std::vector<WaypointMatrix>& proposal,
                           const RefineContext* refine) {
    const auto output = model.forward(proposal);
    TrajectoryBundle bundle = TrajectoryBundle::from_matrices(output);
    if (refine && refine->optimizer.max_iterations > 0) {
        if (!refine->env || !refine->thresholds) {
            throw std::invalid_argument("refinement requires an environment and thresholds");
        }
        bundle = optimize(bundle, *refine->env, *refine->thresholds, refine->optimizer).bundle;
    }
    return bundle;
}

}  // namespace

TrajectoryBundle infer(const NtmModel& model, std::span<const std::pair<Vec3, Vec3>> queries,
                       const EnvironmentSdf* env, const RefineContext* refine) {
    if (queries.empty()) throw std::invalid_argument("infer: no queries");
    if (env) {
        for (const auto& [s, g] : queries) {
            if (env->signed_distance_normalized(s) <= 0.0 ||
                env->signed_distance_normalized(g) <= 0.0) {
                std::cerr << "ntraj: warning: query endpoint inside an obstacle; "
                             "producing best-effort output\n";
                break;
            }
        }
    }
    std::vector<WaypointMatrix> proposal;
    proposal.reserve(queries.size());
    for (const auto& [s, g] : queries) {
        proposal.push_back(propose_line(s, g, model.config().horizon).to_matrix());
    }
    return run_model(model, proposal, refine);
}

TrajectoryBundle deconflict(const NtmModel& model, const TrajectoryBundle& input,
                            const RefineContext* refine) {
    const int horizon = model.config().horizon;
    std::vector<WaypointMatrix> proposal;
    proposal.reserve(input.size());
    for (const auto& traj : input.trajectories()) {
        WaypointMatrix m = (traj.horizon() == horizon ? traj : resample_uniform(traj, horizon))
                               .to_matrix();
        // The embedder's domain is the normalized cube; interior waypoints
        // of an off-domain input are clamped, endpoints must be in range.
        for (Eigen::Index j = 1; j + 1 < m.rows(); ++j) {
            for (int c = 1; c < 4; ++c) m(j, c) = std::clamp(m(j, c), -1.0, 1.0);
        }
        proposal.push_back(std::move(m));
    }
    return run_model(model, proposal, refine);
}

}  // namespace ntraj
