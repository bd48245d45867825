#include "ntraj/model/ntm.hpp"

#include <stdexcept>

namespace ntraj {

NtmModel::NtmModel(NtmConfig config, NtmParams params)
    : config_(std::move(config)), params_(std::move(params)) {
    config_.validate();
    if (!params_.all_finite()) throw std::invalid_argument("NtmModel: non-finite parameters");
}

NtmModel NtmModel::init(const NtmConfig& config, std::uint64_t seed) {
    return NtmModel(config, NtmParams::init(config, seed));
}

AttentionGroups NtmModel::groups_for(int agents, int layer) const {
    const int rows = config_.horizon + 1;
    AttentionGroups groups;
    if (config_.pattern == AttentionPattern::Full) {
        groups.emplace_back();
        groups.back().reserve(static_cast<std::size_t>(agents) * rows);
        for (int i = 0; i < agents * rows; ++i) groups.back().push_back(i);
        return groups;
    }
    if (layer % 2 == 0) {
        // Temporal: each agent's waypoints attend among themselves.
        groups.resize(agents);
        for (int a = 0; a < agents; ++a) {
            groups[a].reserve(rows);
            for (int j = 0; j < rows; ++j) groups[a].push_back(a * rows + j);
        }
    } else {
        // Cross-agent: same-timestep waypoints attend across agents.
        groups.resize(rows);
        for (int j = 0; j < rows; ++j) {
            groups[j].reserve(agents);
            for (int a = 0; a < agents; ++a) groups[j].push_back(a * rows + j);
        }
    }
    return groups;
}

Eigen::MatrixXd NtmModel::embed(std::span<const WaypointMatrix> proposal) const {
    const Eigen::MatrixXd coords = stack_coordinates(proposal);
    const Eigen::MatrixXd feat = coordinate_features(coords, config_.width);
    return (feat * params_.at("embed.w").value).rowwise() + params_.at("embed.b").value.row(0);
}

namespace {

void validate_proposal(std::span<const WaypointMatrix> proposal, int horizon) {
    if (proposal.empty()) throw std::invalid_argument("NtmModel: empty proposal");
    for (const auto& m : proposal) {
        if (m.rows() != horizon + 1) {
            throw std::invalid_argument("NtmModel: proposal horizon differs from config");
        }
    }
}

}  // namespace

std::vector<WaypointMatrix> NtmModel::forward(std::span<const WaypointMatrix> proposal,
                                              ForwardCache* cache) const {
    validate_proposal(proposal, config_.horizon);
    const int agents = static_cast<int>(proposal.size());
    const int rows = config_.horizon + 1;
    const int threads = config_.training.threads;

    const Eigen::MatrixXd coords = stack_coordinates(proposal);
    Eigen::MatrixXd feat = coordinate_features(coords, config_.width);
    Eigen::MatrixXd x =
        (feat * params_.at("embed.w").value).rowwise() + params_.at("embed.b").value.row(0);

    if (cache) {
        cache->agents = agents;
        cache->rows = rows;
        cache->features = feat;
        cache->x0 = x;
        cache->layers.assign(config_.layers, {});
    }

    for (int l = 0; l < config_.layers; ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        ForwardCache::Layer* lc = cache ? &cache->layers[l] : nullptr;
        if (lc) lc->x_in = x;

        LayerNormCache ln1;
        const Eigen::MatrixXd xn1 = layer_norm_forward(x, params_.at(p + "ln1.g").value,
                                                       params_.at(p + "ln1.b").value,
                                                       lc ? &lc->ln1 : &ln1);

        const AttentionWeights weights{
            &params_.at(p + "attn.wq").value, &params_.at(p + "attn.bq").value,
            &params_.at(p + "attn.wk").value, &params_.at(p + "attn.bk").value,
            &params_.at(p + "attn.wv").value, &params_.at(p + "attn.bv").value,
            &params_.at(p + "attn.wo").value, &params_.at(p + "attn.bo").value};
        const Eigen::MatrixXd h = attention_forward(xn1, weights, config_.heads,
                                                    groups_for(agents, l),
                                                    lc ? &lc->attn : nullptr, threads);
        Eigen::MatrixXd x2 = x + h;
        if (lc) lc->x2 = x2;

        LayerNormCache ln2;
        const Eigen::MatrixXd xn2 = layer_norm_forward(x2, params_.at(p + "ln2.g").value,
                                                       params_.at(p + "ln2.b").value,
                                                       lc ? &lc->ln2 : &ln2);
        FfnCache ffn;
        const Eigen::MatrixXd f = ffn_forward(xn2, params_.at(p + "ffn.w1").value,
                                              params_.at(p + "ffn.b1").value,
                                              params_.at(p + "ffn.w2").value,
                                              params_.at(p + "ffn.b2").value,
                                              lc ? &lc->ffn : &ffn);
        x = x2 + f;
    }

    LayerNormCache final_ln;
    const Eigen::MatrixXd xf = layer_norm_forward(x, params_.at("final_ln.g").value,
                                                  params_.at("final_ln.b").value,
                                                  cache ? &cache->final_ln : &final_ln);
    if (cache) cache->xf = xf;
    const Eigen::MatrixXd deltas =
        (xf * params_.at("head.w").value).rowwise() + params_.at("head.b").value.row(0);

    std::vector<WaypointMatrix> out(proposal.begin(), proposal.end());
    for (int a = 0; a < agents; ++a) {
        out[a] += deltas.middleRows(static_cast<Eigen::Index>(a) * rows, rows);
        // Hard endpoint pinning: queried start/goal rows survive bit-exactly.
        out[a].row(0) = proposal[a].row(0);
        out[a].row(rows - 1) = proposal[a].row(rows - 1);
    }
    return out;
}

void NtmModel::backward(const ForwardCache& cache, std::span<const WaypointMatrix> output_grads,
                        GradBuffer& grads) const {
    const int agents = cache.agents;
    const int rows = cache.rows;
    if (static_cast<int>(output_grads.size()) != agents) {
        throw std::invalid_argument("NtmModel::backward: gradient bundle shape mismatch");
    }

    Eigen::MatrixXd d_delta(static_cast<Eigen::Index>(agents) * rows, 4);
    for (int a = 0; a < agents; ++a) {
        d_delta.middleRows(static_cast<Eigen::Index>(a) * rows, rows) = output_grads[a];
        // Pinned rows never see the head's output.
        d_delta.row(static_cast<Eigen::Index>(a) * rows).setZero();
        d_delta.row(static_cast<Eigen::Index>(a) * rows + rows - 1).setZero();
    }

    const auto gid = [this](const std::string& name) { return params_.index_of(name); };

    grads[gid("head.w")] += cache.xf.transpose() * d_delta;
    grads[gid("head.b")].row(0) += d_delta.colwise().sum();
    const Eigen::MatrixXd dxf = d_delta * params_.at("head.w").value.transpose();

    Eigen::MatrixXd dx = layer_norm_backward(dxf, params_.at("final_ln.g").value, cache.final_ln,
                                             grads[gid("final_ln.g")], grads[gid("final_ln.b")]);

    for (int l = config_.layers - 1; l >= 0; --l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        const auto& lc = cache.layers[l];

        // x3 = x2 + ffn(ln2(x2))
        const Eigen::MatrixXd dxn2 =
            ffn_backward(dx, params_.at(p + "ffn.w1").value, params_.at(p + "ffn.w2").value,
                         lc.ffn, grads[gid(p + "ffn.w1")], grads[gid(p + "ffn.b1")],
                         grads[gid(p + "ffn.w2")], grads[gid(p + "ffn.b2")]);
        Eigen::MatrixXd dx2 =
            dx + layer_norm_backward(dxn2, params_.at(p + "ln2.g").value, lc.ln2,
                                     grads[gid(p + "ln2.g")], grads[gid(p + "ln2.b")]);

        // x2 = x_in + attn(ln1(x_in))
        const AttentionWeights weights{
            &params_.at(p + "attn.wq").value, &params_.at(p + "attn.bq").value,
            &params_.at(p + "attn.wk").value, &params_.at(p + "attn.bk").value,
            &params_.at(p + "attn.wv").value, &params_.at(p + "attn.bv").value,
            &params_.at(p + "attn.wo").value, &params_.at(p + "attn.bo").value};
        const AttentionGrads attn_grads{
            &grads[gid(p + "attn.wq")], &grads[gid(p + "attn.bq")],
            &grads[gid(p + "attn.wk")], &grads[gid(p + "attn.bk")],
            &grads[gid(p + "attn.wv")], &grads[gid(p + "attn.bv")],
            &grads[gid(p + "attn.wo")], &grads[gid(p + "attn.bo")]};
        const Eigen::MatrixXd dxn1 =
            attention_backward(dx2, weights, config_.heads, lc.attn, attn_grads);
        dx = dx2 + layer_norm_backward(dxn1, params_.at(p + "ln1.g").value, lc.ln1,
                                       grads[gid(p + "ln1.g")], grads[gid(p + "ln1.b")]);
    }

    grads[gid("embed.w")] += cache.features.transpose() * dx;
    grads[gid("embed.b")].row(0) += dx.colwise().sum();
}

}  // namespace ntraj
