#pragma once

#include <span>
#include <vector>

#include "ntraj/model/embedding.hpp"
#include "ntraj/model/transformer.hpp"
#include "ntraj/trajectory.hpp"

namespace ntraj {

/// Activations retained by a forward pass for backpropagation.
struct ForwardCache {
    int agents = 0;
    int rows = 0;  // T+1
    Eigen::MatrixXd features;
    Eigen::MatrixXd x0;
    struct Layer {
        Eigen::MatrixXd x_in;
        LayerNormCache ln1;
        AttentionCache attn;
        Eigen::MatrixXd x2;
        LayerNormCache ln2;
        FfnCache ffn;
    };
    std::vector<Layer> layers;
    LayerNormCache final_ln;
    Eigen::MatrixXd xf;  // final normalized activations feeding the head
};

/// The trajectory model: 4D coordinate embedding, encoder-only transformer
/// over all waypoint tokens, and a projection head that produces 4D
/// corrections added to the proposal. First and last waypoints of each agent
/// are overwritten with the proposal's endpoints, so queried start/goal
/// positions survive exactly.
class NtmModel {
  public:
    NtmModel(NtmConfig config, NtmParams params);
    static NtmModel init(const NtmConfig& config, std::uint64_t seed);

    const NtmConfig& config() const { return config_; }
    const NtmParams& params() const { return params_; }
    NtmParams& params() { return params_; }

    /// Embedded token sequence (N*(T+1) rows, width columns).
    Eigen::MatrixXd embed(std::span<const WaypointMatrix> proposal) const;

    /// Deterministic function of (params, proposal); output shape equals the
    /// proposal shape. Pass a cache to enable backward().
    std::vector<WaypointMatrix> forward(std::span<const WaypointMatrix> proposal,
                                        ForwardCache* cache = nullptr) const;

    /// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(output).
    /// Gradients at pinned endpoint rows are ignored by construction.
    void backward(const ForwardCache& cache, std::span<const WaypointMatrix> output_grads,
                  GradBuffer& grads) const;

    /// Attention scope for a layer under the configured pattern.
    AttentionGroups groups_for(int agents, int layer) const;

  private:
    NtmConfig config_;
    NtmParams params_;
};

}  // namespace ntraj
