#pragma once

#include <vector>

#include <Eigen/Core>

#include "ntraj/model/params.hpp"

namespace ntraj {

/// Token index groups attention operates on: each group attends within
/// itself only. One whole-range group realizes full attention; per-agent or
/// per-timestep groups realize the factored pattern.
using AttentionGroups = std::vector<std::vector<int>>;

struct LayerNormCache {
    Eigen::MatrixXd xhat;      // normalized rows
    Eigen::VectorXd inv_std;   // one per row
};

Eigen::MatrixXd layer_norm_forward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gamma,
                                   const Eigen::MatrixXd& beta, LayerNormCache* cache);

/// Returns dX; accumulates parameter gradients into dgamma/dbeta (1 x width).
Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy, const Eigen::MatrixXd& gamma,
                                    const LayerNormCache& cache, Eigen::MatrixXd& dgamma,
                                    Eigen::MatrixXd& dbeta);

struct AttentionGroupCache {
    Eigen::MatrixXd x;  // gathered input rows
    Eigen::MatrixXd q, k, v, o;
    std::vector<Eigen::MatrixXd> attn;  // one row-stochastic matrix per head
};

struct AttentionCache {
    AttentionGroups groups;
    std::vector<AttentionGroupCache> per_group;
};

struct AttentionWeights {
    const Eigen::MatrixXd *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
};

struct AttentionGrads {
    Eigen::MatrixXd *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
};

/// Multi-head scaled dot-product attention restricted to the given groups.
/// The group loop parallelizes safely: each group touches disjoint rows.
Eigen::MatrixXd attention_forward(const Eigen::MatrixXd& x, const AttentionWeights& w, int heads,
                                  const AttentionGroups& groups, AttentionCache* cache,
                                  int threads = 0);

/// Returns dX; accumulates into the gradient tensors. Serial over groups so
/// parameter accumulation order is fixed.
Eigen::MatrixXd attention_backward(const Eigen::MatrixXd& dy, const AttentionWeights& w,
                                   int heads, const AttentionCache& cache,
                                   const AttentionGrads& grads);

struct FfnCache {
    Eigen::MatrixXd x;    // input (already normalized)
    Eigen::MatrixXd pre;  // x*w1 + b1
    Eigen::MatrixXd act;  // gelu(pre)
};

Eigen::MatrixXd ffn_forward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w1,
                            const Eigen::MatrixXd& b1, const Eigen::MatrixXd& w2,
                            const Eigen::MatrixXd& b2, FfnCache* cache);

Eigen::MatrixXd ffn_backward(const Eigen::MatrixXd& dy, const Eigen::MatrixXd& w1,
                             const Eigen::MatrixXd& w2, const FfnCache& cache,
                             Eigen::MatrixXd& dw1, Eigen::MatrixXd& db1, Eigen::MatrixXd& dw2,
                             Eigen::MatrixXd& db2);

double gelu(double x);
double gelu_derivative(double x);

}  // namespace ntraj
