#include "ntraj/model/transformer.hpp"

#include <cmath>
#include <numbers>

#include "ntraj/thread_pool.hpp"

namespace ntraj {
namespace {

constexpr double kLnEps = 1e-5;

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(r) = x.row(idx[r]);
    return out;
}

void scatter_rows(const Eigen::MatrixXd& src, const std::vector<int>& idx, Eigen::MatrixXd& dst) {
    for (std::size_t r = 0; r < idx.size(); ++r) dst.row(idx[r]) = src.row(r);
}

}  // namespace

Eigen::MatrixXd layer_norm_forward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gamma,
                                   const Eigen::MatrixXd& beta, LayerNormCache* cache) {
    const Eigen::Index n = x.cols();
    Eigen::MatrixXd xhat(x.rows(), n);
    Eigen::VectorXd inv_std(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const double mean = x.row(r).mean();
        const double var = (x.row(r).array() - mean).square().sum() / n;
        const double is = 1.0 / std::sqrt(var + kLnEps);
        xhat.row(r) = (x.row(r).array() - mean) * is;
        inv_std(r) = is;
    }
    Eigen::MatrixXd y =
        (xhat.array().rowwise() * gamma.row(0).array()).rowwise() + beta.row(0).array();
    if (cache) {
        cache->xhat = std::move(xhat);
        cache->inv_std = std::move(inv_std);
    }
    return y;
}

Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy, const Eigen::MatrixXd& gamma,
                                    const LayerNormCache& cache, Eigen::MatrixXd& dgamma,
                                    Eigen::MatrixXd& dbeta) {
    const Eigen::Index n = dy.cols();
    dgamma.row(0) += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
    dbeta.row(0) += dy.colwise().sum();

    Eigen::MatrixXd dx(dy.rows(), n);
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
        const Eigen::ArrayXd g = dy.row(r).array() * gamma.row(0).array();
        const Eigen::ArrayXd xh = cache.xhat.row(r).array();
        const double mean_g = g.mean();
        const double mean_gx = (g * xh).mean();
        dx.row(r) = ((g - mean_g - xh * mean_gx) * cache.inv_std(r)).matrix();
    }
    return dx;
}

Eigen::MatrixXd attention_forward(const Eigen::MatrixXd& x, const AttentionWeights& w, int heads,
                                  const AttentionGroups& groups, AttentionCache* cache,
                                  int threads) {
    const Eigen::Index width = x.cols();
    const Eigen::Index dh = width / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    Eigen::MatrixXd out(x.rows(), width);
    if (cache) {
        cache->groups = groups;
        cache->per_group.assign(groups.size(), {});
    }

    const auto run_group = [&](std::size_t gi) {
        const auto& idx = groups[gi];
        AttentionGroupCache local;
        local.x = gather_rows(x, idx);
        local.q = (local.x * (*w.wq)).rowwise() + w.bq->row(0);
        local.k = (local.x * (*w.wk)).rowwise() + w.bk->row(0);
        local.v = (local.x * (*w.wv)).rowwise() + w.bv->row(0);
        const Eigen::Index m = local.x.rows();
        local.o.resize(m, width);
        local.attn.resize(heads);
        for (int h = 0; h < heads; ++h) {
            const auto qh = local.q.middleCols(h * dh, dh);
            const auto kh = local.k.middleCols(h * dh, dh);
            const auto vh = local.v.middleCols(h * dh, dh);
            Eigen::MatrixXd s = scale * (qh * kh.transpose());
            for (Eigen::Index r = 0; r < m; ++r) {
                const double mx = s.row(r).maxCoeff();
                s.row(r) = (s.row(r).array() - mx).exp();
                s.row(r) /= s.row(r).sum();
            }
            local.o.middleCols(h * dh, dh) = s * vh;
            local.attn[h] = std::move(s);
        }
        const Eigen::MatrixXd y = (local.o * (*w.wo)).rowwise() + w.bo->row(0);
        scatter_rows(y, idx, out);
        if (cache) cache->per_group[gi] = std::move(local);
    };

    if (groups.size() > 1) {
        ThreadPool::shared(threads).parallel_for(groups.size(), run_group);
    } else {
        for (std::size_t gi = 0; gi < groups.size(); ++gi) run_group(gi);
    }
    return out;
}

Eigen::MatrixXd attention_backward(const Eigen::MatrixXd& dy, const AttentionWeights& w,
                                   int heads, const AttentionCache& cache,
                                   const AttentionGrads& grads) {
    const Eigen::Index width = dy.cols();
    const Eigen::Index dh = width / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(dy.rows(), width);
    for (std::size_t gi = 0; gi < cache.groups.size(); ++gi) {
        const auto& idx = cache.groups[gi];
        const auto& g = cache.per_group[gi];
        const Eigen::MatrixXd dyg = gather_rows(dy, idx);

        // Output projection.
        *grads.wo += g.o.transpose() * dyg;
        grads.bo->row(0) += dyg.colwise().sum();
        const Eigen::MatrixXd do_ = dyg * w.wo->transpose();

        Eigen::MatrixXd dq(g.q.rows(), width), dk(g.k.rows(), width), dv(g.v.rows(), width);
        for (int h = 0; h < heads; ++h) {
            const auto qh = g.q.middleCols(h * dh, dh);
            const auto kh = g.k.middleCols(h * dh, dh);
            const auto vh = g.v.middleCols(h * dh, dh);
            const auto& a = g.attn[h];
            const auto doh = do_.middleCols(h * dh, dh);

            const Eigen::MatrixXd da = doh * vh.transpose();
            dv.middleCols(h * dh, dh) = a.transpose() * doh;

            // Softmax backward, row-wise.
            Eigen::MatrixXd ds(a.rows(), a.cols());
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                const double dot = a.row(r).dot(da.row(r));
                ds.row(r) = (a.row(r).array() * (da.row(r).array() - dot)).matrix();
            }
            dq.middleCols(h * dh, dh) = scale * (ds * kh);
            dk.middleCols(h * dh, dh) = scale * (ds.transpose() * qh);
        }

        *grads.wq += g.x.transpose() * dq;
        grads.bq->row(0) += dq.colwise().sum();
        *grads.wk += g.x.transpose() * dk;
        grads.bk->row(0) += dk.colwise().sum();
        *grads.wv += g.x.transpose() * dv;
        grads.bv->row(0) += dv.colwise().sum();

        const Eigen::MatrixXd dxg = dq * w.wq->transpose() + dk * w.wk->transpose() +
                                    dv * w.wv->transpose();
        for (std::size_t r = 0; r < idx.size(); ++r) dx.row(idx[r]) += dxg.row(r);
    }
    return dx;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2)) + x * phi;
}

Eigen::MatrixXd ffn_forward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w1,
                            const Eigen::MatrixXd& b1, const Eigen::MatrixXd& w2,
                            const Eigen::MatrixXd& b2, FfnCache* cache) {
    Eigen::MatrixXd pre = (x * w1).rowwise() + b1.row(0);
    Eigen::MatrixXd act = pre.unaryExpr([](double v) { return gelu(v); });
    Eigen::MatrixXd y = (act * w2).rowwise() + b2.row(0);
    if (cache) {
        cache->x = x;
        cache->pre = std::move(pre);
        cache->act = std::move(act);
    }
    return y;
}

Eigen::MatrixXd ffn_backward(const Eigen::MatrixXd& dy, const Eigen::MatrixXd& w1,
                             const Eigen::MatrixXd& w2, const FfnCache& cache,
                             Eigen::MatrixXd& dw1, Eigen::MatrixXd& db1, Eigen::MatrixXd& dw2,
                             Eigen::MatrixXd& db2) {
    dw2 += cache.act.transpose() * dy;
    db2.row(0) += dy.colwise().sum();
    Eigen::MatrixXd dact = dy * w2.transpose();
    Eigen::MatrixXd dpre =
        dact.array() * cache.pre.unaryExpr([](double v) { return gelu_derivative(v); }).array();
    dw1 += cache.x.transpose() * dpre;
    db1.row(0) += dpre.colwise().sum();
    return dpre * w1.transpose();
}

}  // namespace ntraj
