#include "ntraj/model/params.hpp"

#include <cmath>
#include <stdexcept>

#include "ntraj/rng.hpp"

namespace ntraj {

void NtmConfig::validate() const {
    if (width < 4 || width % 4 != 0) {
        throw std::invalid_argument("NtmConfig: width must be a positive multiple of 4");
    }
    if (heads < 1 || width % heads != 0) {
        throw std::invalid_argument("NtmConfig: width must be divisible by heads");
    }
    if (layers < 1 || ffn_width < 1 || horizon < 1) {
        throw std::invalid_argument("NtmConfig: layers, ffn_width, horizon must be >= 1");
    }
    if (training.batch_size < 1 || training.epochs < 0) {
        throw std::invalid_argument("NtmConfig: bad training settings");
    }
    if (!(training.learning_rate > 0.0)) {
        throw std::invalid_argument("NtmConfig: learning rate must be > 0");
    }
}

Tensor& NtmParams::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    if (has(name)) throw std::invalid_argument("NtmParams: duplicate tensor " + name);
    index_[name] = tensors_.size();
    tensors_.push_back({name, Eigen::MatrixXd::Zero(rows, cols)});
    return tensors_.back();
}

Tensor& NtmParams::at(const std::string& name) {
    const auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("NtmParams: no tensor " + name);
    return tensors_[it->second];
}

const Tensor& NtmParams::at(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("NtmParams: no tensor " + name);
    return tensors_[it->second];
}

std::size_t NtmParams::index_of(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("NtmParams: no tensor " + name);
    return it->second;
}

std::size_t NtmParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors_) n += static_cast<std::size_t>(t.value.size());
    return n;
}

bool NtmParams::all_finite() const {
    for (const auto& t : tensors_) {
        if (!t.value.allFinite()) return false;
    }
    return true;
}

NtmParams NtmParams::init(const NtmConfig& config, std::uint64_t seed) {
    config.validate();
    NtmParams params;
    const int w = config.width;

    params.add("embed.w", 2 * w, w);
    params.add("embed.b", 1, w);
    for (int l = 0; l < config.layers; ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        params.add(p + "ln1.g", 1, w);
        params.add(p + "ln1.b", 1, w);
        params.add(p + "attn.wq", w, w);
        params.add(p + "attn.bq", 1, w);
        params.add(p + "attn.wk", w, w);
        params.add(p + "attn.bk", 1, w);
        params.add(p + "attn.wv", w, w);
        params.add(p + "attn.bv", 1, w);
        params.add(p + "attn.wo", w, w);
        params.add(p + "attn.bo", 1, w);
        params.add(p + "ln2.g", 1, w);
        params.add(p + "ln2.b", 1, w);
        params.add(p + "ffn.w1", w, config.ffn_width);
        params.add(p + "ffn.b1", 1, config.ffn_width);
        params.add(p + "ffn.w2", config.ffn_width, w);
        params.add(p + "ffn.b2", 1, w);
    }
    params.add("final_ln.g", 1, w);
    params.add("final_ln.b", 1, w);
    params.add("head.w", w, 4);
    params.add("head.b", 1, 4);

    Rng rng(seed);
    for (auto& t : params.tensors_) {
        const bool is_norm_gain = t.name.ends_with("ln1.g") || t.name.ends_with("ln2.g") ||
                                  t.name.ends_with("final_ln.g");
        const bool is_bias = t.name.ends_with(".b") || t.name.ends_with(".bq") ||
                             t.name.ends_with(".bk") || t.name.ends_with(".bv") ||
                             t.name.ends_with(".bo") || t.name.ends_with(".b1") ||
                             t.name.ends_with(".b2");
        if (is_norm_gain) {
            t.value.setOnes();
            continue;
        }
        if (is_bias) continue;  // zeros
        double limit = std::sqrt(6.0 / static_cast<double>(t.value.rows() + t.value.cols()));
        // The head produces residual corrections on top of the proposal;
        // starting it near zero keeps the untrained model close to identity.
        if (t.name == "head.w") limit *= 0.01;
        for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
            for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
                t.value(r, c) = rng.uniform(-limit, limit);
            }
        }
    }
    return params;
}

GradBuffer::GradBuffer(const NtmParams& params) {
    grads_.reserve(params.tensors().size());
    for (const auto& t : params.tensors()) {
        grads_.push_back(Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols()));
    }
}

void GradBuffer::set_zero() {
    for (auto& g : grads_) g.setZero();
}

void GradBuffer::add(const GradBuffer& other, double scale) {
    for (std::size_t i = 0; i < grads_.size(); ++i) grads_[i] += scale * other.grads_[i];
}

double GradBuffer::squared_norm() const {
    double s = 0.0;
    for (const auto& g : grads_) s += g.squaredNorm();
    return s;
}

void GradBuffer::scale(double factor) {
    for (auto& g : grads_) g *= factor;
}

bool GradBuffer::all_finite() const {
    for (const auto& g : grads_) {
        if (!g.allFinite()) return false;
    }
    return true;
}

}  // namespace ntraj
