#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "ntraj/model/config.hpp"

namespace ntraj {

struct Tensor {
    std::string name;
    Eigen::MatrixXd value;
};

/// Learned weights keyed by stable names, in a fixed insertion order that
/// also defines the checkpoint layout.
class NtmParams {
  public:
    static NtmParams init(const NtmConfig& config, std::uint64_t seed);

    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }

    std::vector<Tensor>& tensors() { return tensors_; }
    const std::vector<Tensor>& tensors() const { return tensors_; }

    std::size_t parameter_count() const;
    bool all_finite() const;

    /// Adds a zero tensor; used by init and by checkpoint loading.
    Tensor& add(const std::string& name, Eigen::Index rows, Eigen::Index cols);

  private:
    std::vector<Tensor> tensors_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Gradient (or optimizer moment) buffers aligned with a parameter set's
/// tensor order.
class GradBuffer {
  public:
    explicit GradBuffer(const NtmParams& params);

    Eigen::MatrixXd& operator[](std::size_t i) { return grads_[i]; }
    const Eigen::MatrixXd& operator[](std::size_t i) const { return grads_[i]; }
    std::size_t size() const { return grads_.size(); }

    void set_zero();
    void add(const GradBuffer& other, double scale = 1.0);
    double squared_norm() const;
    void scale(double factor);
    bool all_finite() const;

  private:
    std::vector<Eigen::MatrixXd> grads_;
};

}  // namespace ntraj
