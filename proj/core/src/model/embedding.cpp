#include "ntraj/model/embedding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ntraj {

Eigen::MatrixXd stack_coordinates(std::span<const WaypointMatrix> bundle) {
    if (bundle.empty()) throw std::invalid_argument("stack_coordinates: empty bundle");
    const Eigen::Index rows = bundle.front().rows();
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(bundle.size()) * rows, 4);
    for (std::size_t a = 0; a < bundle.size(); ++a) {
        if (bundle[a].rows() != rows) {
            throw std::invalid_argument("stack_coordinates: non-uniform horizons");
        }
        coords.middleRows(static_cast<Eigen::Index>(a) * rows, rows) = bundle[a];
    }
    return coords;
}

std::vector<double> embedding_frequencies(int count) {
    if (count < 1) throw std::invalid_argument("embedding_frequencies: count must be >= 1");
    std::vector<double> freq(count);
    for (int k = 0; k < count; ++k) {
        const double octave = count > 1 ? 6.0 * k / (count - 1) : 0.0;
        freq[k] = std::numbers::pi * std::pow(2.0, octave);
    }
    return freq;
}

Eigen::MatrixXd coordinate_features(const Eigen::MatrixXd& coords, int width) {
    if (coords.cols() != 4) throw std::invalid_argument("coordinate_features: expected 4 columns");
    if (width < 4 || width % 4 != 0) {
        throw std::invalid_argument("coordinate_features: width must be a multiple of 4");
    }
    constexpr double kTol = 1e-6;
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const bool time_ok = coords(i, 0) >= -kTol && coords(i, 0) <= 1.0 + kTol;
        const bool space_ok = coords.row(i).tail<3>().minCoeff() >= -1.0 - kTol &&
                              coords.row(i).tail<3>().maxCoeff() <= 1.0 + kTol;
        if (!time_ok || !space_ok) {
            throw std::invalid_argument(
                "coordinate_features: coordinates outside the normalized range");
        }
    }

    const int per_channel = width / 4;
    const auto freq = embedding_frequencies(per_channel);
    Eigen::MatrixXd feat(coords.rows(), 2 * width);
    for (int c = 0; c < 4; ++c) {
        const int base = c * 2 * per_channel;
        for (int k = 0; k < per_channel; ++k) {
            for (Eigen::Index i = 0; i < coords.rows(); ++i) {
                const double phase = freq[k] * coords(i, c);
                feat(i, base + 2 * k) = std::sin(phase);
                feat(i, base + 2 * k + 1) = std::cos(phase);
            }
        }
    }
    return feat;
}

}  // namespace ntraj
