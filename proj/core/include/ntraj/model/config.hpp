#pragma once

#include <cstdint>
#include <string>

namespace ntraj {

/// `Full` attends across all N*(T+1) tokens at once. `Factored` alternates
/// per-agent temporal attention with per-timestep cross-agent attention,
/// which scales mildly with agent count and supports variable N.
enum class AttentionPattern { Full, Factored };

struct TrainingConfig {
    int batch_size = 16;
    double learning_rate = 1e-3;
    int epochs = 200;
    // Loss weights: ground-truth L1, environment hinge, inter-agent hinge,
    // travel-length hinge (with ground-truth reference lengths).
    double weight_gt = 1.0;
    double weight_env = 5.0;
    double weight_inter = 5.0;
    double weight_length = 0.1;
    double grad_clip = 1.0;  // global norm, 0 disables
    /// Fraction of training samples whose proposal is the ground truth with
    /// noisy interior waypoints instead of a straight line, teaching the
    /// model the trajectory-correction use where arbitrary proposals are
    /// mapped back to valid ones.
    double proposal_noise_fraction = 0.5;
    double proposal_noise_scale = 0.05;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct NtmConfig {
    int width = 128;      // embedding dimension, divisible by 4 and by heads
    int layers = 4;
    int heads = 4;
    int ffn_width = 256;
    int horizon = 24;     // T: trajectories carry T+1 waypoints
    AttentionPattern pattern = AttentionPattern::Full;
    TrainingConfig training;

    int head_dim() const { return width / heads; }
    int frequencies() const { return width / 4; }

    void validate() const;
};

std::string to_json_string(const NtmConfig& config);
NtmConfig ntm_config_from_json_string(const std::string& text);

std::string to_string(AttentionPattern pattern);
AttentionPattern attention_pattern_from_string(const std::string& name);

}  // namespace ntraj
