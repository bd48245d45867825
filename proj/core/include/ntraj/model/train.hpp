#pragma once

#include <string>
#include <vector>

#include "ntraj/dataset.hpp"
#include "ntraj/model/ntm.hpp"

namespace ntraj {

struct EpochStats {
    int epoch = 0;
    double gt = 0.0;      // unweighted loss components, averaged over instances
    double env = 0.0;
    double inter = 0.0;
    double length = 0.0;
    double total = 0.0;   // weighted objective
};

struct TrainResult {
    NtmModel model;
    std::vector<EpochStats> log;
    bool diverged = false;
    int completed_epochs = 0;
};

/// Minimizes the combined objective (ground-truth L1 plus environment,
/// inter-agent, and travel-length regularizers on the model output) with
/// Adam over minibatches. Deterministic for a fixed seed: shuffling,
/// augmentation, and gradient reduction all run in fixed index order. On a
/// non-finite loss the last finite epoch's parameters are returned with
/// `diverged` set.
TrainResult train_model(const Dataset& data, const EnvironmentSdf& env,
                        const Thresholds& thresholds, const NtmConfig& config);

/// CSV log: epoch, l_gt, l_sdist, l_inter, l_dist, total.
void write_training_log_csv(const std::string& path, const std::vector<EpochStats>& log);

}  // namespace ntraj
