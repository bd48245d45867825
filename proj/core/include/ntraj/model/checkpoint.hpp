#pragma once

#include <optional>
#include <string>

#include "ntraj/geometry.hpp"
#include "ntraj/model/ntm.hpp"

namespace ntraj {

struct Checkpoint {
    NtmConfig config;
    NtmParams params;
    Normalization normalization;
    std::string env_hash;

    NtmModel model() const { return NtmModel(config, params); }
};

/// Binary checkpoint: magic + JSON header (format version, config,
/// normalization, environment hash, tensor table) followed by raw little-
/// endian doubles in tensor order. Written atomically (temp file + rename);
/// round-trips bit-exactly.
void save_checkpoint(const std::string& path, const NtmModel& model,
                     const Normalization& normalization, const std::string& env_hash);

/// Throws on bad magic, unsupported format version, truncation, shape
/// mismatch, or (when `expected_env_hash` is given) an environment hash
/// mismatch.
Checkpoint load_checkpoint(const std::string& path,
                           const std::optional<std::string>& expected_env_hash = std::nullopt);

}  // namespace ntraj
