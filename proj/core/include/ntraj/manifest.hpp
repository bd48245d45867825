#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace ntraj {

/// FNV-1a 64-bit over raw bytes; provenance fingerprinting, not security.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& text);

/// Hex digest of a file's bytes. Throws when the file cannot be read.
std::string file_hash_hex(const std::string& path);

std::string hash_to_hex(std::uint64_t hash);

/// Sidecar manifest written next to every artifact: inputs with their
/// hashes, outputs with theirs, the seed, a config echo (JSON text), tool
/// version, and wall time. Only `wall_time_s` varies between identical
/// reruns.
struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_hashes;   // path -> hex hash
    std::map<std::string, std::string> output_hashes;  // path -> hex hash
    std::string config_json;                           // echo of the effective config
    double wall_time_s = 0.0;
};

void write_manifest(const std::string& path, const Manifest& manifest);
Manifest read_manifest(const std::string& path);

}  // namespace ntraj
