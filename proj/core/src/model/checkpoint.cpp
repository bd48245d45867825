#include "ntraj/model/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ntraj {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'N', 'T', 'R', 'A', 'J', 'C', 'P', '1'};
constexpr int kFormatVersion = 1;

}  // namespace

void save_checkpoint(const std::string& path, const NtmModel& model,
                     const Normalization& normalization, const std::string& env_hash) {
    json header;
    header["format_version"] = kFormatVersion;
    header["config"] = json::parse(to_json_string(model.config()));
    header["normalization"] = {
        {"center", {normalization.center.x(), normalization.center.y(), normalization.center.z()}},
        {"scale", normalization.scale}};
    header["env_hash"] = env_hash;
    auto& table = header["tensors"];
    table = json::array();
    for (const auto& t : model.params().tensors()) {
        table.push_back({{"name", t.name}, {"rows", t.value.rows()}, {"cols", t.value.cols()}});
    }
    const std::string header_text = header.dump();

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_checkpoint: cannot open " + tmp);
        out.write(kMagic, sizeof(kMagic));
        const std::uint64_t header_size = header_text.size();
        out.write(reinterpret_cast<const char*>(&header_size), sizeof(header_size));
        out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
        for (const auto& t : model.params().tensors()) {
            out.write(reinterpret_cast<const char*>(t.value.data()),
                      static_cast<std::streamsize>(sizeof(double) * t.value.size()));
        }
        if (!out) throw std::runtime_error("save_checkpoint: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path,
                           const std::optional<std::string>& expected_env_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("load_checkpoint: bad magic, not a checkpoint file");
    }
    std::uint64_t header_size = 0;
    in.read(reinterpret_cast<char*>(&header_size), sizeof(header_size));
    if (!in || header_size == 0 || header_size > (1u << 20)) {
        throw std::runtime_error("load_checkpoint: corrupt header length");
    }
    std::string header_text(header_size, '\0');
    in.read(header_text.data(), static_cast<std::streamsize>(header_size));
    if (!in) throw std::runtime_error("load_checkpoint: truncated header");

    const json header = json::parse(header_text);
    const int version = header.at("format_version").get<int>();
    if (version != kFormatVersion) {
        throw std::runtime_error("load_checkpoint: unsupported format version " +
                                 std::to_string(version));
    }

    Checkpoint ckpt;
    ckpt.config = ntm_config_from_json_string(header.at("config").dump());
    const auto& n = header.at("normalization");
    ckpt.normalization.center = Vec3(n.at("center")[0].get<double>(),
                                     n.at("center")[1].get<double>(),
                                     n.at("center")[2].get<double>());
    ckpt.normalization.scale = n.at("scale").get<double>();
    ckpt.env_hash = header.value("env_hash", "");
    if (expected_env_hash && *expected_env_hash != ckpt.env_hash) {
        throw std::runtime_error("load_checkpoint: environment hash mismatch (checkpoint " +
                                 ckpt.env_hash + ", expected " + *expected_env_hash + ")");
    }

    // Rebuild the parameter table from the header and verify it matches the
    // architecture implied by the config.
    NtmParams reference = NtmParams::init(ckpt.config, 0);
    const auto& table = header.at("tensors");
    if (table.size() != reference.tensors().size()) {
        throw std::runtime_error("load_checkpoint: tensor table size mismatch");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto& t = reference.tensors()[i];
        if (table[i].at("name").get<std::string>() != t.name ||
            table[i].at("rows").get<Eigen::Index>() != t.value.rows() ||
            table[i].at("cols").get<Eigen::Index>() != t.value.cols()) {
            throw std::runtime_error("load_checkpoint: tensor table mismatch at " + t.name);
        }
        in.read(reinterpret_cast<char*>(t.value.data()),
                static_cast<std::streamsize>(sizeof(double) * t.value.size()));
        if (!in) throw std::runtime_error("load_checkpoint: truncated tensor data at " + t.name);
    }
    if (!reference.all_finite()) {
        throw std::runtime_error("load_checkpoint: non-finite parameters");
    }
    ckpt.params = std::move(reference);
    return ckpt;
}

}  // namespace ntraj
