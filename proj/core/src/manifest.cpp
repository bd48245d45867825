#include "ntraj/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ntraj {

using nlohmann::json;

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& text) { return fnv1a64(text.data(), text.size()); }

std::string hash_to_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_hash_hex: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return hash_to_hex(fnv1a64(buffer.str()));
}

void write_manifest(const std::string& path, const Manifest& manifest) {
    json doc;
    doc["command"] = manifest.command;
    doc["seed"] = manifest.seed;
    doc["inputs"] = manifest.input_hashes;
    doc["outputs"] = manifest.output_hashes;
    doc["config"] = manifest.config_json.empty() ? json(nullptr) : json::parse(manifest.config_json);
    doc["version"] = "ntraj 0.1.0";
    doc["wall_time_s"] = manifest.wall_time_s;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
    out << doc.dump(2) << "\n";
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_manifest: cannot open " + path);
    json doc;
    in >> doc;
    Manifest m;
    m.command = doc.value("command", "");
    m.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("inputs")) {
        m.input_hashes = doc.at("inputs").get<std::map<std::string, std::string>>();
    }
    if (doc.contains("outputs")) {
        m.output_hashes = doc.at("outputs").get<std::map<std::string, std::string>>();
    }
    if (doc.contains("config") && !doc.at("config").is_null()) {
        m.config_json = doc.at("config").dump();
    }
    m.wall_time_s = doc.value("wall_time_s", 0.0);
    return m;
}

}  // namespace ntraj
