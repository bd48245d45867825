#include "ntraj/model/config.hpp"

#include <stdexcept>

#include <json.hpp>

namespace ntraj {

using nlohmann::json;

std::string to_string(AttentionPattern pattern) {
    return pattern == AttentionPattern::Full ? "full" : "factored";
}

AttentionPattern attention_pattern_from_string(const std::string& name) {
    if (name == "full") return AttentionPattern::Full;
    if (name == "factored") return AttentionPattern::Factored;
    throw std::invalid_argument("unknown attention pattern '" + name + "'");
}

std::string to_json_string(const NtmConfig& c) {
    json t;
    t["batch_size"] = c.training.batch_size;
    t["learning_rate"] = c.training.learning_rate;
    t["epochs"] = c.training.epochs;
    t["weight_gt"] = c.training.weight_gt;
    t["weight_env"] = c.training.weight_env;
    t["weight_inter"] = c.training.weight_inter;
    t["weight_length"] = c.training.weight_length;
    t["grad_clip"] = c.training.grad_clip;
    t["proposal_noise_fraction"] = c.training.proposal_noise_fraction;
    t["proposal_noise_scale"] = c.training.proposal_noise_scale;
    t["seed"] = c.training.seed;
    t["threads"] = c.training.threads;

    json doc;
    doc["width"] = c.width;
    doc["layers"] = c.layers;
    doc["heads"] = c.heads;
    doc["ffn_width"] = c.ffn_width;
    doc["horizon"] = c.horizon;
    doc["pattern"] = to_string(c.pattern);
    doc["training"] = std::move(t);
    return doc.dump();
}

NtmConfig ntm_config_from_json_string(const std::string& text) {
    const json doc = json::parse(text);
    NtmConfig c;
    c.width = doc.value("width", c.width);
    c.layers = doc.value("layers", c.layers);
    c.heads = doc.value("heads", c.heads);
    c.ffn_width = doc.value("ffn_width", c.ffn_width);
    c.horizon = doc.value("horizon", c.horizon);
    if (doc.contains("pattern")) {
        c.pattern = attention_pattern_from_string(doc.at("pattern").get<std::string>());
    }
    if (doc.contains("training")) {
        const auto& t = doc.at("training");
        c.training.batch_size = t.value("batch_size", c.training.batch_size);
        c.training.learning_rate = t.value("learning_rate", c.training.learning_rate);
        c.training.epochs = t.value("epochs", c.training.epochs);
        c.training.weight_gt = t.value("weight_gt", c.training.weight_gt);
        c.training.weight_env = t.value("weight_env", c.training.weight_env);
        c.training.weight_inter = t.value("weight_inter", c.training.weight_inter);
        c.training.weight_length = t.value("weight_length", c.training.weight_length);
        c.training.grad_clip = t.value("grad_clip", c.training.grad_clip);
        c.training.proposal_noise_fraction =
            t.value("proposal_noise_fraction", c.training.proposal_noise_fraction);
        c.training.proposal_noise_scale =
            t.value("proposal_noise_scale", c.training.proposal_noise_scale);
        c.training.seed = t.value("seed", c.training.seed);
        c.training.threads = t.value("threads", c.training.threads);
    }
    c.validate();
    return c;
}

}  // namespace ntraj
