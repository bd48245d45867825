#include "ntraj/env_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ntraj {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json{v.x(), v.y(), v.z()}; }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::runtime_error("env: expected a 3-vector");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

std::string environment_to_json(const EnvironmentSdf& env) {
    json doc;
    doc["bounds"] = {{"min", vec_to_json(env.bounds().min)},
                     {"max", vec_to_json(env.bounds().max)}};
    auto& prims = doc["primitives"];
    prims = json::array();
    for (const auto& prim : env.primitives()) {
        json p;
        switch (prim.kind) {
            case PrimitiveKind::Sphere:
                p = {{"kind", "sphere"}, {"center", vec_to_json(prim.a)}, {"radius", prim.radius}};
                break;
            case PrimitiveKind::Box:
                p = {{"kind", "box"},
                     {"center", vec_to_json(prim.a)},
                     {"half_extents", vec_to_json(prim.b)}};
                break;
            case PrimitiveKind::Capsule:
                p = {{"kind", "capsule"},
                     {"p0", vec_to_json(prim.a)},
                     {"p1", vec_to_json(prim.b)},
                     {"radius", prim.radius}};
                break;
            case PrimitiveKind::Cylinder:
                p = {{"kind", "cylinder"},
                     {"center", vec_to_json(prim.a)},
                     {"radius", prim.radius},
                     {"half_height", prim.half_height}};
                break;
        }
        prims.push_back(std::move(p));
    }
    return doc.dump(2) + "\n";
}

EnvironmentSdf environment_from_json(const std::string& text) {
    const json doc = json::parse(text);
    Aabb bounds;
    bounds.min = vec_from_json(doc.at("bounds").at("min"));
    bounds.max = vec_from_json(doc.at("bounds").at("max"));

    std::vector<SdfPrimitive> prims;
    if (doc.contains("primitives")) {
        for (const auto& p : doc.at("primitives")) {
            const std::string kind = p.at("kind").get<std::string>();
            if (kind == "sphere") {
                prims.push_back(SdfPrimitive::sphere(vec_from_json(p.at("center")),
                                                     p.at("radius").get<double>()));
            } else if (kind == "box") {
                prims.push_back(SdfPrimitive::box(vec_from_json(p.at("center")),
                                                  vec_from_json(p.at("half_extents"))));
            } else if (kind == "capsule") {
                prims.push_back(SdfPrimitive::capsule(vec_from_json(p.at("p0")),
                                                      vec_from_json(p.at("p1")),
                                                      p.at("radius").get<double>()));
            } else if (kind == "cylinder") {
                prims.push_back(SdfPrimitive::cylinder(vec_from_json(p.at("center")),
                                                       p.at("radius").get<double>(),
                                                       p.at("half_height").get<double>()));
            } else {
                throw std::runtime_error("env: unknown primitive kind '" + kind + "'");
            }
        }
    }
    return EnvironmentSdf(bounds, std::move(prims));
}

void save_environment_json(const std::string& path, const EnvironmentSdf& env) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_environment_json: cannot open " + path);
    out << environment_to_json(env);
    if (!out) throw std::runtime_error("save_environment_json: write failed for " + path);
}

EnvironmentSdf load_environment_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_environment_json: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return environment_from_json(buffer.str());
}

}  // namespace ntraj
