#include "ntraj/sdf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ntraj/rng.hpp"

namespace ntraj {
namespace {

// Deterministic stand-in where the true gradient is undefined.
const Vec3 kFallbackGradient(1.0, 0.0, 0.0);

void require_finite(const Vec3& p) {
    if (!p.allFinite()) throw std::domain_error("sdf: non-finite query point");
}

Vec3 segment_closest_point(const Vec3& p0, const Vec3& p1, const Vec3& p) {
    const Vec3 d = p1 - p0;
    const double len2 = d.squaredNorm();
    if (len2 <= 0.0) return p0;
    const double s = std::clamp((p - p0).dot(d) / len2, 0.0, 1.0);
    return p0 + s * d;
}

}  // namespace

SdfPrimitive SdfPrimitive::sphere(const Vec3& center, double radius) {
    SdfPrimitive prim;
    prim.kind = PrimitiveKind::Sphere;
    prim.a = center;
    prim.radius = radius;
    prim.validate();
    return prim;
}

SdfPrimitive SdfPrimitive::box(const Vec3& center, const Vec3& half_extents) {
    SdfPrimitive prim;
    prim.kind = PrimitiveKind::Box;
    prim.a = center;
    prim.b = half_extents;
    prim.validate();
    return prim;
}

SdfPrimitive SdfPrimitive::capsule(const Vec3& p0, const Vec3& p1, double radius) {
    SdfPrimitive prim;
    prim.kind = PrimitiveKind::Capsule;
    prim.a = p0;
    prim.b = p1;
    prim.radius = radius;
    prim.validate();
    return prim;
}

SdfPrimitive SdfPrimitive::cylinder(const Vec3& center, double radius, double half_height) {
    SdfPrimitive prim;
    prim.kind = PrimitiveKind::Cylinder;
    prim.a = center;
    prim.radius = radius;
    prim.half_height = half_height;
    prim.validate();
    return prim;
}

void SdfPrimitive::validate() const {
    if (!a.allFinite() || !b.allFinite() || !std::isfinite(radius) || !std::isfinite(half_height)) {
        throw std::invalid_argument("SdfPrimitive: non-finite parameters");
    }
    switch (kind) {
        case PrimitiveKind::Sphere:
            if (radius <= 0.0) throw std::invalid_argument("sphere: radius must be positive");
            break;
        case PrimitiveKind::Box:
            if ((b.array() <= 0.0).any()) {
                throw std::invalid_argument("box: half-extents must be positive");
            }
            break;
        case PrimitiveKind::Capsule:
            if (radius <= 0.0) throw std::invalid_argument("capsule: radius must be positive");
            break;
        case PrimitiveKind::Cylinder:
            if (radius <= 0.0 || half_height <= 0.0) {
                throw std::invalid_argument("cylinder: radius and half-height must be positive");
            }
            break;
    }
}

double SdfPrimitive::distance(const Vec3& p) const {
    switch (kind) {
        case PrimitiveKind::Sphere:
            return (p - a).norm() - radius;
        case PrimitiveKind::Box: {
            const Vec3 q = (p - a).cwiseAbs() - b;
            const double outside = q.cwiseMax(0.0).norm();
            const double inside = std::min(q.maxCoeff(), 0.0);
            return outside + inside;
        }
        case PrimitiveKind::Capsule:
            return (p - segment_closest_point(a, b, p)).norm() - radius;
        case PrimitiveKind::Cylinder: {
            const Vec3 rel = p - a;
            const double dr = std::hypot(rel.x(), rel.y()) - radius;
            const double dz = std::abs(rel.z()) - half_height;
            const double outside = std::hypot(std::max(dr, 0.0), std::max(dz, 0.0));
            const double inside = std::min(std::max(dr, dz), 0.0);
            return outside + inside;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

Vec3 SdfPrimitive::gradient(const Vec3& p) const {
    switch (kind) {
        case PrimitiveKind::Sphere: {
            const Vec3 rel = p - a;
            const double n = rel.norm();
            return n > 0.0 ? Vec3(rel / n) : kFallbackGradient;
        }
        case PrimitiveKind::Box: {
            const Vec3 rel = p - a;
            const Vec3 q = rel.cwiseAbs() - b;
            const Vec3 sign = rel.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
            const Vec3 qpos = q.cwiseMax(0.0);
            const double outside = qpos.norm();
            if (outside > 0.0) {
                return sign.cwiseProduct(qpos / outside);
            }
            // Interior: unit normal of the closest face, lowest axis wins ties.
            int axis = 0;
            for (int i = 1; i < 3; ++i) {
                if (q[i] > q[axis]) axis = i;
            }
            Vec3 g = Vec3::Zero();
            g[axis] = sign[axis];
            return g;
        }
        case PrimitiveKind::Capsule: {
            const Vec3 rel = p - segment_closest_point(a, b, p);
            const double n = rel.norm();
            return n > 0.0 ? Vec3(rel / n) : kFallbackGradient;
        }
        case PrimitiveKind::Cylinder: {
            const Vec3 rel = p - a;
            const double r = std::hypot(rel.x(), rel.y());
            const Vec3 radial = r > 0.0 ? Vec3(rel.x() / r, rel.y() / r, 0.0) : kFallbackGradient;
            const double zsign = rel.z() >= 0.0 ? 1.0 : -1.0;
            const double dr = r - radius;
            const double dz = std::abs(rel.z()) - half_height;
            if (dr > 0.0 && dz > 0.0) {
                // Rim region: combine radial and axial components.
                const Vec3 g = dr * radial + Vec3(0.0, 0.0, dz * zsign);
                return g / g.norm();
            }
            if (dr > 0.0) return radial;
            if (dz > 0.0) return Vec3(0.0, 0.0, zsign);
            // Interior: whichever face is closer, radial wins ties.
            if (dr >= dz) return radial;
            return Vec3(0.0, 0.0, zsign);
        }
    }
    return kFallbackGradient;
}

EnvironmentSdf::EnvironmentSdf(const Aabb& bounds, std::vector<SdfPrimitive> primitives)
    : bounds_(bounds), prims_(std::move(primitives)) {
    bounds_.validate();
    for (const auto& prim : prims_) prim.validate();
    norm_ = Normalization::for_bounds(bounds_);
}

double EnvironmentSdf::signed_distance(const Vec3& p) const {
    require_finite(p);
    if (prims_.empty()) return bounds_.interior_distance(p);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& prim : prims_) {
        best = std::min(best, prim.distance(p));
    }
    return best;
}

Vec3 EnvironmentSdf::gradient(const Vec3& p) const {
    require_finite(p);
    if (prims_.empty()) {
        // Clearance gradient of the bounds box.
        if (bounds_.contains(p)) {
            const Vec3 to_min = p - bounds_.min;
            const Vec3 to_max = bounds_.max - p;
            int axis = 0;
            double best_d = to_min[0];
            double best_sign = 1.0;
            for (int i = 1; i < 3; ++i) {
                if (to_min[i] < best_d) { best_d = to_min[i]; axis = i; }
            }
            for (int i = 0; i < 3; ++i) {
                if (to_max[i] < best_d) { best_d = to_max[i]; axis = i; best_sign = -1.0; }
            }
            Vec3 g = Vec3::Zero();
            g[axis] = best_sign;
            return g;
        }
        Vec3 r = Vec3::Zero();
        Vec3 s = Vec3::Zero();
        for (int i = 0; i < 3; ++i) {
            if (p[i] > bounds_.max[i]) { r[i] = p[i] - bounds_.max[i]; s[i] = 1.0; }
            else if (p[i] < bounds_.min[i]) { r[i] = bounds_.min[i] - p[i]; s[i] = -1.0; }
        }
        const double n = r.norm();
        if (n == 0.0) return kFallbackGradient;
        Vec3 g;
        for (int i = 0; i < 3; ++i) g[i] = -s[i] * r[i] / n;
        return g;
    }
    std::size_t active = 0;
    double best = prims_[0].distance(p);
    for (std::size_t i = 1; i < prims_.size(); ++i) {
        const double d = prims_[i].distance(p);
        if (d < best) {  // strict: ties keep the lowest index
            best = d;
            active = i;
        }
    }
    return prims_[active].gradient(p);
}

std::vector<Vec3> EnvironmentSdf::sample_free_points(int count, double margin,
                                                     std::uint64_t seed) const {
    if (count < 0) throw std::invalid_argument("sample_free_points: negative count");
    if (margin < 0.0) throw std::invalid_argument("sample_free_points: negative margin");
    std::vector<Vec3> points;
    points.reserve(count);
    Rng rng(seed);
    const long long budget = 1000LL * std::max(count, 1);
    long long attempts = 0;
    while (static_cast<int>(points.size()) < count) {
        if (attempts++ >= budget) {
            throw std::runtime_error(
                "sample_free_points: environment too dense, retry budget exhausted");
        }
        const Vec3 p = rng.point_in(bounds_);
        if (signed_distance(p) > margin) points.push_back(p);
    }
    return points;
}

OccupancyGrid EnvironmentSdf::rasterize(int resolution, double inflation) const {
    if (resolution < 2) throw std::invalid_argument("rasterize: resolution must be >= 2");
    OccupancyGrid grid;
    grid.origin = bounds_.min;
    grid.cell_size = bounds_.extent().maxCoeff() / resolution;
    const Vec3 cells = bounds_.extent() / grid.cell_size;
    for (int i = 0; i < 3; ++i) {
        grid.dims[i] = std::max(1, static_cast<int>(std::ceil(cells[i] - 1e-9)));
    }
    grid.occupied.assign(grid.cell_count(), 0);
    GridIndex c;
    for (c.z() = 0; c.z() < grid.dims.z(); ++c.z()) {
        for (c.y() = 0; c.y() < grid.dims.y(); ++c.y()) {
            for (c.x() = 0; c.x() < grid.dims.x(); ++c.x()) {
                if (signed_distance(grid.cell_center(c)) <= inflation) {
                    grid.occupied[grid.flat(c)] = 1;
                }
            }
        }
    }
    return grid;
}

double EnvironmentSdf::signed_distance_normalized(const Vec3& p_normalized) const {
    return norm_.distance_to_normalized(signed_distance(norm_.to_world(p_normalized)));
}

Vec3 EnvironmentSdf::gradient_normalized(const Vec3& p_normalized) const {
    // The normalization is isotropic, so directions are preserved and the
    // gradient stays unit-norm.
    return gradient(norm_.to_world(p_normalized));
}

}  // namespace ntraj
