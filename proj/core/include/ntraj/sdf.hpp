#pragma once

#include <cstdint>
#include <vector>

#include "ntraj/geometry.hpp"
#include "ntraj/occupancy.hpp"

namespace ntraj {

enum class PrimitiveKind { Sphere, Box, Capsule, Cylinder };

/// One analytic signed-distance obstacle. Distances are exact for every
/// kind, so gradients are available in closed form (unit norm wherever the
/// distance field is differentiable).
struct SdfPrimitive {
    PrimitiveKind kind = PrimitiveKind::Sphere;
    Vec3 a = Vec3::Zero();   // sphere/box/cylinder center, capsule segment start
    Vec3 b = Vec3::Zero();   // box half-extents, capsule segment end
    double radius = 0.0;     // sphere/capsule/cylinder
    double half_height = 0.0;  // cylinder (vertical axis)

    static SdfPrimitive sphere(const Vec3& center, double radius);
    static SdfPrimitive box(const Vec3& center, const Vec3& half_extents);
    static SdfPrimitive capsule(const Vec3& p0, const Vec3& p1, double radius);
    static SdfPrimitive cylinder(const Vec3& center, double radius, double half_height);

    double distance(const Vec3& p) const;

    /// Analytic gradient of distance(). At non-differentiable loci (centers,
    /// capsule axis, box diagonal planes) a fixed deterministic unit vector
    /// is returned.
    Vec3 gradient(const Vec3& p) const;

    void validate() const;
};

/// Composable signed-distance world: min-union of primitives inside an
/// axis-aligned bounding box, plus the isotropic normalization that maps the
/// bounds into [-1,1]^3. Immutable after construction; all queries are pure.
class EnvironmentSdf {
  public:
    EnvironmentSdf() { norm_ = Normalization::for_bounds(bounds_); }
    EnvironmentSdf(const Aabb& bounds, std::vector<SdfPrimitive> primitives);

    /// Signed distance in world units: min over primitive distances
    /// (negative inside, zero on a surface, positive in free space). With no
    /// primitives the interior clearance to the bounds stands in for the
    /// infinite free-space distance.
    double signed_distance(const Vec3& p) const;

    /// Gradient of signed_distance(). Ties between primitives resolve to the
    /// lowest primitive index.
    Vec3 gradient(const Vec3& p) const;

    /// Rejection-samples points with signed_distance > margin, uniformly
    /// over the bounds. Deterministic for a fixed seed. Throws when the
    /// retry budget is exhausted (environment too dense).
    std::vector<Vec3> sample_free_points(int count, double margin, std::uint64_t seed) const;

    /// Boolean occupancy at `resolution` cells along the longest axis; a
    /// cell is occupied iff the signed distance at its center is <= inflation.
    OccupancyGrid rasterize(int resolution, double inflation) const;

    // Normalized-coordinate view used by the planning stack. The map is
    // isotropic, so normalized signed distances are true distances.
    double signed_distance_normalized(const Vec3& p_normalized) const;
    Vec3 gradient_normalized(const Vec3& p_normalized) const;

    const Aabb& bounds() const { return bounds_; }
    const std::vector<SdfPrimitive>& primitives() const { return prims_; }
    const Normalization& normalization() const { return norm_; }

  private:
    Aabb bounds_;
    std::vector<SdfPrimitive> prims_;
    Normalization norm_;
};

}  // namespace ntraj
