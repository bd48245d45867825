#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ntraj/geometry.hpp"

namespace ntraj {

/// Deterministic random source. All variates are derived from raw engine
/// output with fixed arithmetic, so sequences are bit-identical across
/// platforms and standard library versions (std::mt19937_64 output is
/// specified by the standard; std distributions are not).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n) via rejection.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal via Box-Muller (second value cached).
    double normal();

    Vec3 point_in(const Aabb& box) {
        return Vec3(uniform(box.min.x(), box.max.x()),
                    uniform(box.min.y(), box.max.y()),
                    uniform(box.min.z(), box.max.z()));
    }

    Vec3 unit_vector();

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[uniform_int(i)]);
        }
    }

    /// Derives an independent stream seed from a master seed and an index.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream);

  private:
    std::mt19937_64 engine_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace ntraj
