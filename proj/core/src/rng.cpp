#include "ntraj/rng.hpp"

#include <cmath>
#include <numbers>

namespace ntraj {

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

Vec3 Rng::unit_vector() {
    // Rejection sampling in the unit ball avoids trig and keeps the
    // distribution exactly uniform on the sphere.
    while (true) {
        const Vec3 v(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
        const double n2 = v.squaredNorm();
        if (n2 > 1e-12 && n2 <= 1.0) return v / std::sqrt(n2);
    }
}

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 finalizer over the combined value.
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace ntraj
