#pragma once

#include <cstdint>
#include <random>

#include "llf/field.hpp"

namespace llf {

/// Deterministic RNG: mt19937_64 with uniforms built from raw bits, so the
/// stream does not depend on library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    void unit_vector(double out[3]) {
        // Rejection-free: z uniform in [-1,1], angle uniform.
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 6.283185307179586);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out[0] = r * std::cos(phi);
        out[1] = r * std::sin(phi);
        out[2] = z;
    }

    /// Random field with i.i.d. uniform [-1,1] entries.
    Vec3Field field(const Grid& g) {
        Vec3Field f(g);
        for (double& x : f.data()) x = uniform(-1.0, 1.0);
        return f;
    }

    /// Smooth random field: a combination of tensor cosine modes with per-axis
    /// index <= band. Satisfies the Neumann condition analytically on
    /// neumann_mirror grids.
    Vec3Field band_limited_field(const Grid& g, int band, double amplitude);

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace llf
