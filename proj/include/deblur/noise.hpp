#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>

#include "deblur/blur.hpp"
#include "deblur/errors.hpp"
#include "deblur/matrix.hpp"

namespace deblur {

/// Relative noise level epsilon and the seed of its Gaussian stream.
struct NoiseSpec {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// n independent N(0,1) draws.
///
/// The stream is pinned in-repo so results are reproducible across platforms:
/// std::mt19937_64 (whose output sequence the standard fixes) seeded with the
/// 64-bit seed, 53-bit uniforms, and the Box-Muller transform consuming two
/// uniforms per pair of normals (cos branch first, then sin).
inline Vector standard_normals(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    // (0,1]: keeps log() finite
    auto uniform = [&engine] { return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53; };
    Vector z(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        z[i] = r * std::cos(theta);
        if (i + 1 < n) z[i + 1] = r * std::sin(theta);
    }
    return z;
}

/// e_j = epsilon * ||b|| * z_j with z drawn from standard_normals(n, seed).
inline Vector noise_vector(std::span<const double> b, const NoiseSpec& spec) {
    if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
        throw InvalidArgument("noise level must be a finite nonnegative number, got " + std::to_string(spec.epsilon));
    }
    Vector e = standard_normals(b.size(), spec.seed);
    const double sd = spec.epsilon * vector_norm(b);
    for (double& x : e) x *= sd;
    return e;
}

inline Vector add_noise(std::span<const double> b, const NoiseSpec& spec) {
    if (spec.epsilon == 0.0) return Vector(b.begin(), b.end());
    const Vector e = noise_vector(b, spec);
    Vector out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] + e[i];
    return out;
}

inline Signal add_noise(const Signal& b, const NoiseSpec& spec) {
    return Signal(b.grid(), add_noise(std::span<const double>(b.values()), spec));
}

}  // namespace deblur
