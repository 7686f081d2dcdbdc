#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "deblur/errors.hpp"

namespace deblur {

enum class KernelKind { Averaging, Hat, Gaussian };

/// Half-width used when a kernel is named without an explicit spread.
inline constexpr double kDefaultHalfWidth = 0.025;

/// Blurring kernel h(s,t) together with its half-width/spread z.
struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    double z = kDefaultHalfWidth;
};

inline std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Averaging: return "averaging";
        case KernelKind::Hat: return "hat";
        case KernelKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

/// Case-insensitive parse of "averaging", "hat" or "gaussian".
inline KernelKind parse_kernel_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "averaging") return KernelKind::Averaging;
    if (lower == "hat") return KernelKind::Hat;
    if (lower == "gaussian") return KernelKind::Gaussian;
    throw InvalidArgument("unknown kernel '" + std::string(name) + "' (expected averaging, hat or gaussian)");
}

/// Midpoint sample locations (k - 1/2)/n, k = 1..n, on [0,1].
struct Grid {
    std::vector<double> points;

    std::size_t size() const noexcept { return points.size(); }
    double operator[](std::size_t k) const noexcept { return points[k]; }
};

inline Grid make_grid(std::size_t n) {
    if (n == 0) throw InvalidArgument("make_grid: n must be at least 1");
    Grid g;
    g.points.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) g.points[k] = (static_cast<double>(k) + 0.5) / dn;
    return g;
}

inline void validate(const KernelSpec& spec) {
    if (!(spec.z > 0.0) || !std::isfinite(spec.z)) {
        throw InvalidArgument("kernel half-width z must be positive and finite, got " + std::to_string(spec.z));
    }
}

/// Kernel density h(s,t). Depends only on |t - s|, so it is symmetric in (s,t).
inline double eval_kernel(const KernelSpec& spec, double s, double t) {
    validate(spec);
    const double z = spec.z;
    const double d = std::abs(t - s);
    switch (spec.kind) {
        case KernelKind::Averaging:
            // closed support: 1/(2z) at |t-s| == z
            return d <= z ? 1.0 / (2.0 * z) : 0.0;
        case KernelKind::Hat:
            return std::max(0.0, 1.0 - d / z) / z;
        case KernelKind::Gaussian: {
            const double c = 1.0 / (std::sqrt(std::numbers::pi) * z);
            return c * std::exp(-(d * d) / (z * z));
        }
    }
    return 0.0;
}

}  // namespace deblur
