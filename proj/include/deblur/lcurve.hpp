#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "deblur/errors.hpp"
#include "deblur/linalg.hpp"
#include "deblur/matrix.hpp"
#include "deblur/regularize.hpp"

namespace deblur {

struct LCurvePoint {
    double lambda;
    double residual_norm;
    double solution_norm;
};

struct LCurve {
    std::vector<LCurvePoint> points;

    std::size_t size() const noexcept { return points.size(); }
    const LCurvePoint& operator[](std::size_t i) const noexcept { return points[i]; }
};

/// count values 10^lo_exp ... 10^hi_exp, geometrically spaced, endpoints inclusive.
inline std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t count) {
    if (count < 2) throw InvalidArgument("logspace: count must be at least 2");
    std::vector<double> out(count);
    const double step = (hi_exp - lo_exp) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double e = (i + 1 == count) ? hi_exp : lo_exp + step * static_cast<double>(i);
        out[i] = std::pow(10.0, e);
    }
    return out;
}

namespace detail {

inline void check_lambda_grid(std::span<const double> lambdas) {
    if (lambdas.empty()) throw InvalidArgument("lcurve_sweep: no lambda values");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) {
            throw InvalidArgument("lcurve_sweep: lambda values must be positive and finite");
        }
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
            throw InvalidArgument("lcurve_sweep: lambda values must be strictly increasing");
        }
    }
}

}  // namespace detail

/// Residual and solution norms over a lambda sweep, measured against b_noise.
/// The SvdFilter route factors A once and reuses it for every lambda.
inline LCurve lcurve_sweep(const DenseMatrix& a, std::span<const double> b_noise, std::span<const double> lambdas,
                           SolveMethod method = SolveMethod::SvdFilter) {
    detail::check_lambda_grid(lambdas);
    LCurve curve;
    curve.points.reserve(lambdas.size());
    if (method == SolveMethod::SvdFilter) {
        const SvdFactors svd = svd_econ(a);
        for (double lam : lambdas) {
            const auto sol = tikhonov_solve(a, svd, b_noise, lam);
            curve.points.push_back({lam, sol.residual_norm, sol.solution_norm});
        }
    } else {
        for (double lam : lambdas) {
            const auto sol = tikhonov_solve(a, b_noise, lam, method);
            curve.points.push_back({lam, sol.residual_norm, sol.solution_norm});
        }
    }
    return curve;
}

/// Signed Menger curvature of three points; positive for a counter-clockwise
/// turn, which is the L-curve corner orientation as lambda increases.
inline double menger_curvature(double x1, double y1, double x2, double y2, double x3, double y3) {
    const double cross = (x2 - x1) * (y3 - y2) - (y2 - y1) * (x3 - x2);
    const double d12 = std::hypot(x2 - x1, y2 - y1);
    const double d23 = std::hypot(x3 - x2, y3 - y2);
    const double d13 = std::hypot(x3 - x1, y3 - y1);
    const double denom = d12 * d23 * d13;
    if (denom == 0.0) return 0.0;
    return 2.0 * cross / denom;
}

/// Heuristic corner: the interior index of maximal Menger curvature in
/// (log10 residual, log10 solution) coordinates. Ties go to the smallest index.
inline std::size_t suggest_corner(const LCurve& curve) {
    if (curve.size() < 3) throw InvalidArgument("suggest_corner: need at least 3 points");
    std::vector<double> x(curve.size());
    std::vector<double> y(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& p = curve[i];
        if (!(p.residual_norm > 0.0) || !(p.solution_norm > 0.0)) {
            throw InvalidArgument("suggest_corner: corner undefined for zero norms (index " + std::to_string(i) + ")");
        }
        x[i] = std::log10(p.residual_norm);
        y[i] = std::log10(p.solution_norm);
    }
    std::size_t best = 1;
    double best_kappa = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double k = menger_curvature(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
        if (k > best_kappa) {
            best_kappa = k;
            best = i;
        }
    }
    return best;
}

}  // namespace deblur
