#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "deblur/errors.hpp"
#include "deblur/linalg.hpp"
#include "deblur/matrix.hpp"
#include "deblur/svd_analysis.hpp"

namespace deblur {

/// Algebraically equivalent routes to the Tikhonov minimizer.
enum class SolveMethod {
    AugmentedLS,      ///< least squares on [A; lambda I] f ~ [b; 0]
    NormalEquations,  ///< (A^T A + lambda^2 I) f = A^T b
    SvdFilter,        ///< sum_j (u_j^T b) sigma_j / (sigma_j^2 + lambda^2) v_j
};

inline std::string_view to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::AugmentedLS: return "aug";
        case SolveMethod::NormalEquations: return "normal";
        case SolveMethod::SvdFilter: return "svd";
    }
    return "unknown";
}

inline SolveMethod parse_solve_method(std::string_view name) {
    if (name == "aug" || name == "augmented") return SolveMethod::AugmentedLS;
    if (name == "normal") return SolveMethod::NormalEquations;
    if (name == "svd") return SolveMethod::SvdFilter;
    throw InvalidArgument("unknown method '" + std::string(name) + "' (expected aug, normal or svd)");
}

struct RegularizedSolution {
    double lambda = 0.0;
    Vector f_lambda;
    double residual_norm = 0.0;  // ||b - A f_lambda||
    double solution_norm = 0.0;  // ||f_lambda||
    SolveMethod method = SolveMethod::AugmentedLS;
};

/// Singular values at or below this fraction of sigma_1 are treated as zero
/// by the unregularized SVD route.
inline constexpr double kSingularCutoff = 1e-14;

namespace detail {

inline void check_problem(const DenseMatrix& a, std::span<const double> b, std::span<const double> f,
                          double lambda) {
    if (b.size() != a.rows()) throw InvalidArgument("data vector length does not match operator rows");
    if (f.size() != a.cols()) throw InvalidArgument("solution length does not match operator columns");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be a finite nonnegative number");
    }
}

inline void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be a finite nonnegative number, got " + std::to_string(lambda));
    }
}

inline RegularizedSolution finish(const DenseMatrix& a, std::span<const double> b, double lambda, Vector f,
                                  SolveMethod method) {
    RegularizedSolution sol;
    sol.lambda = lambda;
    sol.residual_norm = vector_norm(subtract(b, multiply(a, f)));
    sol.solution_norm = vector_norm(f);
    sol.f_lambda = std::move(f);
    sol.method = method;
    return sol;
}

}  // namespace detail

/// phi(f) = ||b - A f||^2 + lambda^2 ||f||^2
inline double objective_phi(const DenseMatrix& a, std::span<const double> b, std::span<const double> f,
                            double lambda) {
    detail::check_problem(a, b, f, lambda);
    const Vector r = subtract(b, multiply(a, f));
    return dot(r, r) + lambda * lambda * dot(f, f);
}

/// grad phi(f) = 2 (A^T A f + lambda^2 f - A^T b)
inline Vector gradient_phi(const DenseMatrix& a, std::span<const double> b, std::span<const double> f,
                           double lambda) {
    detail::check_problem(a, b, f, lambda);
    // A^T (A f - b) avoids forming A^T A
    const Vector resid = subtract(multiply(a, f), b);
    Vector g = multiply_transposed(a, resid);
    const double l2 = lambda * lambda;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * (g[i] + l2 * f[i]);
    return g;
}

/// Tikhonov solve through a precomputed SVD of A.
inline RegularizedSolution tikhonov_solve(const DenseMatrix& a, const SvdFactors& svd, std::span<const double> b,
                                          double lambda) {
    detail::check_lambda(lambda);
    if (b.size() != a.rows()) throw InvalidArgument("tikhonov_solve: data length mismatch");
    Vector coeffs;
    if (lambda > 0.0) {
        coeffs = filtered_coefficients(svd, b, lambda);
    } else {
        const double cutoff = kSingularCutoff * (svd.sigma.empty() ? 0.0 : svd.sigma.front());
        for (std::size_t j = 0; j < svd.sigma.size(); ++j) {
            if (svd.sigma[j] <= cutoff) {
                throw SingularComponentError("lambda = 0 with negligible singular value sigma_" +
                                                 std::to_string(j + 1),
                                             j);
            }
        }
        coeffs = naive_inverse_coefficients(svd, b);
    }
    return detail::finish(a, b, lambda, combine_right_vectors(svd, coeffs), SolveMethod::SvdFilter);
}

/// Minimizer of ||b - A f||^2 + lambda^2 ||f||^2 by the chosen route.
inline RegularizedSolution tikhonov_solve(const DenseMatrix& a, std::span<const double> b, double lambda,
                                          SolveMethod method = SolveMethod::AugmentedLS) {
    detail::check_lambda(lambda);
    if (!a.square()) throw InvalidArgument("tikhonov_solve: operator must be square");
    if (b.size() != a.rows()) throw InvalidArgument("tikhonov_solve: data length mismatch");
    const std::size_t n = a.cols();

    switch (method) {
        case SolveMethod::AugmentedLS: {
            DenseMatrix stacked(2 * n, n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto src = a.row(i);
                std::copy(src.begin(), src.end(), stacked.row(i).begin());
                stacked(n + i, i) = lambda;
            }
            Vector rhs(2 * n, 0.0);
            std::copy(b.begin(), b.end(), rhs.begin());
            return detail::finish(a, b, lambda, solve_least_squares(stacked, rhs), method);
        }
        case SolveMethod::NormalEquations: {
            const DenseMatrix at = transpose(a);
            DenseMatrix gram = multiply(at, a);
            for (std::size_t i = 0; i < n; ++i) gram(i, i) += lambda * lambda;
            return detail::finish(a, b, lambda, solve_linear(gram, multiply(at, b)), method);
        }
        case SolveMethod::SvdFilter:
            return tikhonov_solve(a, svd_econ(a), b, lambda);
    }
    throw InvalidArgument("tikhonov_solve: unknown method");
}

/// f_k = sum_{j<=k} (u_j^T b / sigma_j) v_j
inline Vector truncated_svd_solve(const SvdFactors& svd, std::span<const double> b, std::size_t k) {
    if (k < 1 || k > svd.sigma.size()) {
        throw InvalidArgument("truncation index k=" + std::to_string(k) + " outside 1.." +
                              std::to_string(svd.sigma.size()));
    }
    const Vector c = expansion_coefficients(svd, b);
    Vector coeffs(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (svd.sigma[j] == 0.0) {
            throw SingularComponentError("zero singular value sigma_" + std::to_string(j + 1) + " within truncation",
                                         j);
        }
        coeffs[j] = c[j] / svd.sigma[j];
    }
    return combine_right_vectors(svd, coeffs);
}

}  // namespace deblur
