#pragma once

// Spectral diagnostics over a shared SVD: data coefficients u_j^T b, the
// naive inverse coefficients u_j^T b / sigma_j, and Tikhonov-filtered ones.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "deblur/errors.hpp"
#include "deblur/linalg.hpp"
#include "deblur/matrix.hpp"

namespace deblur {

/// c_j = u_j^T x
inline Vector expansion_coefficients(const SvdFactors& svd, std::span<const double> x) {
    if (x.size() != svd.u.rows()) throw InvalidArgument("expansion_coefficients: length mismatch");
    return multiply_transposed(svd.u, x);
}

/// u_j^T b / sigma_j; throws SingularComponentError on sigma_j == 0.
inline Vector naive_inverse_coefficients(const SvdFactors& svd, std::span<const double> b) {
    Vector c = expansion_coefficients(svd, b);
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (svd.sigma[j] == 0.0) {
            throw SingularComponentError("singular value " + std::to_string(j + 1) + " is zero", j);
        }
        c[j] /= svd.sigma[j];
    }
    return c;
}

/// (u_j^T b) * sigma_j / (sigma_j^2 + lambda^2), lambda > 0.
inline Vector filtered_coefficients(const SvdFactors& svd, std::span<const double> b, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("filtered_coefficients: lambda must be positive and finite");
    }
    Vector c = expansion_coefficients(svd, b);
    const double l2 = lambda * lambda;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double s = svd.sigma[j];
        c[j] *= s / (s * s + l2);
    }
    return c;
}

/// sum_j coeffs[j] * v_j (only the first coeffs.size() right vectors).
inline Vector combine_right_vectors(const SvdFactors& svd, std::span<const double> coeffs) {
    if (coeffs.size() > svd.v.cols()) throw InvalidArgument("combine_right_vectors: too many coefficients");
    const std::size_t n = svd.v.rows();
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto vi = svd.v.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) s += vi[j] * coeffs[j];
        x[i] = s;
    }
    return x;
}

/// sum_j coeffs[j] * u_j
inline Vector combine_left_vectors(const SvdFactors& svd, std::span<const double> coeffs) {
    if (coeffs.size() > svd.u.cols()) throw InvalidArgument("combine_left_vectors: too many coefficients");
    const std::size_t m = svd.u.rows();
    Vector x(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto ui = svd.u.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) s += ui[j] * coeffs[j];
        x[i] = s;
    }
    return x;
}

struct SpectralRecord {
    std::size_t j;  // 1-based
    double sigma;
    double coeff;
    double naive_coeff;     // inf/nan when sigma == 0
    double filtered_coeff;  // nan when no lambda was supplied
};

/// One row per singular triple. Pass lambda <= 0 to skip the filtered column.
inline std::vector<SpectralRecord> spectral_diagnostics(const SvdFactors& svd, std::span<const double> b,
                                                        double lambda) {
    const Vector c = expansion_coefficients(svd, b);
    std::vector<SpectralRecord> out(c.size());
    const double l2 = lambda * lambda;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double s = svd.sigma[j];
        out[j].j = j + 1;
        out[j].sigma = s;
        out[j].coeff = c[j];
        out[j].naive_coeff = c[j] / s;
        out[j].filtered_coeff = lambda > 0.0 ? c[j] * (s / (s * s + l2)) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace deblur
