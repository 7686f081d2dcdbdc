#pragma once

// Dense direct solvers: partial-pivot elimination, Householder least squares
// and the thin SVD (Golub-Kahan bidiagonalization + implicit-shift QR).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deblur/errors.hpp"
#include "deblur/matrix.hpp"

namespace deblur {

/// PA = LU with row pivoting, stored compactly.
class LuFactorization {
public:
    explicit LuFactorization(const DenseMatrix& a) : lu_(a), perm_(a.rows()) {
        if (!a.square()) throw InvalidArgument("LU factorization requires a square matrix");
        const std::size_t n = a.rows();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double big = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(lu_(i, k)) > big) {
                    big = std::abs(lu_(i, k));
                    p = i;
                }
            }
            if (big == 0.0) {
                throw SingularMatrixError("matrix is singular: zero pivot in column " + std::to_string(k));
            }
            if (p != k) {
                std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
                std::swap(perm_[k], perm_[p]);
            }
            const double pivot = lu_(k, k);
            const auto rk = lu_.row(k);
            for (std::size_t i = k + 1; i < n; ++i) {
                auto ri = lu_.row(i);
                const double m = ri[k] / pivot;
                ri[k] = m;
                if (m == 0.0) continue;
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }

    Vector solve(std::span<const double> b) const {
        const std::size_t n = size();
        if (b.size() != n) throw InvalidArgument("solve: right-hand side length mismatch");
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i) {
            const auto ri = lu_.row(i);
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            const auto ri = lu_.row(i);
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= ri[j] * x[j];
            x[i] = s / ri[i];
        }
        return x;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// No accuracy promise beyond what cond(A) allows.
inline Vector solve_linear(const DenseMatrix& a, std::span<const double> b) {
    if (!a.square()) throw InvalidArgument("solve_linear: matrix must be square");
    if (b.size() != a.rows()) throw InvalidArgument("solve_linear: right-hand side length mismatch");
    return LuFactorization(a).solve(b);
}

inline DenseMatrix invert(const DenseMatrix& a) {
    if (!a.square()) throw InvalidArgument("invert: matrix must be square");
    const LuFactorization lu(a);
    const std::size_t n = a.rows();
    DenseMatrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector col = lu.solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return inv;
}

/// Relative pivot size below which an R diagonal entry counts as zero.
inline constexpr double kRankTolerance = 1e-14;

/// argmin_x ||rhs - M x|| via Householder QR (never forms M^T M).
inline Vector solve_least_squares(const DenseMatrix& m, std::span<const double> rhs) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (rows < cols) throw InvalidArgument("solve_least_squares: need rows >= cols");
    if (rhs.size() != rows) throw InvalidArgument("solve_least_squares: right-hand side length mismatch");
    if (cols == 0) return {};

    // column-major working copy
    std::vector<double> q(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) q[j * rows + i] = m(i, j);
    auto col = [&](std::size_t j) { return q.data() + j * rows; };

    Vector y(rhs.begin(), rhs.end());
    Vector diag(cols);
    const double tol = kRankTolerance * max_abs(m);

    for (std::size_t k = 0; k < cols; ++k) {
        double* ck = col(k);
        double nrm = 0.0;
        for (std::size_t i = k; i < rows; ++i) nrm = std::hypot(nrm, ck[i]);
        if (nrm <= tol) {
            throw RankDeficientError("least-squares matrix is rank deficient at column " + std::to_string(k));
        }
        if (ck[k] < 0.0) nrm = -nrm;
        for (std::size_t i = k; i < rows; ++i) ck[i] /= nrm;
        ck[k] += 1.0;
        // reflector H = I - v v^T / v_k with v = ck[k:]
        for (std::size_t j = k + 1; j < cols; ++j) {
            double* cj = col(j);
            double s = 0.0;
            for (std::size_t i = k; i < rows; ++i) s += ck[i] * cj[i];
            s = -s / ck[k];
            for (std::size_t i = k; i < rows; ++i) cj[i] += s * ck[i];
        }
        double s = 0.0;
        for (std::size_t i = k; i < rows; ++i) s += ck[i] * y[i];
        s = -s / ck[k];
        for (std::size_t i = k; i < rows; ++i) y[i] += s * ck[i];
        diag[k] = -nrm;
    }

    Vector x(cols);
    for (std::size_t k = cols; k-- > 0;) {
        double s = y[k];
        for (std::size_t j = k + 1; j < cols; ++j) s -= col(j)[k] * x[j];
        x[k] = s / diag[k];
    }
    return x;
}

/// Thin SVD A = U diag(sigma) V^T of an m x n matrix, m >= n.
/// sigma is descending; each pair (u_j, v_j) is signed so that the
/// largest-magnitude entry of v_j is positive (lowest index on ties).
struct SvdFactors {
    DenseMatrix u;
    Vector sigma;
    DenseMatrix v;

    std::size_t rank_count() const noexcept { return sigma.size(); }
    Vector left(std::size_t j) const { return u.column(j); }
    Vector right(std::size_t j) const { return v.column(j); }
};

namespace detail {

// Column-major scratch matrix used by the SVD iteration.
struct ColMajor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    ColMajor(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) noexcept { return a[j * rows + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a[j * rows + i]; }
    double* col(std::size_t j) noexcept { return a.data() + j * rows; }

    DenseMatrix to_dense() const {
        DenseMatrix d(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) d(i, j) = (*this)(i, j);
        return d;
    }
};

inline void rotate_columns(ColMajor& m, std::size_t j, std::size_t k, double cs, double sn) {
    double* cj = m.col(j);
    double* ck = m.col(k);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double t = cs * cj[i] + sn * ck[i];
        ck[i] = -sn * cj[i] + cs * ck[i];
        cj[i] = t;
    }
}

}  // namespace detail

inline SvdFactors svd_econ(const DenseMatrix& input) {
    using detail::ColMajor;
    const std::size_t m = input.rows();
    const std::size_t n = input.cols();
    if (m < n) throw InvalidArgument("svd_econ: need rows >= cols");
    for (double x : input.data())
        if (!std::isfinite(x)) throw InvalidArgument("svd_econ: matrix entries must be finite");
    if (n == 0) return {DenseMatrix(m, 0), {}, DenseMatrix(0, 0)};

    ColMajor a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = input(i, j);

    ColMajor u(m, n);
    ColMajor v(n, n);
    std::vector<double> s(n, 0.0);
    std::vector<double> e(n, 0.0);
    std::vector<double> work(m, 0.0);

    // Reduce to bidiagonal form: diagonal in s, superdiagonal in e.
    const std::size_t nct = std::min(m - 1, n);
    const std::size_t nrt = n >= 2 ? std::min(n - 2, m) : 0;
    for (std::size_t k = 0; k < std::max(nct, nrt); ++k) {
        if (k < nct) {
            double* ak = a.col(k);
            s[k] = 0.0;
            for (std::size_t i = k; i < m; ++i) s[k] = std::hypot(s[k], ak[i]);
            if (s[k] != 0.0) {
                if (ak[k] < 0.0) s[k] = -s[k];
                for (std::size_t i = k; i < m; ++i) ak[i] /= s[k];
                ak[k] += 1.0;
            }
            s[k] = -s[k];
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (k < nct && s[k] != 0.0) {
                const double* ak = a.col(k);
                double* aj = a.col(j);
                double t = 0.0;
                for (std::size_t i = k; i < m; ++i) t += ak[i] * aj[i];
                t = -t / ak[k];
                for (std::size_t i = k; i < m; ++i) aj[i] += t * ak[i];
            }
            e[j] = a(k, j);
        }
        if (k < nct) {
            for (std::size_t i = k; i < m; ++i) u(i, k) = a(i, k);
        }
        if (k < nrt) {
            e[k] = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) e[k] = std::hypot(e[k], e[i]);
            if (e[k] != 0.0) {
                if (e[k + 1] < 0.0) e[k] = -e[k];
                for (std::size_t i = k + 1; i < n; ++i) e[i] /= e[k];
                e[k + 1] += 1.0;
            }
            e[k] = -e[k];
            if (k + 1 < m && e[k] != 0.0) {
                std::fill(work.begin() + static_cast<std::ptrdiff_t>(k + 1), work.end(), 0.0);
                for (std::size_t j = k + 1; j < n; ++j) {
                    const double* aj = a.col(j);
                    for (std::size_t i = k + 1; i < m; ++i) work[i] += e[j] * aj[i];
                }
                for (std::size_t j = k + 1; j < n; ++j) {
                    const double t = -e[j] / e[k + 1];
                    double* aj = a.col(j);
                    for (std::size_t i = k + 1; i < m; ++i) aj[i] += t * work[i];
                }
            }
            for (std::size_t i = k + 1; i < n; ++i) v(i, k) = e[i];
        }
    }

    std::size_t p = n;
    if (nct < n) s[nct] = a(nct, nct);
    if (nrt + 1 < p) e[nrt] = a(nrt, p - 1);
    e[p - 1] = 0.0;

    // Accumulate U.
    for (std::size_t j = nct; j < n; ++j) {
        std::fill(u.col(j), u.col(j) + m, 0.0);
        u(j, j) = 1.0;
    }
    for (std::size_t k = nct; k-- > 0;) {
        double* uk = u.col(k);
        if (s[k] != 0.0) {
            for (std::size_t j = k + 1; j < n; ++j) {
                double* uj = u.col(j);
                double t = 0.0;
                for (std::size_t i = k; i < m; ++i) t += uk[i] * uj[i];
                t = -t / uk[k];
                for (std::size_t i = k; i < m; ++i) uj[i] += t * uk[i];
            }
            for (std::size_t i = k; i < m; ++i) uk[i] = -uk[i];
            uk[k] += 1.0;
            for (std::size_t i = 0; i < k; ++i) uk[i] = 0.0;
        } else {
            std::fill(uk, uk + m, 0.0);
            uk[k] = 1.0;
        }
    }

    // Accumulate V.
    for (std::size_t k = n; k-- > 0;) {
        if (k < nrt && e[k] != 0.0) {
            const double* vk = v.col(k);
            for (std::size_t j = k + 1; j < n; ++j) {
                double* vj = v.col(j);
                double t = 0.0;
                for (std::size_t i = k + 1; i < n; ++i) t += vk[i] * vj[i];
                t = -t / vk[k + 1];
                for (std::size_t i = k + 1; i < n; ++i) vj[i] += t * vk[i];
            }
        }
        std::fill(v.col(k), v.col(k) + n, 0.0);
        v(k, k) = 1.0;
    }

    // Implicit-shift QR on the bidiagonal.
    const std::size_t pp = p - 1;
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::ldexp(1.0, -966);
    const std::size_t max_iterations = 100 * n;
    std::size_t iterations = 0;

    while (p > 0) {
        // Find the largest k with a negligible e[k-1] (k = 0 if none).
        std::ptrdiff_t k;
        for (k = static_cast<std::ptrdiff_t>(p) - 2; k >= 0; --k) {
            if (std::abs(e[k]) <= tiny + eps * (std::abs(s[k]) + std::abs(s[k + 1]))) {
                e[k] = 0.0;
                break;
            }
        }
        int kase;
        if (k == static_cast<std::ptrdiff_t>(p) - 2) {
            kase = 4;
        } else {
            std::ptrdiff_t ks;
            for (ks = static_cast<std::ptrdiff_t>(p) - 1; ks > k; --ks) {
                const double t = (ks != static_cast<std::ptrdiff_t>(p) ? std::abs(e[ks]) : 0.0) +
                                 (ks != k + 1 ? std::abs(e[ks - 1]) : 0.0);
                if (std::abs(s[ks]) <= tiny + eps * t) {
                    s[ks] = 0.0;
                    break;
                }
            }
            if (ks == k) {
                kase = 3;
            } else if (ks == static_cast<std::ptrdiff_t>(p) - 1) {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        ++k;
        const auto kk = static_cast<std::size_t>(k);

        switch (kase) {
            case 1: {  // deflate negligible s[p-1]
                double f = e[p - 2];
                e[p - 2] = 0.0;
                for (std::size_t j = p - 1; j-- > kk;) {
                    const double t = std::hypot(s[j], f);
                    const double cs = s[j] / t;
                    const double sn = f / t;
                    s[j] = t;
                    if (j != kk) {
                        f = -sn * e[j - 1];
                        e[j - 1] = cs * e[j - 1];
                    }
                    detail::rotate_columns(v, j, p - 1, cs, sn);
                }
                break;
            }
            case 2: {  // split at negligible s[k-1]
                double f = e[kk - 1];
                e[kk - 1] = 0.0;
                for (std::size_t j = kk; j < p; ++j) {
                    const double t = std::hypot(s[j], f);
                    const double cs = s[j] / t;
                    const double sn = f / t;
                    s[j] = t;
                    f = -sn * e[j];
                    e[j] = cs * e[j];
                    detail::rotate_columns(u, j, kk - 1, cs, sn);
                }
                break;
            }
            case 3: {  // one QR step
                if (++iterations > max_iterations) {
                    throw ConvergenceError("svd_econ: no convergence after " + std::to_string(max_iterations) +
                                           " QR iterations");
                }
                const double scale = std::max({std::abs(s[p - 1]), std::abs(s[p - 2]), std::abs(e[p - 2]),
                                               std::abs(s[kk]), std::abs(e[kk])});
                const double sp = s[p - 1] / scale;
                const double spm1 = s[p - 2] / scale;
                const double epm1 = e[p - 2] / scale;
                const double sk = s[kk] / scale;
                const double ek = e[kk] / scale;
                const double b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
                const double c = (sp * epm1) * (sp * epm1);
                double shift = 0.0;
                if (b != 0.0 || c != 0.0) {
                    shift = std::sqrt(b * b + c);
                    if (b < 0.0) shift = -shift;
                    shift = c / (b + shift);
                }
                double f = (sk + sp) * (sk - sp) + shift;
                double g = sk * ek;
                for (std::size_t j = kk; j + 1 < p; ++j) {
                    double t = std::hypot(f, g);
                    double cs = f / t;
                    double sn = g / t;
                    if (j != kk) e[j - 1] = t;
                    f = cs * s[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * s[j];
                    g = sn * s[j + 1];
                    s[j + 1] = cs * s[j + 1];
                    detail::rotate_columns(v, j, j + 1, cs, sn);
                    t = std::hypot(f, g);
                    cs = f / t;
                    sn = g / t;
                    s[j] = t;
                    f = cs * e[j] + sn * s[j + 1];
                    s[j + 1] = -sn * e[j] + cs * s[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] = cs * e[j + 1];
                    if (j < m - 1) detail::rotate_columns(u, j, j + 1, cs, sn);
                }
                e[p - 2] = f;
                break;
            }
            case 4: {  // s[k] converged
                std::size_t j = kk;
                if (s[j] <= 0.0) {
                    s[j] = s[j] < 0.0 ? -s[j] : 0.0;
                    double* vj = v.col(j);
                    for (std::size_t i = 0; i <= pp; ++i) vj[i] = -vj[i];
                }
                while (j < pp && s[j] < s[j + 1]) {
                    std::swap(s[j], s[j + 1]);
                    std::swap_ranges(v.col(j), v.col(j) + n, v.col(j + 1));
                    std::swap_ranges(u.col(j), u.col(j) + m, u.col(j + 1));
                    ++j;
                }
                --p;
                break;
            }
        }
    }

    // Deterministic signs: largest |v_ij| positive, lowest index on ties.
    for (std::size_t j = 0; j < n; ++j) {
        double* vj = v.col(j);
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(vj[i]) > std::abs(vj[best])) best = i;
        if (vj[best] < 0.0) {
            for (std::size_t i = 0; i < n; ++i) vj[i] = -vj[i];
            double* uj = u.col(j);
            for (std::size_t i = 0; i < m; ++i) uj[i] = -uj[i];
        }
    }

    return {u.to_dense(), std::move(s), v.to_dense()};
}

/// sigma_1 / sigma_n; infinity when sigma_n == 0.
inline double condition_number(const SvdFactors& svd) {
    if (svd.sigma.empty()) return 1.0;
    const double smin = svd.sigma.back();
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return svd.sigma.front() / smin;
}

}  // namespace deblur
