#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "crgeo/errors.hpp"

namespace crgeo {

/// Dense row-major matrix for the small problems this library meets
/// (charts are capped at dimension kMaxDim, so everything here is tiny;
/// the largest system is a d^2 x d singular value problem).
class MatD {
public:
    MatD() = default;
    MatD(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    static MatD identity(int n) {
        MatD m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(j)];
    }
    double operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(j)];
    }

    MatD transposed() const {
        MatD t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend MatD operator*(const MatD& a, const MatD& b) {
        MatD r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend MatD operator+(const MatD& a, const MatD& b) {
        MatD r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
        return r;
    }

    friend MatD operator-(const MatD& a, const MatD& b) {
        MatD r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
        return r;
    }

    friend MatD operator*(double s, const MatD& a) {
        MatD r = a;
        for (double& x : r.a_) x *= s;
        return r;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[static_cast<std::size_t>(i)] += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double x : a_) s += x * x;
        return std::sqrt(s);
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

/// LU factorization with partial pivoting, in place. Returns the pivot
/// permutation sign, or 0 if the matrix is numerically singular.
inline int lu_factor(MatD& a, std::vector<int>& perm) {
    const int n = a.rows();
    perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) return 0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double lik = a(i, k);
            for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
    return sign;
}

inline std::vector<double> lu_solve_factored(const MatD& lu, const std::vector<int>& perm,
                                             const std::vector<double>& b) {
    const int n = lu.rows();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] /= lu(i, i);
    }
    return x;
}

inline std::vector<double> solve(MatD a, std::vector<double> b) {
    std::vector<int> perm;
    if (lu_factor(a, perm) == 0) throw NumericsError("singular linear system");
    return lu_solve_factored(a, perm, b);
}

inline MatD inverse(const MatD& a) {
    const int n = a.rows();
    MatD lu = a;
    std::vector<int> perm;
    if (lu_factor(lu, perm) == 0) throw NumericsError("singular matrix has no inverse");
    MatD inv(n, n);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        std::vector<double> col = lu_solve_factored(lu, perm, e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

inline double determinant(const MatD& a) {
    MatD lu = a;
    std::vector<int> perm;
    const int sign = lu_factor(lu, perm);
    if (sign == 0) return 0.0;
    double d = sign;
    for (int i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
}

/// Least squares min ||Ax - b|| by Householder QR (m >= n, full rank).
inline std::vector<double> least_squares(MatD a, std::vector<double> b) {
    const int m = a.rows(), n = a.cols();
    if (m < n) throw NumericsError("least squares needs rows >= cols");
    for (int k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (int i = k; i < m; ++i) alpha += a(i, k) * a(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) throw NumericsError("rank-deficient least squares");
        if (a(k, k) > 0) alpha = -alpha;
        std::vector<double> v(static_cast<std::size_t>(m), 0.0);
        v[static_cast<std::size_t>(k)] = a(k, k) - alpha;
        for (int i = k + 1; i < m; ++i) v[static_cast<std::size_t>(i)] = a(i, k);
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) vnorm2 += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        if (vnorm2 == 0.0) continue;
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[static_cast<std::size_t>(i)] * a(i, j);
            s *= 2.0 / vnorm2;
            for (int i = k; i < m; ++i) a(i, j) -= s * v[static_cast<std::size_t>(i)];
        }
        double s = 0.0;
        for (int i = k; i < m; ++i) s += v[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        s *= 2.0 / vnorm2;
        for (int i = k; i < m; ++i) b[static_cast<std::size_t>(i)] -= s * v[static_cast<std::size_t>(i)];
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / a(i, i);
    }
    return x;
}

struct EigenSym {
    std::vector<double> values;  // ascending
    MatD vectors;                // columns match values
};

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix.
inline EigenSym eigen_sym(MatD a) {
    const int n = a.rows();
    MatD v = MatD::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }
    EigenSym r;
    r.values.resize(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
    r.vectors = MatD(n, n);
    for (int j = 0; j < n; ++j) {
        r.values[static_cast<std::size_t>(j)] = a(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
        for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[static_cast<std::size_t>(j)]);
    }
    return r;
}

struct Signature {
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

/// Inertia of a symmetric matrix; eigenvalues within tol of 0 count as zero.
inline Signature signature_sym(const MatD& a, double tol = 1e-9) {
    Signature s;
    for (double lam : eigen_sym(a).values) {
        if (lam > tol)
            ++s.positive;
        else if (lam < -tol)
            ++s.negative;
        else
            ++s.zero;
    }
    return s;
}

struct Svd {
    std::vector<double> sigma;  // descending
    MatD u;                     // m x n, columns of unit left vectors (zero cols for zero sigma)
    MatD v;                     // n x n, right singular vectors in columns
};

/// One-sided Jacobi SVD: orthogonalizes the columns of A by right
/// rotations. Accurate for small singular values, fully deterministic.
inline Svd svd(const MatD& a_in) {
    MatD a = a_in;
    const int m = a.rows(), n = a.cols();
    MatD v = MatD::identity(n);
    for (int sweep = 0; sweep < 120; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= 1e-30 + 1e-16 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < m; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        if (!rotated) break;
    }
    std::vector<double> sig(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        sig[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return sig[static_cast<std::size_t>(x)] > sig[static_cast<std::size_t>(y)]; });
    Svd r;
    r.sigma.resize(static_cast<std::size_t>(n));
    r.u = MatD(m, n);
    r.v = MatD(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        const double s = sig[static_cast<std::size_t>(src)];
        r.sigma[static_cast<std::size_t>(j)] = s;
        for (int i = 0; i < n; ++i) r.v(i, j) = v(i, src);
        if (s > 0.0)
            for (int i = 0; i < m; ++i) r.u(i, j) = a(i, src) / s;
    }
    return r;
}

inline int rank(const MatD& a, double tol) {
    int r = 0;
    for (double s : svd(a).sigma)
        if (s > tol) ++r;
    return r;
}

/// Columns of V whose singular values fall below tol: an orthonormal basis
/// of the (numerical) null space of A.
inline MatD null_space(const MatD& a, double tol) {
    Svd s = svd(a);
    int k = 0;
    for (double sig : s.sigma)
        if (sig <= tol) ++k;
    MatD ns(a.cols(), k);
    int col = 0;
    for (std::size_t j = 0; j < s.sigma.size(); ++j)
        if (s.sigma[j] <= tol) {
            for (int i = 0; i < a.cols(); ++i) ns(i, col) = s.v(i, static_cast<int>(j));
            ++col;
        }
    return ns;
}

/// Orthonormal basis of the column space (singular vectors with sigma > tol).
inline MatD column_space(const MatD& a, double tol) {
    Svd s = svd(a);
    int k = 0;
    for (double sig : s.sigma)
        if (sig > tol) ++k;
    MatD cs(a.rows(), k);
    int col = 0;
    for (std::size_t j = 0; j < s.sigma.size(); ++j)
        if (s.sigma[j] > tol) {
            for (int i = 0; i < a.rows(); ++i) cs(i, col) = s.u(i, static_cast<int>(j));
            ++col;
        }
    return cs;
}

/// Greedy modified Gram-Schmidt with column pivoting. Returns the indices
/// of k columns of A forming a well-conditioned spanning set.
inline std::vector<int> pivoted_columns(const MatD& a, int k) {
    const int m = a.rows(), n = a.cols();
    MatD w = a;
    std::vector<int> chosen;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int step = 0; step < k; ++step) {
        int best = -1;
        double bestn = 0.0;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += w(i, j) * w(i, j);
            if (s > bestn) {
                bestn = s;
                best = j;
            }
        }
        if (best < 0 || bestn < 1e-24) throw NumericsError("pivoted column selection ran out of rank");
        used[static_cast<std::size_t>(best)] = true;
        chosen.push_back(best);
        const double inv = 1.0 / std::sqrt(bestn);
        std::vector<double> q(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) q[static_cast<std::size_t>(i)] = w(i, best) * inv;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            double proj = 0.0;
            for (int i = 0; i < m; ++i) proj += q[static_cast<std::size_t>(i)] * w(i, j);
            for (int i = 0; i < m; ++i) w(i, j) -= proj * q[static_cast<std::size_t>(i)];
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

/// Euclidean projection of x onto the column space of an orthonormal basis.
inline std::vector<double> project_onto(const MatD& onb, const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    for (int j = 0; j < onb.cols(); ++j) {
        double c = 0.0;
        for (int i = 0; i < onb.rows(); ++i) c += onb(i, j) * x[static_cast<std::size_t>(i)];
        for (int i = 0; i < onb.rows(); ++i) y[static_cast<std::size_t>(i)] += c * onb(i, j);
    }
    return y;
}

} // namespace crgeo
