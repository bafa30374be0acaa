#pragma once

#include <array>
#include <cmath>

#include "crgeo/errors.hpp"

namespace crgeo {

/// Hard cap on chart dimension (product charts add one slot).
inline constexpr int kMaxDim = 12;

/// Second-order truncated jet of a scalar function at a point: value,
/// gradient and Hessian with respect to the chart coordinates. Arithmetic
/// propagates derivatives exactly (forward mode, order 2), so polynomial
/// and elementary-function fields have machine-accurate derivatives; there
/// is no truncation error anywhere in the calculus built on top.
///
/// The Hessian is stored dense but every rule fills (i,j) and (j,i) with
/// the same floating-point expression, so symmetry is exact, not
/// approximate.
class Jet2 {
public:
    Jet2() = default;

    static Jet2 constant(int dim, double v) {
        Jet2 j;
        j.dim_ = check_dim(dim);
        j.v_ = v;
        return j;
    }

    /// Jet of the coordinate function x^axis evaluated where x^axis = v.
    static Jet2 coordinate(int dim, int axis, double v) {
        Jet2 j = constant(dim, v);
        j.g_[static_cast<std::size_t>(axis)] = 1.0;
        return j;
    }

    int dim() const { return dim_; }
    double value() const { return v_; }
    double d(int i) const { return g_[static_cast<std::size_t>(i)]; }
    double dd(int i, int j) const { return h_[idx(i, j)]; }

    friend Jet2 operator-(const Jet2& a) {
        Jet2 r = a;
        r.v_ = -r.v_;
        for (int i = 0; i < a.dim_; ++i) r.g_[i] = -r.g_[i];
        for (int i = 0; i < a.dim_; ++i)
            for (int j = 0; j < a.dim_; ++j) r.h_[a.idx(i, j)] = -r.h_[a.idx(i, j)];
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r = a;
        r.v_ += b.v_;
        for (int i = 0; i < a.dim_; ++i) r.g_[i] += b.g_[i];
        for (int i = 0; i < a.dim_; ++i)
            for (int j = 0; j < a.dim_; ++j) r.h_[a.idx(i, j)] += b.h_[a.idx(i, j)];
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r = a;
        r.v_ -= b.v_;
        for (int i = 0; i < a.dim_; ++i) r.g_[i] -= b.g_[i];
        for (int i = 0; i < a.dim_; ++i)
            for (int j = 0; j < a.dim_; ++j) r.h_[a.idx(i, j)] -= b.h_[a.idx(i, j)];
        return r;
    }

    // d(ab) = a db + b da, dd(ab) = a ddb + b dda + da x db + db x da
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r = Jet2::constant(a.dim_, a.v_ * b.v_);
        for (int i = 0; i < a.dim_; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
        for (int i = 0; i < a.dim_; ++i)
            for (int j = 0; j < a.dim_; ++j)
                r.h_[r.idx(i, j)] = a.v_ * b.h_[a.idx(i, j)] + b.v_ * a.h_[a.idx(i, j)] +
                                    a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
        return r;
    }

    friend Jet2 operator*(double s, const Jet2& a) { return Jet2::constant(a.dim_, s) * a; }
    friend Jet2 operator*(const Jet2& a, double s) { return s * a; }
    friend Jet2 operator+(const Jet2& a, double s) { return a + Jet2::constant(a.dim_, s); }
    friend Jet2 operator-(const Jet2& a, double s) { return a - Jet2::constant(a.dim_, s); }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        if (b.v_ == 0.0) throw EvalError("division by zero");
        return a * b.reciprocal();
    }

    /// Chain rule for a smooth univariate f applied to this jet.
    Jet2 compose(double f, double fp, double fpp) const {
        Jet2 r = Jet2::constant(dim_, f);
        for (int i = 0; i < dim_; ++i) r.g_[i] = fp * g_[i];
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                r.h_[idx(i, j)] = fp * h_[idx(i, j)] + fpp * g_[i] * g_[j];
        return r;
    }

private:
    Jet2 reciprocal() const {
        const double iv = 1.0 / v_;
        return compose(iv, -iv * iv, 2.0 * iv * iv * iv);
    }

    static int check_dim(int dim) {
        if (dim < 1 || dim > kMaxDim) throw NumericsError("jet dimension out of range");
        return dim;
    }

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(j);
    }

    int dim_ = 0;
    double v_ = 0.0;
    std::array<double, kMaxDim> g_{};
    std::array<double, kMaxDim * kMaxDim> h_{};
};

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value());
    return a.compose(e, e, e);
}

inline Jet2 log(const Jet2& a) {
    if (!(a.value() > 0.0)) throw EvalError("log of non-positive value");
    const double iv = 1.0 / a.value();
    return a.compose(std::log(a.value()), iv, -iv * iv);
}

inline Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(c, -s, -c);
}

inline Jet2 sinh(const Jet2& a) {
    const double s = std::sinh(a.value()), c = std::cosh(a.value());
    return a.compose(s, c, s);
}

inline Jet2 cosh(const Jet2& a) {
    const double s = std::sinh(a.value()), c = std::cosh(a.value());
    return a.compose(c, s, c);
}

inline Jet2 sqrt(const Jet2& a) {
    if (!(a.value() > 0.0)) throw EvalError("sqrt of non-positive value");
    const double r = std::sqrt(a.value());
    return a.compose(r, 0.5 / r, -0.25 / (r * a.value()));
}

/// Exact base^n for integer n (n may be negative; base 0 needs n >= 0).
inline double ipow(double base, long long n) {
    if (n < 0) {
        if (base == 0.0) throw EvalError("zero raised to a negative power");
        return 1.0 / ipow(base, -n);
    }
    double acc = 1.0, b = base;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline Jet2 pow_int(const Jet2& a, long long n) {
    const int dim = a.dim();
    if (n == 0) return Jet2::constant(dim, 1.0);
    if (n == 1) return a;
    const double v = a.value();
    if (v == 0.0) {
        if (n < 0) throw EvalError("zero raised to a negative power");
        // n >= 2: value and gradient vanish; Hessian survives only for n = 2.
        return a.compose(0.0, 0.0, n == 2 ? 2.0 : 0.0);
    }
    const double f = ipow(v, n);
    const double fp = static_cast<double>(n) * ipow(v, n - 1);
    const double fpp = static_cast<double>(n) * static_cast<double>(n - 1) * ipow(v, n - 2);
    return a.compose(f, fp, fpp);
}

} // namespace crgeo
