#pragma once

#include <vector>

#include "crgeo/expr.hpp"
#include "crgeo/jet.hpp"
#include "crgeo/linalg.hpp"

namespace crgeo {

// Tensor components as expressions over a chart. Index convention:
//  - a vector field X is VecE with X[k] = X^k,
//  - a one-form eta is VecE with eta[j] = eta_j,
//  - a (1,1) field A is MatE with A[k][j] = A^k_j (upper index first),
//  - a (0,2) field g is MatE with g[i][j] = g_ij.
using VecE = std::vector<Expr>;
using MatE = std::vector<std::vector<Expr>>;

// The same objects frozen at a point as order-2 jets.
using VecJ = std::vector<Jet2>;
using MatJ = std::vector<std::vector<Jet2>>;

inline VecE zero_vec_e(int d) { return VecE(static_cast<std::size_t>(d), Expr::constant(0.0)); }

inline MatE zero_mat_e(int d) {
    return MatE(static_cast<std::size_t>(d), zero_vec_e(d));
}

inline MatE identity_mat_e(int d) {
    MatE m = zero_mat_e(d);
    for (int i = 0; i < d; ++i)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr::constant(1.0);
    return m;
}

// ---- expression-level linear algebra (constant folding keeps trees small) ----

inline VecE apply_e(const MatE& a, const VecE& x) {
    const std::size_t n = a.size();
    VecE y(n, Expr::constant(0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < x.size(); ++j) y[k] = y[k] + a[k][j] * x[j];
    return y;
}

inline MatE matmul(const MatE& a, const MatE& b) {
    const std::size_t n = a.size(), m = b[0].size(), p = b.size();
    MatE c(n, VecE(m, Expr::constant(0.0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t j = 0; j < m; ++j) c[i][j] = c[i][j] + a[i][k] * b[k][j];
    return c;
}

inline MatE transpose(const MatE& a) {
    const std::size_t n = a.size(), m = a[0].size();
    MatE t(m, VecE(n, Expr::constant(0.0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) t[j][i] = a[i][j];
    return t;
}

inline MatE add(const MatE& a, const MatE& b) {
    MatE c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline MatE scale(const Expr& s, const MatE& a) {
    MatE c = a;
    for (auto& row : c)
        for (auto& e : row) e = s * e;
    return c;
}

// ---- freezing at a point -----------------------------------------------------

inline VecJ eval_vec(JetContext& ctx, const VecE& v) {
    VecJ out;
    out.reserve(v.size());
    for (const Expr& e : v) out.push_back(ctx.eval(e));
    return out;
}

inline MatJ eval_mat(JetContext& ctx, const MatE& m) {
    MatJ out;
    out.reserve(m.size());
    for (const VecE& row : m) out.push_back(eval_vec(ctx, row));
    return out;
}

inline VecJ const_vec_jet(int dim, const std::vector<double>& v) {
    VecJ out;
    out.reserve(v.size());
    for (double x : v) out.push_back(Jet2::constant(dim, x));
    return out;
}

// ---- numeric snapshots --------------------------------------------------------

inline std::vector<double> values(const VecJ& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
    return out;
}

inline MatD values(const MatJ& m) {
    MatD out(static_cast<int>(m.size()), static_cast<int>(m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) = m[i][j].value();
    return out;
}

} // namespace crgeo
