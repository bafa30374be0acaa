#pragma once

#include <cmath>
#include <vector>

#include "crgeo/jet.hpp"
#include "crgeo/linalg.hpp"
#include "crgeo/tensor.hpp"

namespace crgeo {

// Conventions used throughout (chosen once, verified by the test suite):
//  - exterior derivative carries the 1/(p+1) normalization:
//      (d eta)(X,Y)   = 1/2 ( X.eta(Y) - Y.eta(X) - eta([X,Y]) )
//      (d w)(X,Y,Z)   = 1/3 ( sum_cyc X.w(Y,Z) - sum_cyc w([X,Y],Z) )
//  - wedge products are averaged over permutations:
//      (a ^ w)(X,Y,Z) = 1/3 ( a(X)w(Y,Z) + a(Y)w(Z,X) + a(Z)w(X,Y) )
//  - curvature: R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z
//  - Christoffel direction sits in the FIRST lower slot: nab_{d_i} d_j = G^k_ij d_k.

using T3 = std::vector<double>;  // rank-3 numeric tensor at a point
using T4 = std::vector<double>;  // rank-4 numeric tensor at a point

inline std::size_t idx3(int d, int a, int b, int c) {
    return (static_cast<std::size_t>(a) * static_cast<std::size_t>(d) +
            static_cast<std::size_t>(b)) * static_cast<std::size_t>(d) +
           static_cast<std::size_t>(c);
}

inline std::size_t idx4(int d, int a, int b, int c, int e) {
    return ((static_cast<std::size_t>(a) * static_cast<std::size_t>(d) +
             static_cast<std::size_t>(b)) * static_cast<std::size_t>(d) +
            static_cast<std::size_t>(c)) * static_cast<std::size_t>(d) +
           static_cast<std::size_t>(e);
}

inline double max_abs_t(const std::vector<double>& t) {
    double m = 0.0;
    for (double x : t) m = std::max(m, std::abs(x));
    return m;
}

// ---- pointwise multilinear helpers -------------------------------------------

inline double pairing(const std::vector<double>& form, const std::vector<double>& vec) {
    return dot(form, vec);
}

inline double form2_apply(const MatD& w, const std::vector<double>& x,
                          const std::vector<double>& y) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            s += w(i, j) * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    return s;
}

inline std::vector<double> mat_apply(const MatD& a, const std::vector<double>& x) {
    return a.apply(x);
}

inline double t3_apply(int d, const T3& t, const std::vector<double>& x,
                       const std::vector<double>& y, const std::vector<double>& z) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                s += t[idx3(d, a, b, c)] * x[static_cast<std::size_t>(a)] *
                     y[static_cast<std::size_t>(b)] * z[static_cast<std::size_t>(c)];
    return s;
}

/// out^k = t[k,i,j] x^i y^j for a rank-3 tensor in idx3(k,i,j) layout.
inline std::vector<double> t3_contract23(int d, const T3& t, const std::vector<double>& x,
                                         const std::vector<double>& y) {
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                s += t[idx3(d, k, i, j)] * x[static_cast<std::size_t>(i)] *
                     y[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

// ---- derivatives of scalars built from jets ------------------------------------

/// X(f) for a frozen scalar f and a pointwise vector value X.
inline double deriv_along(const std::vector<double>& x, const Jet2& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * f.d(static_cast<int>(i));
    return s;
}

/// g(X,Y) as a jet-valued scalar (value + first derivatives), given jets of all.
inline Jet2 metric_pair_jet(const MatJ& g, const VecJ& x, const VecJ& y) {
    const int dim = g[0][0].dim();
    Jet2 s = Jet2::constant(dim, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) s = s + g[i][j] * x[i] * y[j];
    return s;
}

/// eta(X) as a jet-valued scalar.
inline Jet2 pairing_jet(const VecJ& eta, const VecJ& x) {
    const int dim = eta[0].dim();
    Jet2 s = Jet2::constant(dim, 0.0);
    for (std::size_t j = 0; j < eta.size(); ++j) s = s + eta[j] * x[j];
    return s;
}

// ---- Lie bracket ---------------------------------------------------------------

/// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k, values only.
inline std::vector<double> bracket(const VecJ& x, const VecJ& y) {
    const int d = static_cast<int>(x.size());
    std::vector<double> b(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            b[static_cast<std::size_t>(k)] +=
                x[static_cast<std::size_t>(i)].value() * y[static_cast<std::size_t>(k)].d(i) -
                y[static_cast<std::size_t>(i)].value() * x[static_cast<std::size_t>(k)].d(i);
    return b;
}

/// A vector value together with its first derivatives: jac(k,i) = d_i v^k.
struct VecJet1 {
    std::vector<double> v;
    MatD jac;
};

/// [X,Y] with one derivative level retained (consumes the order-2 jets).
inline VecJet1 bracket_jet(const VecJ& x, const VecJ& y) {
    const int d = static_cast<int>(x.size());
    VecJet1 b;
    b.v = bracket(x, y);
    b.jac = MatD(d, d);
    for (int k = 0; k < d; ++k)
        for (int a = 0; a < d; ++a) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) {
                s += x[static_cast<std::size_t>(i)].d(a) * y[static_cast<std::size_t>(k)].d(i) +
                     x[static_cast<std::size_t>(i)].value() * y[static_cast<std::size_t>(k)].dd(a, i) -
                     y[static_cast<std::size_t>(i)].d(a) * x[static_cast<std::size_t>(k)].d(i) -
                     y[static_cast<std::size_t>(i)].value() * x[static_cast<std::size_t>(k)].dd(a, i);
            }
            b.jac(k, a) = s;
        }
    return b;
}

/// [B,Y] values where B carries only one derivative level.
inline std::vector<double> bracket(const VecJet1& b, const VecJ& y) {
    const int d = static_cast<int>(y.size());
    std::vector<double> r(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            r[static_cast<std::size_t>(k)] +=
                b.v[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(k)].d(i) -
                y[static_cast<std::size_t>(i)].value() * b.jac(k, i);
    return r;
}

// ---- exterior derivative --------------------------------------------------------

/// (d eta)_ij = 1/2 (d_i eta_j - d_j eta_i).
inline MatD d_oneform(const VecJ& eta) {
    const int d = static_cast<int>(eta.size());
    MatD w(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            w(i, j) = 0.5 * (eta[static_cast<std::size_t>(j)].d(i) -
                             eta[static_cast<std::size_t>(i)].d(j));
    return w;
}

/// A 2-form frozen at a point with its first derivatives:
/// val(i,j) = w_ij, grad[k](i,j) = d_k w_ij.
struct Form2Jet {
    MatD val;
    std::vector<MatD> grad;
};

inline Form2Jet d_oneform_jet(const VecJ& eta) {
    const int d = static_cast<int>(eta.size());
    Form2Jet f;
    f.val = d_oneform(eta);
    f.grad.assign(static_cast<std::size_t>(d), MatD(d, d));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                f.grad[static_cast<std::size_t>(k)](i, j) =
                    0.5 * (eta[static_cast<std::size_t>(j)].dd(k, i) -
                           eta[static_cast<std::size_t>(i)].dd(k, j));
    return f;
}

/// The fundamental 2-form of a pair (g, A): w_ij = g_im A^m_j, with first
/// derivatives assembled by the product rule from the jets.
inline Form2Jet fundamental_form_jet(const MatJ& g, const MatJ& a) {
    const int d = static_cast<int>(g.size());
    Form2Jet f;
    f.val = MatD(d, d);
    f.grad.assign(static_cast<std::size_t>(d), MatD(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            for (int m = 0; m < d; ++m)
                v += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)].value() *
                     a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].value();
            f.val(i, j) = v;
            for (int k = 0; k < d; ++k) {
                double s = 0.0;
                for (int m = 0; m < d; ++m)
                    s += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)].d(k) *
                             a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].value() +
                         g[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)].value() *
                             a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].d(k);
                f.grad[static_cast<std::size_t>(k)](i, j) = s;
            }
        }
    return f;
}

/// (d w)_abc = 1/3 (d_a w_bc + d_b w_ca + d_c w_ab), full 3-index layout.
inline T3 d_twoform(const Form2Jet& w) {
    const int d = w.val.rows();
    T3 t(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
         0.0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                t[idx3(d, a, b, c)] =
                    (w.grad[static_cast<std::size_t>(a)](b, c) +
                     w.grad[static_cast<std::size_t>(b)](c, a) +
                     w.grad[static_cast<std::size_t>(c)](a, b)) / 3.0;
    return t;
}

/// (alpha ^ w)_abc for a 1-form value alpha and 2-form value w.
inline T3 wedge_1_2(const std::vector<double>& alpha, const MatD& w) {
    const int d = w.rows();
    T3 t(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
         0.0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                t[idx3(d, a, b, c)] = (alpha[static_cast<std::size_t>(a)] * w(b, c) +
                                       alpha[static_cast<std::size_t>(b)] * w(c, a) +
                                       alpha[static_cast<std::size_t>(c)] * w(a, b)) / 3.0;
    return t;
}

/// Field-argument coboundary of a one-form (cross-validates the coordinate path).
inline double d_oneform_fields(const VecJ& eta, const VecJ& x, const VecJ& y) {
    const Jet2 ey = pairing_jet(eta, y);
    const Jet2 ex = pairing_jet(eta, x);
    const std::vector<double> xv = values(x), yv = values(y);
    const std::vector<double> br = bracket(x, y);
    return 0.5 * (deriv_along(xv, ey) - deriv_along(yv, ex) - pairing(values(eta), br));
}

/// Field-argument coboundary of a 2-form.
inline double d_twoform_fields(const Form2Jet& w, const VecJ& x, const VecJ& y, const VecJ& z) {
    const int d = w.val.rows();
    const std::vector<double> xv = values(x), yv = values(y), zv = values(z);
    auto w_pair_jet = [&](const VecJ& u, const VecJ& v) {
        const int dim = u[0].dim();
        Jet2 s = Jet2::constant(dim, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Jet2 wij = Jet2::constant(dim, w.val(i, j));
                // rebuild the scalar w_ij as a first-order jet
                // (value + gradient suffice: we only take one derivative)
                for (int k = 0; k < dim; ++k)
                    wij = wij + (Jet2::coordinate(dim, k, 0.0) *
                                 Jet2::constant(dim, w.grad[static_cast<std::size_t>(k)](i, j)));
                s = s + wij * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
            }
        return s;
    };
    const double t1 = deriv_along(xv, w_pair_jet(y, z)) + deriv_along(yv, w_pair_jet(z, x)) +
                      deriv_along(zv, w_pair_jet(x, y));
    const std::vector<double> bxy = bracket(x, y), byz = bracket(y, z), bzx = bracket(z, x);
    auto wv = [&](const std::vector<double>& u, const std::vector<double>& v) {
        return form2_apply(w.val, u, v);
    };
    const double t2 = wv(bxy, zv) + wv(byz, xv) + wv(bzx, yv);
    return (t1 - t2) / 3.0;
}

// ---- Lie derivatives -------------------------------------------------------------

/// (L_X g)_ij = X^m d_m g_ij + d_i X^m g_mj + d_j X^m g_im.
inline MatD lie_metric(const VecJ& x, const MatJ& g) {
    const int d = static_cast<int>(g.size());
    MatD out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int m = 0; m < d; ++m) {
                s += x[static_cast<std::size_t>(m)].value() *
                         g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].d(m) +
                     x[static_cast<std::size_t>(m)].d(i) *
                         g[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].value() +
                     x[static_cast<std::size_t>(m)].d(j) *
                         g[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)].value();
            }
            out(i, j) = s;
        }
    return out;
}

/// (L_X A)^k_j = X^m d_m A^k_j - d_m X^k A^m_j + d_j X^m A^k_m.
inline MatD lie_affinor(const VecJ& x, const MatJ& a) {
    const int d = static_cast<int>(a.size());
    MatD out(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int m = 0; m < d; ++m) {
                s += x[static_cast<std::size_t>(m)].value() *
                         a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].d(m) -
                     x[static_cast<std::size_t>(k)].d(m) *
                         a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].value() +
                     x[static_cast<std::size_t>(m)].d(j) *
                         a[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)].value();
            }
            out(k, j) = s;
        }
    return out;
}

/// (L_X eta)_j = X^m d_m eta_j + d_j X^m eta_m.
inline std::vector<double> lie_oneform(const VecJ& x, const VecJ& eta) {
    const int d = static_cast<int>(eta.size());
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
            s += x[static_cast<std::size_t>(m)].value() * eta[static_cast<std::size_t>(j)].d(m) +
                 x[static_cast<std::size_t>(m)].d(j) * eta[static_cast<std::size_t>(m)].value();
        out[static_cast<std::size_t>(j)] = s;
    }
    return out;
}

/// (L_X w)_ij for a frozen 2-form with first derivatives.
inline MatD lie_twoform(const VecJ& x, const Form2Jet& w) {
    const int d = w.val.rows();
    MatD out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int m = 0; m < d; ++m) {
                s += x[static_cast<std::size_t>(m)].value() *
                         w.grad[static_cast<std::size_t>(m)](i, j) +
                     x[static_cast<std::size_t>(m)].d(i) * w.val(m, j) +
                     x[static_cast<std::size_t>(m)].d(j) * w.val(i, m);
            }
            out(i, j) = s;
        }
    return out;
}

// ---- Levi-Civita connection and curvature ------------------------------------------

struct Connection {
    int d = 0;
    MatD g, g_inv;
    T3 gamma;        // G^l_{jk} at idx3(d, l, j, k); j is the direction slot
    T4 dgamma;       // d_i G^l_{jk} at idx4(d, i, l, j, k)
    bool has_dgamma = false;
};

inline Connection levi_civita(const MatJ& g, bool with_derivs = false) {
    const int d = static_cast<int>(g.size());
    Connection c;
    c.d = d;
    c.g = values(g);
    c.g_inv = inverse(c.g);
    c.gamma.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                       static_cast<std::size_t>(d), 0.0);
    for (int l = 0; l < d; ++l)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double s = 0.0;
                for (int m = 0; m < d; ++m)
                    s += c.g_inv(l, m) *
                         (g[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)].d(j) +
                          g[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].d(k) -
                          g[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].d(m));
                c.gamma[idx3(d, l, j, k)] = 0.5 * s;
            }
    if (!with_derivs) return c;

    // d_i g^{lm} = - g^{la} (d_i g_ab) g^{bm}
    std::vector<MatD> dginv(static_cast<std::size_t>(d), MatD(d, d));
    for (int i = 0; i < d; ++i) {
        MatD dg(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                dg(a, b) = g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].d(i);
        dginv[static_cast<std::size_t>(i)] = -1.0 * (c.g_inv * dg * c.g_inv);
    }
    c.dgamma.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                        static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double s = 0.0;
                    for (int m = 0; m < d; ++m) {
                        const double bracket_m =
                            g[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)].d(j) +
                            g[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].d(k) -
                            g[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].d(m);
                        const double dbracket_m =
                            g[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)].dd(i, j) +
                            g[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].dd(i, k) -
                            g[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].dd(i, m);
                        s += dginv[static_cast<std::size_t>(i)](l, m) * bracket_m +
                             c.g_inv(l, m) * dbracket_m;
                    }
                    c.dgamma[idx4(d, i, l, j, k)] = 0.5 * s;
                }
    c.has_dgamma = true;
    return c;
}

/// R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik},
/// i.e. R(d_i, d_j) d_k = R^l_{ijk} d_l.
inline T4 curvature(const Connection& c) {
    const int d = c.d;
    if (!c.has_dgamma) throw NumericsError("curvature needs a connection built with derivatives");
    T4 r(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
             static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double s = c.dgamma[idx4(d, i, l, j, k)] - c.dgamma[idx4(d, j, l, i, k)];
                    for (int m = 0; m < d; ++m)
                        s += c.gamma[idx3(d, l, i, m)] * c.gamma[idx3(d, m, j, k)] -
                             c.gamma[idx3(d, l, j, m)] * c.gamma[idx3(d, m, i, k)];
                    r[idx4(d, l, i, j, k)] = s;
                }
    return r;
}

// ---- covariant derivatives for an arbitrary connection table ------------------------

/// (nab_i X)^k = d_i X^k + G^k_{im} X^m; layout (i, k).
inline MatD covariant_vec(int d, const T3& gamma, const VecJ& x) {
    MatD out(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            double s = x[static_cast<std::size_t>(k)].d(i);
            for (int m = 0; m < d; ++m)
                s += gamma[idx3(d, k, i, m)] * x[static_cast<std::size_t>(m)].value();
            out(i, k) = s;
        }
    return out;
}

/// (nab_i eta)_j = d_i eta_j - G^m_{ij} eta_m; layout (i, j).
inline MatD covariant_oneform(int d, const T3& gamma, const VecJ& eta) {
    MatD out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = eta[static_cast<std::size_t>(j)].d(i);
            for (int m = 0; m < d; ++m)
                s -= gamma[idx3(d, m, i, j)] * eta[static_cast<std::size_t>(m)].value();
            out(i, j) = s;
        }
    return out;
}

/// (nab_i A)^k_j = d_i A^k_j + G^k_{im} A^m_j - G^m_{ij} A^k_m; layout idx3(i, k, j).
inline T3 covariant_affinor(int d, const T3& gamma, const MatJ& a) {
    T3 out(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
               static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                double s = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].d(i);
                for (int m = 0; m < d; ++m)
                    s += gamma[idx3(d, k, i, m)] *
                             a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].value() -
                         gamma[idx3(d, m, i, j)] *
                             a[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)].value();
                out[idx3(d, i, k, j)] = s;
            }
    return out;
}

/// (nab_i g)_jk = d_i g_jk - G^m_{ij} g_mk - G^m_{ik} g_jm; layout idx3(i, j, k).
inline T3 covariant_metric(int d, const T3& gamma, const MatJ& g) {
    T3 out(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
               static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double s = g[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].d(i);
                for (int m = 0; m < d; ++m)
                    s -= gamma[idx3(d, m, i, j)] *
                             g[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)].value() +
                         gamma[idx3(d, m, i, k)] *
                             g[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)].value();
                out[idx3(d, i, j, k)] = s;
            }
    return out;
}

/// (nab_X Y)^k for field jets and a connection table.
inline std::vector<double> nabla_vec(int d, const T3& gamma, const VecJ& x, const VecJ& y) {
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            s += x[static_cast<std::size_t>(i)].value() * y[static_cast<std::size_t>(k)].d(i);
            for (int m = 0; m < d; ++m)
                s += gamma[idx3(d, k, i, m)] * x[static_cast<std::size_t>(i)].value() *
                     y[static_cast<std::size_t>(m)].value();
        }
        out[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

/// Koszul's formula: returns 2 g(nab_X Y, Z) straight from field jets,
/// independently of any Christoffel table.
inline double koszul(const MatJ& g, const VecJ& x, const VecJ& y, const VecJ& z) {
    const std::vector<double> xv = values(x), yv = values(y), zv = values(z);
    const double t1 = deriv_along(xv, metric_pair_jet(g, y, z)) +
                      deriv_along(yv, metric_pair_jet(g, z, x)) -
                      deriv_along(zv, metric_pair_jet(g, x, y));
    const MatD gv = values(g);
    const std::vector<double> bxy = bracket(x, y), byz = bracket(y, z), bzx = bracket(z, x);
    const double t2 = form2_apply(gv, bxy, zv) - form2_apply(gv, byz, xv) +
                      form2_apply(gv, bzx, yv);
    return t1 + t2;
}

// ---- Nijenhuis torsion of a (1,1) field -----------------------------------------------

/// [A,A](d_i, d_j)^k = A^m_i d_m A^k_j - A^m_j d_m A^k_i
///                     + A^k_m d_j A^m_i - A^k_m d_i A^m_j; layout idx3(k, i, j).
inline T3 nijenhuis(const MatJ& a) {
    const int d = static_cast<int>(a.size());
    T3 out(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
               static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int m = 0; m < d; ++m) {
                    s += a[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)].value() *
                             a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].d(m) -
                         a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].value() *
                             a[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].d(m) +
                         a[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)].value() *
                             (a[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)].d(j) -
                              a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].d(i));
                }
                out[idx3(d, k, i, j)] = s;
            }
    return out;
}

// ---- metric signature and the pointwise class of a one-form ----------------------------

inline Signature metric_signature(const MatD& g, double tol = 1e-9) {
    return signature_sym(g, tol);
}

// ---- frame values of wedge powers ---------------------------------------------

namespace detail {

/// sum over signed permutations of {0..m-1}; visit(perm, sign) is called once
/// per permutation. Guarded against blow-up: callers pass m <= 9.
template <typename Visit>
inline void signed_permutations_rec(int m, std::vector<int>& perm, std::vector<char>& used,
                                    int sign, Visit&& visit) {
    const int slot = static_cast<int>(perm.size());
    if (slot == m) {
        visit(perm, sign);
        return;
    }
    int skipped = 0;
    for (int j = 0; j < m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        perm.push_back(j);
        used[static_cast<std::size_t>(j)] = 1;
        signed_permutations_rec(m, perm, used, (skipped % 2 == 0) ? sign : -sign, visit);
        used[static_cast<std::size_t>(j)] = 0;
        perm.pop_back();
        ++skipped;
    }
}

inline double factorial_d(int m) {
    double f = 1.0;
    for (int r = 2; r <= m; ++r) f *= r;
    return f;
}

} // namespace detail

/// (w^p)(e_{i0},...,e_{i(2p-1)}) on the coordinate subframe `idx`, in the
/// permutation-average normalization: (1/(2p)!) sum_sigma sgn prod w(.,.).
inline double wedge_power_frame(const MatD& w, int p, const std::vector<int>& idx) {
    const int m = 2 * p;
    if (static_cast<int>(idx.size()) != m)
        throw NumericsError("wedge_power_frame: index set must have size 2p");
    if (p == 0) return 1.0;
    if (m > 9) throw GateError("wedge frame evaluation limited to degree <= 9");
    double total = 0.0;
    std::vector<int> perm;
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    detail::signed_permutations_rec(m, perm, used, 1, [&](const std::vector<int>& s, int sign) {
        double prod = static_cast<double>(sign);
        for (int r = 0; r < p; ++r)
            prod *= w(idx[static_cast<std::size_t>(s[static_cast<std::size_t>(2 * r)])],
                      idx[static_cast<std::size_t>(s[static_cast<std::size_t>(2 * r + 1)])]);
        total += prod;
    });
    return total / detail::factorial_d(m);
}

/// (alpha ^ w^p)(e_{i0},...,e_{i(2p)}) on the coordinate subframe `idx`:
/// (1/(2p+1)!) sum_sigma sgn alpha(.) prod w(.,.).
inline double wedge_1_2p_frame(const std::vector<double>& alpha, const MatD& w, int p,
                               const std::vector<int>& idx) {
    const int m = 2 * p + 1;
    if (static_cast<int>(idx.size()) != m)
        throw NumericsError("wedge_1_2p_frame: index set must have size 2p+1");
    if (m > 9) throw GateError("wedge frame evaluation limited to degree <= 9");
    double total = 0.0;
    std::vector<int> perm;
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    detail::signed_permutations_rec(m, perm, used, 1, [&](const std::vector<int>& s, int sign) {
        double prod = static_cast<double>(sign) *
                      alpha[static_cast<std::size_t>(idx[static_cast<std::size_t>(s[0])])];
        for (int r = 0; r < p; ++r)
            prod *= w(idx[static_cast<std::size_t>(s[static_cast<std::size_t>(2 * r + 1)])],
                      idx[static_cast<std::size_t>(s[static_cast<std::size_t>(2 * r + 2)])]);
        total += prod;
    });
    return total / detail::factorial_d(m);
}

/// All size-m index subsets of {0..d-1}, lexicographic.
inline std::vector<std::vector<int>> index_combinations(int d, int m) {
    std::vector<std::vector<int>> out;
    if (m < 0 || m > d) return out;
    std::vector<int> c(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) c[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(c);
        int i = m - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == d - m + i) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

/// Largest |value| of (alpha ^ w^p) over all coordinate subframes.
inline double max_wedge_1_2p(const std::vector<double>& alpha, const MatD& w, int p) {
    const int d = w.rows();
    double best = 0.0;
    for (const auto& idx : index_combinations(d, 2 * p + 1))
        best = std::max(best, std::abs(wedge_1_2p_frame(alpha, w, p, idx)));
    return best;
}

/// Largest |value| of w^p over all coordinate subframes.
inline double max_wedge_power(const MatD& w, int p) {
    const int d = w.rows();
    double best = 0.0;
    for (const auto& idx : index_combinations(d, 2 * p))
        best = std::max(best, std::abs(wedge_power_frame(w, p, idx)));
    return best;
}

// ---- pointwise basis of the kernel distribution of a one-form -----------------------

/// Basis of ker(alpha) at a point, assuming alpha(v) = 1: project the
/// coordinate vectors e_i -> e_i - alpha_i v and keep the d-1 best-conditioned
/// ones (pivoted elimination). `picked` lists the surviving coordinate axes.
struct KernelBasis {
    std::vector<int> picked;
    MatD basis;  // d x (d-1), columns are the basis vectors
};

inline KernelBasis kernel_basis(const std::vector<double>& alpha, const std::vector<double>& v) {
    const int d = static_cast<int>(alpha.size());
    MatD proj(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            proj(k, i) = (k == i ? 1.0 : 0.0) -
                         alpha[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(k)];
    KernelBasis kb;
    kb.picked = pivoted_columns(proj, d - 1);
    kb.basis = MatD(d, d - 1);
    for (std::size_t c = 0; c < kb.picked.size(); ++c)
        for (int k = 0; k < d; ++k)
            kb.basis(k, static_cast<int>(c)) = proj(k, kb.picked[c]);
    return kb;
}

/// Pointwise class of a one-form: 2q+1 when eta is nonzero on the kernel of
/// d eta (rank 2q), else 2q.
inline int oneform_class(const std::vector<double>& eta, const MatD& deta, double tol) {
    const int d = deta.rows();
    int q2 = 0;
    const Svd s = svd(deta);
    for (double sig : s.sigma)
        if (sig > tol) ++q2;
    const MatD ker = null_space(deta, tol);
    double on_kernel = 0.0;
    for (int j = 0; j < ker.cols(); ++j) {
        double v = 0.0;
        for (int i = 0; i < d; ++i) v += eta[static_cast<std::size_t>(i)] * ker(i, j);
        on_kernel = std::max(on_kernel, std::abs(v));
    }
    return q2 + (on_kernel > tol ? 1 : 0);
}

} // namespace crgeo
