#pragma once

// Almost paracontact metric structures (psi, zeta, tau, g) on a coordinate
// chart: axiom validation (including the split signature and the isotropic
// +1/-1 eigendistributions of psi), the fundamental two-form, the torsion
// tensors K1..K4 and their packaging as the Nijenhuis tensor of the product
// structure J on M x R, the operators h / hbar / A / B, normality along the
// kernel distribution of tau, para-CR integrability of the eigendistributions,
// the covariant-derivative characterizations of these, the autoparallel-Reeb
// equivalences, and class detection (paracontact / almost para-cosymplectic /
// almost para-Kenmotsu / normal / ...).
//
// Everything is verified pointwise on deterministic samples; a Report row per
// identity carries the largest residual seen. Two printed variants of the
// general covariant-derivative identity circulate (the trailing term with
// coefficient 1 or 2) and two readings of the auxiliary bilinear u in its
// kernel-normal reduction; both are evaluated side by side and every report
// records which one the numbers support.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "crgeo/acm.hpp"  // ProbeOptions + shared detail helpers
#include "crgeo/calculus.hpp"
#include "crgeo/chart.hpp"
#include "crgeo/errors.hpp"
#include "crgeo/expr.hpp"
#include "crgeo/linalg.hpp"
#include "crgeo/report.hpp"
#include "crgeo/rng.hpp"
#include "crgeo/tensor.hpp"

namespace crgeo {

struct APCMStructure {
    ChartManifold chart;
    MatE psi;   // psi[k][j] = psi^k_j
    VecE zeta;  // zeta[k]
    VecE tau;   // tau[j]
    MatE g;     // g[i][j], signature (n+1, n)
};

// ---- everything the checks need, frozen at one sample point ---------------------

struct APCMPointData {
    int d = 0;
    std::vector<double> p;

    MatJ psi_j, g_j;
    VecJ zeta_j, tau_j;

    MatD psi, g, g_inv;
    std::vector<double> zeta, tau;

    Connection conn;
    MatD dtau;     // (d tau)_ij
    Form2Jet Psi;  // fundamental form Psi_ij = g_im psi^m_j, with first derivatives
    T3 dPsi;       // (d Psi)_abc

    MatD lie_zeta_psi;  // K3 = (L_zeta psi)^k_j = 2 h
    MatD h;             // h = 1/2 L_zeta psi
    MatD nab_zeta_psi;  // (nab_zeta psi)^k_j
    MatD hbar;          // h - 1/2 nab_zeta psi
    MatD lie_zeta_g;    // (L_zeta g)_ij
    MatD lie_zeta_Psi;  // (L_zeta Psi)_ij
    std::vector<double> lie_zeta_tau;  // K4
    MatD nabla_zeta;                   // (nab_i zeta)^k at (i,k)
    std::vector<double> nab_zeta_zeta;

    T3 cov_psi;  // (nab_i psi)^k_j at idx3(i,k,j)
    T3 npsi;     // [psi,psi] at idx3(k,i,j)
    T3 k1;       // K1 = [psi,psi] - 2 dtau (x) zeta
    MatD k2;     // K2(e_j, e_l)

    MatD a_op;      // A = -nab zeta (operator, (k,i))
    MatD b_op;      // dtau(X,Y) = g(X,BY)
    T3 p_ten;       // g(P_XY,Z) = (3/2) dPsi(X,Y,Z), P^l_{ij} at idx3(l,i,j)
    MatD u_mat;     // u(e_a,e_b) with u(Y,X) = dtau(psiY,X) + g(hY,X)
    MatD u_alt;     // swapped reading: u(Y,X) = dtau(psiX,Y) + g(hY,X)
    MatD ubar_mat;  // ubar(e_a,e_b) with ubar(X,Y) = dtau(psiY,X) + g(hbarX,Y)
};

inline APCMPointData apcm_point(const APCMStructure& s, const std::vector<double>& p,
                                bool with_curvature = false) {
    const int d = s.chart.dim();
    APCMPointData o;
    o.d = d;
    o.p = p;
    JetContext ctx(p);
    o.psi_j = eval_mat(ctx, s.psi);
    o.zeta_j = eval_vec(ctx, s.zeta);
    o.tau_j = eval_vec(ctx, s.tau);
    o.g_j = eval_mat(ctx, s.g);
    o.psi = values(o.psi_j);
    o.zeta = values(o.zeta_j);
    o.tau = values(o.tau_j);
    o.g = values(o.g_j);
    o.g_inv = inverse(o.g);
    o.conn = levi_civita(o.g_j, with_curvature);
    o.dtau = d_oneform(o.tau_j);
    o.Psi = fundamental_form_jet(o.g_j, o.psi_j);
    o.dPsi = d_twoform(o.Psi);
    o.lie_zeta_psi = lie_affinor(o.zeta_j, o.psi_j);
    o.h = 0.5 * o.lie_zeta_psi;
    o.cov_psi = covariant_affinor(d, o.conn.gamma, o.psi_j);
    o.nab_zeta_psi = MatD(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            double s_kj = 0.0;
            for (int i = 0; i < d; ++i)
                s_kj += o.zeta[static_cast<std::size_t>(i)] * o.cov_psi[idx3(d, i, k, j)];
            o.nab_zeta_psi(k, j) = s_kj;
        }
    o.hbar = o.h - 0.5 * o.nab_zeta_psi;
    o.lie_zeta_g = lie_metric(o.zeta_j, o.g_j);
    o.lie_zeta_Psi = lie_twoform(o.zeta_j, o.Psi);
    o.lie_zeta_tau = lie_oneform(o.zeta_j, o.tau_j);
    o.nabla_zeta = covariant_vec(d, o.conn.gamma, o.zeta_j);
    o.nab_zeta_zeta = nabla_vec(d, o.conn.gamma, o.zeta_j, o.zeta_j);
    o.npsi = nijenhuis(o.psi_j);
    o.k1 = o.npsi;
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                o.k1[idx3(d, k, i, j)] -= 2.0 * o.dtau(i, j) * o.zeta[static_cast<std::size_t>(k)];
    o.k2 = MatD(d, d);
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
            double s_jl = 0.0;
            for (int m = 0; m < d; ++m) {
                s_jl += o.psi(m, j) * o.tau_j[static_cast<std::size_t>(l)].d(m) -
                        o.psi(m, l) * o.tau_j[static_cast<std::size_t>(j)].d(m) +
                        o.tau[static_cast<std::size_t>(m)] *
                            (o.psi_j[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)].d(l) -
                             o.psi_j[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)].d(j));
            }
            o.k2(j, l) = s_jl;
        }
    o.a_op = MatD(d, d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) o.a_op(k, i) = -o.nabla_zeta(i, k);
    o.b_op = o.g_inv * o.dtau;
    o.p_ten.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                       static_cast<std::size_t>(d),
                   0.0);
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s_lij = 0.0;
                for (int c = 0; c < d; ++c) s_lij += o.g_inv(l, c) * o.dPsi[idx3(d, i, j, c)];
                o.p_ten[idx3(d, l, i, j)] = 1.5 * s_lij;
            }
    const MatD psit_dtau = o.psi.transposed() * o.dtau;  // (a,b) = dtau(psi e_a, e_b)
    o.u_mat = psit_dtau + o.h.transposed() * o.g;
    o.u_alt = psit_dtau.transposed() + o.h.transposed() * o.g;
    o.ubar_mat = psit_dtau.transposed() + o.hbar.transposed() * o.g;
    return o;
}

// ---- field-level torsion tensors (used for tensoriality cross-checks) -----------

/// K1(X,Y) = psi^2[X,Y] + [psiX,psiY] - psi[psiX,Y] - psi[X,psiY] - 2 dtau(X,Y) zeta
/// evaluated on expression-level fields.
inline std::vector<double> k1_field(const APCMStructure& s, const VecE& x, const VecE& y,
                                    const std::vector<double>& p) {
    const int d = s.chart.dim();
    JetContext ctx(p);
    const MatJ psi_j = eval_mat(ctx, s.psi);
    const VecJ tau_j = eval_vec(ctx, s.tau);
    const VecJ zeta_j = eval_vec(ctx, s.zeta);
    const VecE psix_e = apply_e(s.psi, x);
    const VecE psiy_e = apply_e(s.psi, y);
    const VecJ xj = eval_vec(ctx, x), yj = eval_vec(ctx, y);
    const VecJ fxj = eval_vec(ctx, psix_e), fyj = eval_vec(ctx, psiy_e);
    const std::vector<double> bxy = bracket(xj, yj);
    const std::vector<double> bff = bracket(fxj, fyj);
    const std::vector<double> bfx = bracket(fxj, yj);
    const std::vector<double> bxf = bracket(xj, fyj);
    const MatD psiv = values(psi_j);
    const MatD psi2 = psiv * psiv;
    const double dtau_xy = d_oneform_fields(tau_j, xj, yj);
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
        double v = bff[static_cast<std::size_t>(k)] -
                   2.0 * dtau_xy * zeta_j[static_cast<std::size_t>(k)].value();
        for (int m = 0; m < d; ++m)
            v += psi2(k, m) * bxy[static_cast<std::size_t>(m)] -
                 psiv(k, m) * (bfx[static_cast<std::size_t>(m)] + bxf[static_cast<std::size_t>(m)]);
        out[static_cast<std::size_t>(k)] = v;
    }
    return out;
}

/// K2(X,Y) = (L_{psiX} tau)(Y) - (L_{psiY} tau)(X) on expression-level fields.
inline double k2_field(const APCMStructure& s, const VecE& x, const VecE& y,
                       const std::vector<double>& p) {
    JetContext ctx(p);
    const VecJ tau_j = eval_vec(ctx, s.tau);
    const VecE psix_e = apply_e(s.psi, x);
    const VecE psiy_e = apply_e(s.psi, y);
    const VecJ fxj = eval_vec(ctx, psix_e), fyj = eval_vec(ctx, psiy_e);
    const VecJ xj = eval_vec(ctx, x), yj = eval_vec(ctx, y);
    const std::vector<double> l1 = lie_oneform(fxj, tau_j);
    const std::vector<double> l2 = lie_oneform(fyj, tau_j);
    return dot(l1, values(yj)) - dot(l2, values(xj));
}

/// hX = (1/2)((L_zeta psi)X) = (1/2)([zeta, psiX] - psi[zeta, X]) on an
/// expression-level field.
inline std::vector<double> zeta_h_field(const APCMStructure& s, const VecE& x,
                                        const std::vector<double>& p) {
    const int d = s.chart.dim();
    JetContext ctx(p);
    const MatJ psi_j = eval_mat(ctx, s.psi);
    const VecJ zeta_j = eval_vec(ctx, s.zeta);
    const VecE psix_e = apply_e(s.psi, x);
    const VecJ xj = eval_vec(ctx, x), fxj = eval_vec(ctx, psix_e);
    const std::vector<double> b1 = bracket(zeta_j, fxj);
    const std::vector<double> b2 = bracket(zeta_j, xj);
    const MatD psiv = values(psi_j);
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int k = 0; k < d; ++k) {
        double v = b1[static_cast<std::size_t>(k)];
        for (int m = 0; m < d; ++m) v -= psiv(k, m) * b2[static_cast<std::size_t>(m)];
        out[static_cast<std::size_t>(k)] = 0.5 * v;
    }
    return out;
}

// ---- pointwise residuals ----------------------------------------------------------

/// K1 contracted with two pointwise vectors.
inline std::vector<double> k1_value(const APCMPointData& o, const std::vector<double>& x,
                                    const std::vector<double>& y) {
    return t3_contract23(o.d, o.k1, x, y);
}

inline double k2_value(const APCMPointData& o, const std::vector<double>& x,
                       const std::vector<double>& y) {
    return form2_apply(o.k2, x, y);
}

/// Residual of the unconditional identity
///   2 g((nab_X psi)Y, Z) = -3 dPsi(X,psiY,psiZ) - 3 dPsi(X,Y,Z)
///     - g(K1(Y,Z), psiX) + K2(Y,Z) tau(X)
///     + 2 dtau(psiY,X) tau(Z) - tail_coef * dtau(psiZ,X) tau(Y)
/// contracted with the given vectors. The trailing coefficient is a parameter
/// because two printed variants (1 and 2) circulate; only one can be right,
/// since the left side is skew under Y <-> Z.
inline double para_covdiv_general_residual(const APCMPointData& o, const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           const std::vector<double>& z, double tail_coef) {
    const int d = o.d;
    double lhs = 0.0;
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l)
                    lhs += 2.0 * o.g(k, l) * o.cov_psi[idx3(d, i, k, j)] *
                           x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] *
                           z[static_cast<std::size_t>(l)];
    const std::vector<double> fy = mat_apply(o.psi, y);
    const std::vector<double> fz = mat_apply(o.psi, z);
    const std::vector<double> fx = mat_apply(o.psi, x);
    const std::vector<double> k1yz = t3_contract23(d, o.k1, y, z);
    double rhs = -3.0 * t3_apply(d, o.dPsi, x, fy, fz) - 3.0 * t3_apply(d, o.dPsi, x, y, z);
    rhs -= form2_apply(o.g, k1yz, fx);
    rhs += form2_apply(o.k2, y, z) * dot(o.tau, x);
    rhs += 2.0 * form2_apply(o.dtau, fy, x) * dot(o.tau, z) -
           tail_coef * form2_apply(o.dtau, fz, x) * dot(o.tau, y);
    return std::abs(lhs - rhs);
}

/// Componentwise max of the same identity over the coordinate frame.
inline double para_covdiv_general_max(const APCMPointData& o, double tail_coef) {
    const int d = o.d;
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) {
                double lhs = 0.0;
                for (int k = 0; k < d; ++k) lhs += 2.0 * o.g(k, l) * o.cov_psi[idx3(d, i, k, j)];
                double dpsi_ff = 0.0;
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        dpsi_ff += o.dPsi[idx3(d, i, a, b)] * o.psi(a, j) * o.psi(b, l);
                double k1_term = 0.0;
                for (int k = 0; k < d; ++k)
                    for (int m = 0; m < d; ++m)
                        k1_term += o.g(k, m) * o.k1[idx3(d, k, j, l)] * o.psi(m, i);
                double dtau_fy = 0.0, dtau_fz = 0.0;
                for (int m = 0; m < d; ++m) {
                    dtau_fy += o.dtau(m, i) * o.psi(m, j);
                    dtau_fz += o.dtau(m, i) * o.psi(m, l);
                }
                const double rhs = -3.0 * dpsi_ff - 3.0 * o.dPsi[idx3(d, i, j, l)] - k1_term +
                                   o.k2(j, l) * o.tau[static_cast<std::size_t>(i)] +
                                   2.0 * dtau_fy * o.tau[static_cast<std::size_t>(l)] -
                                   tail_coef * dtau_fz * o.tau[static_cast<std::size_t>(j)];
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    return worst;
}

/// Componentwise max residual of the kernel-normal covariant-derivative formula
///   g((nab_X psi)Y,Z) = -(3/2) dPsi(X,psiY,psiZ) - (3/2) dPsi(X,Y,Z)
///     + u(Y,X) tau(Z) - u(Z,X) tau(Y)
/// with the mirror reading u(Y,X) = dtau(psiY,X) + g(hY,X) (swapped = false) or
/// the swapped reading u(Y,X) = dtau(psiX,Y) + g(hY,X) (swapped = true).
inline double para_covd_formula_max(const APCMPointData& o, bool swapped_u) {
    const int d = o.d;
    const MatD& u = swapped_u ? o.u_alt : o.u_mat;
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) {
                double lhs = 0.0;
                for (int k = 0; k < d; ++k) lhs += o.g(k, l) * o.cov_psi[idx3(d, i, k, j)];
                double dpsi_ff = 0.0;
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        dpsi_ff += o.dPsi[idx3(d, i, a, b)] * o.psi(a, j) * o.psi(b, l);
                const double rhs = -1.5 * dpsi_ff - 1.5 * o.dPsi[idx3(d, i, j, l)] +
                                   u(j, i) * o.tau[static_cast<std::size_t>(l)] -
                                   u(l, i) * o.tau[static_cast<std::size_t>(j)];
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    return worst;
}

/// Componentwise max residual of the augmented (ubar) version
///   g((nab_X psi)Y,Z) = -(3/2) dPsi(X,psiY,psiZ) - (3/2) dPsi(X,Y,Z)
///     + ubar(X,Y) tau(Z) - ubar(X,Z) tau(Y)
///     - (1/2) g((nab_zeta psi)X, Y) tau(Z) + (1/2) g((nab_zeta psi)X, Z) tau(Y).
inline double para_covd_ubar_max(const APCMPointData& o) {
    const int d = o.d;
    // g((nab_zeta psi)X, Y) with X = e_a, Y = e_b is (g^T * nab_zeta_psi)(b,a); g symmetric.
    const MatD gnzp = o.g * o.nab_zeta_psi;
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) {
                double lhs = 0.0;
                for (int k = 0; k < d; ++k) lhs += o.g(k, l) * o.cov_psi[idx3(d, i, k, j)];
                double dpsi_ff = 0.0;
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        dpsi_ff += o.dPsi[idx3(d, i, a, b)] * o.psi(a, j) * o.psi(b, l);
                const double rhs = -1.5 * dpsi_ff - 1.5 * o.dPsi[idx3(d, i, j, l)] +
                                   o.ubar_mat(i, j) * o.tau[static_cast<std::size_t>(l)] -
                                   o.ubar_mat(i, l) * o.tau[static_cast<std::size_t>(j)] -
                                   0.5 * gnzp(j, i) * o.tau[static_cast<std::size_t>(l)] +
                                   0.5 * gnzp(l, i) * o.tau[static_cast<std::size_t>(j)];
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    return worst;
}

// ---- helpers ------------------------------------------------------------------------

namespace detail {

inline void require_apcm_dim(const ChartManifold& chart) {
    const int d = chart.dim();
    if (d < 3 || d % 2 == 0)
        throw GateError(
            "almost paracontact metric structures need odd chart dimension >= 3, got " +
            std::to_string(d));
}

/// Max |K1(X,Y)| over pairs from a basis of ker tau.
inline double k1_kernel_max(const APCMPointData& o) {
    const int d = o.d;
    const KernelBasis kb = kernel_basis(o.tau, o.zeta);
    double worst = 0.0;
    for (int a = 0; a < d - 1; ++a)
        for (int b = a + 1; b < d - 1; ++b) {
            std::vector<double> va(static_cast<std::size_t>(d)), vb(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) {
                va[static_cast<std::size_t>(k)] = kb.basis(k, a);
                vb[static_cast<std::size_t>(k)] = kb.basis(k, b);
            }
            worst = std::max(worst, max_abs(k1_value(o, va, vb)));
        }
    return worst;
}

} // namespace detail

// ---- validation --------------------------------------------------------------------

inline Report validate_apcm(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    const int n = (d - 1) / 2;
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);

    double r_psi2 = 0, r_tauzeta = 0, r_psizeta = 0, r_taupsi = 0, r_compat = 0, r_gsym = 0,
           r_gzeta = 0, r_skew = 0, r_iso = 0;
    double min_vol = std::numeric_limits<double>::infinity();
    bool split_signature = true;
    bool eigen_dims_ok = true;
    Signature sig0{};
    bool first = true;
    std::vector<int> full(static_cast<std::size_t>(d));
    std::iota(full.begin(), full.end(), 0);

    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                double psi2 = -(k == j ? 1.0 : 0.0) +
                              o.zeta[static_cast<std::size_t>(k)] *
                                  o.tau[static_cast<std::size_t>(j)];
                for (int m = 0; m < d; ++m) psi2 += o.psi(k, m) * o.psi(m, j);
                r_psi2 = std::max(r_psi2, std::abs(psi2));
            }
        r_tauzeta = std::max(r_tauzeta, std::abs(dot(o.tau, o.zeta) - 1.0));
        const std::vector<double> psizeta = mat_apply(o.psi, o.zeta);
        r_psizeta = std::max(r_psizeta, max_abs(psizeta));
        for (int j = 0; j < d; ++j) {
            double tp = 0.0, gz = 0.0;
            for (int k = 0; k < d; ++k) {
                tp += o.tau[static_cast<std::size_t>(k)] * o.psi(k, j);
                gz += o.g(j, k) * o.zeta[static_cast<std::size_t>(k)];
            }
            r_taupsi = std::max(r_taupsi, std::abs(tp));
            r_gzeta = std::max(r_gzeta, std::abs(gz - o.tau[static_cast<std::size_t>(j)]));
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double c = o.g(i, j) -
                           o.tau[static_cast<std::size_t>(i)] * o.tau[static_cast<std::size_t>(j)];
                for (int k = 0; k < d; ++k)
                    for (int m = 0; m < d; ++m) c += o.psi(k, i) * o.g(k, m) * o.psi(m, j);
                r_compat = std::max(r_compat, std::abs(c));
                r_gsym = std::max(r_gsym, std::abs(o.g(i, j) - o.g(j, i)));
                r_skew = std::max(r_skew, std::abs(o.Psi.val(i, j) + o.Psi.val(j, i)));
            }
        min_vol = std::min(min_vol, std::abs(wedge_1_2p_frame(o.tau, o.Psi.val, n, full)));
        const Signature sg = metric_signature(o.g);
        if (first) {
            sig0 = sg;
            first = false;
        }
        if (!(sg.positive == n + 1 && sg.negative == n && sg.zero == 0)) split_signature = false;

        // +1 / -1 eigendistributions of psi: dimension n each, totally isotropic.
        MatD shift_p(d, d), shift_m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                shift_p(i, j) = o.psi(i, j) - (i == j ? 1.0 : 0.0);
                shift_m(i, j) = o.psi(i, j) + (i == j ? 1.0 : 0.0);
            }
        const MatD vplus = null_space(shift_p, 1e-7);
        const MatD vminus = null_space(shift_m, 1e-7);
        const MatD vzero = null_space(o.psi, 1e-7);
        if (vplus.cols() != n || vminus.cols() != n || vzero.cols() != 1) eigen_dims_ok = false;
        for (const MatD* eig : {&vplus, &vminus})
            for (int a = 0; a < eig->cols(); ++a)
                for (int b = 0; b < eig->cols(); ++b) {
                    double gv = 0.0;
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) gv += (*eig)(i, a) * o.g(i, j) * (*eig)(j, b);
                    r_iso = std::max(r_iso, std::abs(gv));
                }
    }

    Report r;
    r.add(CheckRow::make("axiom.psi2", "psi^2 = Id - tau(x)zeta", r_psi2, 1e-9));
    r.add(CheckRow::make("axiom.tau_zeta", "tau(zeta) = 1", r_tauzeta, 1e-10));
    r.add(CheckRow::make("axiom.compat", "g(psiX,psiY) = -g(X,Y) + tau(X)tau(Y)", r_compat,
                         1e-9));
    r.add(CheckRow::make("axiom.g_sym", "g = g^T", r_gsym, 1e-9));
    r.add(CheckRow::make("axiom.signature", "signature(g) = (n+1,n)", split_signature ? 0.0 : 1.0,
                         0.5, "signature " + detail::signature_str(sig0)));
    r.add(CheckRow::make("axiom.volume", "tau ^ Psi^n != 0", min_vol > 1e-10 ? 0.0 : 1.0, 0.5,
                         "min |frame value| = " + format_double(min_vol)));
    r.add(CheckRow::make("conseq.psi_zeta", "psi zeta = 0", r_psizeta, 1e-9));
    r.add(CheckRow::make("conseq.tau_psi", "tau o psi = 0", r_taupsi, 1e-9));
    r.add(CheckRow::make("conseq.g_zeta", "g(zeta,.) = tau", r_gzeta, 1e-9));
    r.add(CheckRow::make("conseq.psi_skew", "Psi(X,Y) = -Psi(Y,X)", r_skew, 1e-9));
    r.add(CheckRow::make("eigen.dims",
                         "psi has eigenvalues +1 (dim n), -1 (dim n), 0 (the Reeb line)",
                         eigen_dims_ok ? 0.0 : 1.0, 0.5));
    r.add(CheckRow::make("eigen.isotropy", "the +1/-1 eigendistributions are totally isotropic",
                         r_iso, 1e-8));
    r.label("dimension", std::to_string(d));
    r.label("signature", detail::signature_str(sig0));
    r.label("valid", r.all_passed() ? "yes" : "no");
    return r;
}

// ---- normality along ker tau --------------------------------------------------------

inline Report is_tau_normal(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double worst = 0.0;
    std::string note;
    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        try {
            worst = std::max(worst, detail::k1_kernel_max(o));
        } catch (const NumericsError&) {
            worst = std::numeric_limits<double>::infinity();
            note = "kernel basis extraction failed (tau nearly degenerate)";
            break;
        }
    }
    Report r;
    r.add(CheckRow::make("taunormal.k1_kernel", "K1(X,Y) = 0 for X,Y in ker tau", worst, opts.tol,
                         note));
    r.label("tau_normal", worst <= opts.tol ? "yes" : "no");
    return r;
}

// ---- para-CR integrability of the eigendistributions -------------------------------

/// Expression-level spanning sections of the +1 and -1 eigendistributions of
/// psi, built once per structure from the projectors (1/2)(psi^2 +- psi).
struct ParaEigenFields {
    std::vector<VecE> plus;
    std::vector<VecE> minus;
};

inline ParaEigenFields para_eigen_fields(const APCMStructure& s) {
    const int d = s.chart.dim();
    ParaEigenFields f;
    f.plus.reserve(static_cast<std::size_t>(d));
    f.minus.reserve(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        VecE ea = zero_vec_e(d);
        ea[static_cast<std::size_t>(a)] = Expr::constant(1.0);
        const VecE pa = apply_e(s.psi, ea);    // psi e_a
        const VecE ppa = apply_e(s.psi, pa);   // psi^2 e_a
        VecE vp = zero_vec_e(d), vm = zero_vec_e(d);
        for (int k = 0; k < d; ++k) {
            vp[static_cast<std::size_t>(k)] =
                Expr::constant(0.5) * (ppa[static_cast<std::size_t>(k)] +
                                       pa[static_cast<std::size_t>(k)]);
            vm[static_cast<std::size_t>(k)] =
                Expr::constant(0.5) * (ppa[static_cast<std::size_t>(k)] -
                                       pa[static_cast<std::size_t>(k)]);
        }
        f.plus.push_back(std::move(vp));
        f.minus.push_back(std::move(vm));
    }
    return f;
}

inline Report para_cr_check(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    const ParaEigenFields fields = para_eigen_fields(s);
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r_plus = 0.0, r_minus = 0.0, r_consistency = 0.0;
    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        JetContext ctx(p);
        const MatD psi2 = o.psi * o.psi;
        MatD proj_plus(d, d), proj_minus(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                proj_plus(i, j) = 0.5 * (psi2(i, j) + o.psi(i, j));
                proj_minus(i, j) = 0.5 * (psi2(i, j) - o.psi(i, j));
            }
        for (int side = 0; side < 2; ++side) {
            const auto& sec = side == 0 ? fields.plus : fields.minus;
            const MatD& proj = side == 0 ? proj_plus : proj_minus;
            double& acc = side == 0 ? r_plus : r_minus;
            std::vector<VecJ> sec_j;
            sec_j.reserve(sec.size());
            for (const VecE& v : sec) sec_j.push_back(eval_vec(ctx, v));
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b) {
                    const std::vector<double> br =
                        bracket(sec_j[static_cast<std::size_t>(a)],
                                sec_j[static_cast<std::size_t>(b)]);
                    const std::vector<double> pr = mat_apply(proj, br);
                    for (int k = 0; k < d; ++k)
                        acc = std::max(acc, std::abs(br[static_cast<std::size_t>(k)] -
                                                     pr[static_cast<std::size_t>(k)]));
                    // cross-validation: the K1 tensor against its field evaluation
                    const std::vector<double> k1t =
                        k1_value(o, values(sec_j[static_cast<std::size_t>(a)]),
                                 values(sec_j[static_cast<std::size_t>(b)]));
                    const std::vector<double> k1f =
                        k1_field(s, sec[static_cast<std::size_t>(a)],
                                 sec[static_cast<std::size_t>(b)], p);
                    for (int k = 0; k < d; ++k)
                        r_consistency = std::max(
                            r_consistency, std::abs(k1t[static_cast<std::size_t>(k)] -
                                                    k1f[static_cast<std::size_t>(k)]));
                }
        }
    }
    Report r;
    r.add(CheckRow::make("paracr.vplus", "[V+,V+] in V+ for the +1 eigendistribution", r_plus,
                         opts.tol));
    r.add(CheckRow::make("paracr.vminus", "[V-,V-] in V- for the -1 eigendistribution", r_minus,
                         opts.tol));
    r.add(CheckRow::make("paracr.k1_consistency",
                         "K1 tensor values match the bracket evaluation on eigendistribution "
                         "sections",
                         r_consistency, 1e-8,
                         "cross-validation of the tensor and field evaluations"));
    r.label("para_cr", std::max(r_plus, r_minus) <= opts.tol ? "yes" : "no");
    return r;
}

// ---- covariant-derivative characterizations -----------------------------------------

inline Report para_covd_check(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r_gen2 = 0.0, r_gen1 = 0.0, r_gen_probe = 0.0;
    double r_mirror = 0.0, r_swapped = 0.0, r_kernel_k1 = 0.0;
    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        r_gen2 = std::max(r_gen2, para_covdiv_general_max(o, 2.0));
        r_gen1 = std::max(r_gen1, para_covdiv_general_max(o, 1.0));
        for (int t = 0; t < opts.triples; ++t) {
            const std::vector<double> x = sample_vector(rng, d);
            const std::vector<double> y = sample_vector(rng, d);
            const std::vector<double> z = sample_vector(rng, d);
            r_gen_probe = std::max(r_gen_probe, para_covdiv_general_residual(o, x, y, z, 2.0));
        }
        r_mirror = std::max(r_mirror, para_covd_formula_max(o, false));
        r_swapped = std::max(r_swapped, para_covd_formula_max(o, true));
        r_kernel_k1 = std::max(r_kernel_k1, detail::k1_kernel_max(o));
    }
    const bool taun = r_kernel_k1 <= opts.tol;
    const std::string general_id =
        "2g((nab_X psi)Y,Z) = -3dPsi(X,psiY,psiZ) - 3dPsi(X,Y,Z) - g(K1(Y,Z),psiX) + "
        "K2(Y,Z)tau(X) + 2dtau(psiY,X)tau(Z) - 2dtau(psiZ,X)tau(Y)";
    Report r;
    r.add(CheckRow::make("covdiv.general_frame", general_id, r_gen2, opts.tol,
                         "coordinate frame"));
    r.add(CheckRow::make("covdiv.general_probe", general_id, r_gen_probe, opts.tol,
                         "random vector triples"));
    {
        std::string resolution;
        if (r_gen2 <= opts.tol && r_gen1 > opts.tol)
            resolution = "the skew-symmetric trailing coefficient 2 holds, coefficient 1 fails";
        else if (r_gen2 <= opts.tol && r_gen1 <= opts.tol)
            resolution = "both trailing coefficients agree at this structure (the trailing term "
                         "vanishes)";
        else if (r_gen1 <= opts.tol)
            resolution = "only the trailing coefficient 1 holds";
        else
            resolution = "neither trailing coefficient holds";
        r.add(CheckRow::make("covdiv.coefficient",
                             "trailing term -2dtau(psiZ,X)tau(Y): coefficient 2 (skew in Y,Z) "
                             "versus the circulating variant with coefficient 1",
                             r_gen2, opts.tol,
                             resolution + "; coefficient-2 residual " + format_double(r_gen2) +
                                 ", coefficient-1 residual " + format_double(r_gen1)));
    }
    const std::string covd_id =
        "g((nab_X psi)Y,Z) = -(3/2)dPsi(X,psiY,psiZ) - (3/2)dPsi(X,Y,Z) + u(Y,X)tau(Z) - "
        "u(Z,X)tau(Y),  u(Y,X) = dtau(psiY,X) + g(hY,X)";
    if (taun) {
        r.add(CheckRow::make("covd.formula", covd_id, r_mirror, opts.tol));
        std::string resolution;
        if (r_mirror <= opts.tol && r_swapped > opts.tol)
            resolution = "the mirror reading holds, the swapped reading fails";
        else if (r_mirror <= opts.tol && r_swapped <= opts.tol)
            resolution = "both readings agree at this structure";
        else if (r_swapped <= opts.tol)
            resolution = "only the swapped reading holds";
        else
            resolution = "neither reading holds";
        r.add(CheckRow::make(
            "covd.u_reading",
            "u-argument reading: u(Y,X) = dtau(psiY,X) + g(hY,X) versus the swapped "
            "u(Y,X) = dtau(psiX,Y) + g(hY,X)",
            r_mirror, opts.tol,
            resolution + "; mirror residual " + format_double(r_mirror) + ", swapped residual " +
                format_double(r_swapped)));
    } else {
        r.add(CheckRow::not_applicable(
            "covd.formula", covd_id,
            "structure is not kernel-normal; residual " + format_double(r_mirror)));
        r.add(CheckRow::not_applicable(
            "covd.u_reading",
            "u-argument reading: u(Y,X) = dtau(psiY,X) + g(hY,X) versus the swapped "
            "u(Y,X) = dtau(psiX,Y) + g(hY,X)",
            "structure is not kernel-normal; mirror residual " + format_double(r_mirror) +
                ", swapped residual " + format_double(r_swapped)));
    }
    r.label("covd", r_mirror <= opts.tol ? "yes" : "no");
    r.label("tau_normal", taun ? "yes" : "no");
    r.label("residual.covdiv_coeff2", format_double(r_gen2));
    r.label("residual.covdiv_coeff1", format_double(r_gen1));
    r.label("residual.u_mirror", format_double(r_mirror));
    r.label("residual.u_swapped", format_double(r_swapped));
    return r;
}

/// The three-way equivalence: kernel-normality <=> para-CR integrability of
/// both eigendistributions <=> the covariant-derivative formula. Merges the
/// three reports and asserts the verdicts agree.
inline Report tau_normality_equivalence(const APCMStructure& s, const ProbeOptions& opts = {}) {
    Report a = is_tau_normal(s, opts);
    Report b = para_cr_check(s, opts);
    Report c = para_covd_check(s, opts);
    Report r;
    for (auto& row : a.rows) r.add(row);
    for (auto& row : b.rows) r.add(row);
    for (auto& row : c.rows) r.add(row);
    const std::string va = a.labels.at("tau_normal");
    const std::string vb = b.labels.at("para_cr");
    const std::string vc = c.labels.at("covd");
    const bool agree = (va == vb) && (vb == vc);
    r.add(CheckRow::make("equiv.three_way",
                         "kernel-normal <=> para-CR <=> covariant-derivative formula",
                         agree ? 0.0 : 1.0, 0.5,
                         "tau_normal=" + va + " para_cr=" + vb + " covd=" + vc));
    r.label("tau_normal", va);
    r.label("para_cr", vb);
    r.label("covd", vc);
    r.label("equivalent", agree ? "yes" : "no");
    return r;
}

// ---- autoparallel-Reeb equivalences -------------------------------------------------

inline Report para_autoparallel_equivalences(const APCMStructure& s,
                                             const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r_hpsi = 0, r_lietau = 0, r_tauh = 0, r_nzz = 0;
    double r_hpsi_lie = 0, r_2tauh = 0, r_2tauh_g = 0;
    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        const MatD hp_ph = o.h * o.psi + o.psi * o.h;
        r_hpsi = std::max(r_hpsi, hp_ph.max_abs());
        r_lietau = std::max(r_lietau, max_abs(o.lie_zeta_tau));
        for (int j = 0; j < d; ++j) {
            double th = 0.0;
            for (int k = 0; k < d; ++k) th += o.tau[static_cast<std::size_t>(k)] * o.h(k, j);
            r_tauh = std::max(r_tauh, std::abs(th));
        }
        r_nzz = std::max(r_nzz, max_abs(o.nab_zeta_zeta));
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                r_hpsi_lie = std::max(
                    r_hpsi_lie,
                    std::abs(hp_ph(k, j) + 0.5 * o.lie_zeta_tau[static_cast<std::size_t>(j)] *
                                               o.zeta[static_cast<std::size_t>(k)]));
        for (int j = 0; j < d; ++j) {
            double th = 0.0, tnf = 0.0, gval = 0.0;
            for (int k = 0; k < d; ++k) {
                th += o.tau[static_cast<std::size_t>(k)] * o.h(k, j);
                tnf += o.tau[static_cast<std::size_t>(k)] * o.nab_zeta_psi(k, j);
                for (int m = 0; m < d; ++m)
                    gval += o.g(k, m) * o.nab_zeta_zeta[static_cast<std::size_t>(k)] * o.psi(m, j);
            }
            r_2tauh = std::max(r_2tauh, std::abs(2.0 * th - tnf));
            r_2tauh_g = std::max(r_2tauh_g, std::abs(2.0 * th + gval));
        }
    }
    const bool v1 = r_hpsi <= opts.tol, v2 = r_lietau <= opts.tol, v3 = r_tauh <= opts.tol,
               v4 = r_nzz <= opts.tol;
    const bool agree = (v1 == v2) && (v2 == v3) && (v3 == v4);
    auto condition_row = [&](const std::string& id, const std::string& identity, double res,
                             bool holds) {
        if (holds) return CheckRow::make(id, identity, res, opts.tol, "holds");
        return CheckRow::not_applicable(id, identity,
                                        "does not hold; residual " + format_double(res));
    };
    Report r;
    r.add(condition_row("auto.h_psi", "h psi + psi h = 0", r_hpsi, v1));
    r.add(condition_row("auto.lie_tau", "L_zeta tau = 0", r_lietau, v2));
    r.add(condition_row("auto.tau_h", "tau o h = 0", r_tauh, v3));
    r.add(condition_row("auto.nab_zeta_zeta", "nab_zeta zeta = 0", r_nzz, v4));
    r.add(CheckRow::make(
        "auto.agree",
        "h psi + psi h = 0 <=> L_zeta tau = 0 <=> tau o h = 0 <=> nab_zeta zeta = 0",
        agree ? 0.0 : 1.0, 0.5,
        std::string("verdicts: ") + (v1 ? "y" : "n") + (v2 ? "y" : "n") + (v3 ? "y" : "n") +
            (v4 ? "y" : "n")));
    r.add(CheckRow::make("auto.h_psi_lie", "h psi + psi h = -(1/2)(L_zeta tau)(x)zeta",
                         r_hpsi_lie, opts.tol));
    r.add(CheckRow::make("auto.two_tau_h", "2 tau(hX) = tau((nab_zeta psi)X)", r_2tauh,
                         opts.tol));
    r.add(CheckRow::make("auto.two_tau_h_g", "2 tau(hX) = -g(nab_zeta zeta, psiX)", r_2tauh_g,
                         opts.tol));
    r.label("autoparallel", v4 ? "yes" : "no");
    return r;
}

// ---- identity suite -----------------------------------------------------------------

inline Report apcm_identity_suite(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);

    double r_nabla_zeta = 0, r_dpsi_zeta = 0, r_lzeta = 0, r_h_anti = 0, r_k2_dtau = 0;
    double r_gen = 0, r_nzpsi = 0, r_hbar_sym = 0, r_ubar_sym = 0, r_ubar_covd = 0;
    double r_k1_full = 0, r_k1_kernel = 0, r_k2_full = 0, r_k3 = 0, r_k4 = 0, r_h_full = 0,
           r_nzz = 0;

    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);

        // 2 g(nab_X zeta, Y) = 2 dtau(X,Y) + (L_zeta g)(X,Y)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double lhs = 0.0;
                for (int k = 0; k < d; ++k) lhs += 2.0 * o.g(k, j) * o.nabla_zeta(i, k);
                r_nabla_zeta = std::max(
                    r_nabla_zeta, std::abs(lhs - 2.0 * o.dtau(i, j) - o.lie_zeta_g(i, j)));
            }

        // 3 dPsi(zeta, X, Y) = (L_zeta Psi)(X,Y)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) {
                double lhs = 0.0;
                for (int a = 0; a < d; ++a)
                    lhs += 3.0 * o.dPsi[idx3(d, a, j, l)] * o.zeta[static_cast<std::size_t>(a)];
                r_dpsi_zeta = std::max(r_dpsi_zeta, std::abs(lhs - o.lie_zeta_Psi(j, l)));
            }

        // (L_zeta Psi)(X,Y) = (L_zeta g)(X, psiY) + 2 g(X, hY)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double lg_f = 0.0, gh = 0.0;
                for (int m = 0; m < d; ++m) {
                    lg_f += o.lie_zeta_g(a, m) * o.psi(m, b);
                    gh += o.g(a, m) * o.h(m, b);
                }
                r_lzeta = std::max(r_lzeta, std::abs(o.lie_zeta_Psi(a, b) - lg_f - 2.0 * gh));
            }

        // g(hY,Z) - g(hZ,Y) = -(1/2)(L_zeta Psi)(Y,Z) - (1/2)(L_zeta Psi)(psiY,psiZ) on ker tau
        {
            MatD m1(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double ghab = 0.0, ghba = 0.0, lff = 0.0;
                    for (int k = 0; k < d; ++k) {
                        ghab += o.g(k, b) * o.h(k, a);  // g(h e_a, e_b)
                        ghba += o.g(k, a) * o.h(k, b);
                    }
                    for (int mm = 0; mm < d; ++mm)
                        for (int nn = 0; nn < d; ++nn)
                            lff += o.lie_zeta_Psi(mm, nn) * o.psi(mm, a) * o.psi(nn, b);
                    m1(a, b) = ghab - ghba + 0.5 * o.lie_zeta_Psi(a, b) + 0.5 * lff;
                }
            r_h_anti = std::max(r_h_anti, detail::kernel_restricted_max(m1, o.zeta, o.tau));
        }

        // K2(X,Y) = 2 dtau(psiX,Y) - 2 dtau(psiY,X), everywhere
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double d1 = 0.0, d2 = 0.0;
                for (int m = 0; m < d; ++m) {
                    d1 += o.dtau(m, b) * o.psi(m, a);  // dtau(psi e_a, e_b)
                    d2 += o.dtau(m, a) * o.psi(m, b);
                }
                r_k2_dtau = std::max(r_k2_dtau, std::abs(o.k2(a, b) - 2.0 * d1 + 2.0 * d2));
            }

        r_gen = std::max(r_gen, para_covdiv_general_max(o, 2.0));

        // gated quantities, accumulated unconditionally
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) {
                double gnf = 0.0, ghjl = 0.0, ghlj = 0.0, gbjl = 0.0, gblj = 0.0;
                for (int k = 0; k < d; ++k) {
                    gnf += o.g(k, l) * o.nab_zeta_psi(k, j);
                    ghjl += o.g(k, l) * o.h(k, j);
                    ghlj += o.g(k, j) * o.h(k, l);
                    gbjl += o.g(k, l) * o.hbar(k, j);
                    gblj += o.g(k, j) * o.hbar(k, l);
                }
                r_nzpsi = std::max(r_nzpsi, std::abs(gnf - ghjl + ghlj));
                r_hbar_sym = std::max(r_hbar_sym, std::abs(gbjl - gblj));
                r_ubar_sym = std::max(r_ubar_sym, std::abs(o.ubar_mat(j, l) - o.ubar_mat(l, j)));
            }
        r_ubar_covd = std::max(r_ubar_covd, para_covd_ubar_max(o));

        r_k1_full = std::max(r_k1_full, max_abs_t(o.k1));
        r_k2_full = std::max(r_k2_full, o.k2.max_abs());
        r_k3 = std::max(r_k3, o.lie_zeta_psi.max_abs());
        r_k4 = std::max(r_k4, max_abs(o.lie_zeta_tau));
        r_h_full = std::max(r_h_full, o.h.max_abs());
        r_nzz = std::max(r_nzz, max_abs(o.nab_zeta_zeta));
        r_k1_kernel = std::max(r_k1_kernel, detail::k1_kernel_max(o));
    }

    // tensoriality probes at a handful of points
    double r_t_k1 = 0, r_t_k2 = 0, r_t_h = 0;
    const int tpoints = std::min<int>(5, static_cast<int>(pts.size()));
    for (int t = 0; t < tpoints; ++t) {
        const auto& p = pts[static_cast<std::size_t>(t)];
        const int a = t % d, b = (t + 1) % d, c = (t + 2) % d;
        const Expr f = Expr::constant(1.0) + Expr::constant(0.3) * Expr::coord(c);
        VecE x = zero_vec_e(d), y = zero_vec_e(d), fx = zero_vec_e(d);
        x[static_cast<std::size_t>(a)] = Expr::constant(1.0);
        y[static_cast<std::size_t>(b)] = Expr::constant(1.0);
        fx[static_cast<std::size_t>(a)] = f;
        const double fv = eval_value(f, p);
        const std::vector<double> k1a = k1_field(s, fx, y, p);
        const std::vector<double> k1b = k1_field(s, x, y, p);
        for (int k = 0; k < d; ++k)
            r_t_k1 = std::max(r_t_k1, std::abs(k1a[static_cast<std::size_t>(k)] -
                                               fv * k1b[static_cast<std::size_t>(k)]));
        r_t_k2 = std::max(r_t_k2, std::abs(k2_field(s, fx, y, p) - fv * k2_field(s, x, y, p)));
        const std::vector<double> ha = zeta_h_field(s, fx, p);
        const std::vector<double> hb = zeta_h_field(s, x, p);
        for (int k = 0; k < d; ++k)
            r_t_h = std::max(r_t_h, std::abs(ha[static_cast<std::size_t>(k)] -
                                             fv * hb[static_cast<std::size_t>(k)]));
    }

    const bool taun = r_k1_kernel <= opts.tol;
    const bool autop = r_nzz <= opts.tol;
    const bool normal = r_k1_full <= opts.tol;

    Report r;
    r.add(CheckRow::make("id.nabla_zeta", "2g(nab_X zeta, Y) = 2dtau(X,Y) + (L_zeta g)(X,Y)",
                         r_nabla_zeta, opts.tol));
    r.add(CheckRow::make("id.dpsi_zeta", "3dPsi(zeta,X,Y) = (L_zeta Psi)(X,Y)", r_dpsi_zeta,
                         opts.tol));
    r.add(CheckRow::make("id.lie_psi_g", "(L_zeta Psi)(X,Y) = (L_zeta g)(X,psiY) + 2g(X,hY)",
                         r_lzeta, opts.tol));
    r.add(CheckRow::make(
        "id.h_anti",
        "g(hY,Z) - g(hZ,Y) = -(1/2)(L_zeta Psi)(Y,Z) - (1/2)(L_zeta Psi)(psiY,psiZ) on ker tau",
        r_h_anti, opts.tol));
    r.add(CheckRow::make("id.k2_dtau", "K2(X,Y) = 2dtau(psiX,Y) - 2dtau(psiY,X)", r_k2_dtau,
                         opts.tol));
    r.add(CheckRow::make(
        "id.covdiv_general",
        "2g((nab_X psi)Y,Z) = -3dPsi(X,psiY,psiZ) - 3dPsi(X,Y,Z) - g(K1(Y,Z),psiX) + "
        "K2(Y,Z)tau(X) + 2dtau(psiY,X)tau(Z) - 2dtau(psiZ,X)tau(Y)",
        r_gen, opts.tol));
    const std::string nzpsi_id = "g((nab_zeta psi)Y,Z) = g(hY,Z) - g(hZ,Y)";
    const std::string hbar_sym_id = "g(hbarX,Y) = g(hbarY,X)";
    const std::string ubar_sym_id = "ubar(X,Y) = ubar(Y,X)";
    const std::string ubar_covd_id =
        "g((nab_X psi)Y,Z) = -(3/2)dPsi(X,psiY,psiZ) - (3/2)dPsi(X,Y,Z) + ubar(X,Y)tau(Z) - "
        "ubar(X,Z)tau(Y) - (1/2)g((nab_zeta psi)X,Y)tau(Z) + (1/2)g((nab_zeta psi)X,Z)tau(Y)";
    if (taun && autop) {
        r.add(CheckRow::make("id.nab_zeta_psi_as_h", nzpsi_id, r_nzpsi, opts.tol));
        r.add(CheckRow::make("id.hbar_sym", hbar_sym_id, r_hbar_sym, opts.tol));
        r.add(CheckRow::make("id.ubar_sym", ubar_sym_id, r_ubar_sym, opts.tol));
        r.add(CheckRow::make("id.ubar_covd", ubar_covd_id, r_ubar_covd, opts.tol));
    } else {
        const std::string why = "needs kernel-normal structure with autoparallel Reeb";
        r.add(CheckRow::not_applicable("id.nab_zeta_psi_as_h", nzpsi_id, why));
        r.add(CheckRow::not_applicable("id.hbar_sym", hbar_sym_id, why));
        r.add(CheckRow::not_applicable("id.ubar_sym", ubar_sym_id, why));
        r.add(CheckRow::not_applicable("id.ubar_covd", ubar_covd_id, why));
    }
    if (normal) {
        r.add(CheckRow::make("id.normal_k2", "K1 = 0 => K2 = 0", r_k2_full, opts.tol));
        r.add(CheckRow::make("id.normal_k3", "K1 = 0 => K3 = L_zeta psi = 0", r_k3, opts.tol));
        r.add(CheckRow::make("id.normal_k4", "K1 = 0 => K4 = L_zeta tau = 0", r_k4, opts.tol));
    } else {
        r.add(CheckRow::not_applicable("id.normal_k2", "K1 = 0 => K2 = 0", "K1 != 0"));
        r.add(CheckRow::not_applicable("id.normal_k3", "K1 = 0 => K3 = L_zeta psi = 0",
                                       "K1 != 0"));
        r.add(CheckRow::not_applicable("id.normal_k4", "K1 = 0 => K4 = L_zeta tau = 0",
                                       "K1 != 0"));
    }
    const bool taun_h = taun && r_h_full <= opts.tol;
    r.add(CheckRow::make("equiv.normal_kernel_h", "K1 = 0 <=> (kernel-normal and h = 0)",
                         normal == taun_h ? 0.0 : 1.0, 0.5,
                         std::string("normal=") + (normal ? "yes" : "no") + " kernel-normal=" +
                             (taun ? "yes" : "no") + " h=0:" +
                             (r_h_full <= opts.tol ? "yes" : "no")));
    r.add(CheckRow::make("tensorial.k1", "K1(fX,Y) = f K1(X,Y)", r_t_k1, opts.tol));
    r.add(CheckRow::make("tensorial.k2", "K2(fX,Y) = f K2(X,Y)", r_t_k2, opts.tol));
    r.add(CheckRow::make("tensorial.h", "h(fX) = f h(X)", r_t_h, opts.tol));
    r.label("tau_normal", taun ? "yes" : "no");
    r.label("normal", normal ? "yes" : "no");
    r.label("autoparallel", autop ? "yes" : "no");
    return r;
}

// ---- class detection ----------------------------------------------------------------

inline Report para_class_check(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);

    double r_contact = 0, r_dtau = 0, r_dpsi = 0, r_kenmotsu = 0, r_k1_full = 0, r_k1_kernel = 0,
           r_nzz = 0;
    double r_form_psas = 0, r_form_psas_covd = 0, r_form_pcos = 0, r_form_pkenm = 0;
    double r_form_pc_cr = 0, r_form_pcos_cr = 0, r_form_pkenm_cr = 0;
    double r_h_sym = 0, r_h_a = 0;

    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                r_contact = std::max(r_contact, std::abs(o.dtau(i, j) - o.Psi.val(i, j)));
                r_dtau = std::max(r_dtau, std::abs(o.dtau(i, j)));
            }
        r_dpsi = std::max(r_dpsi, max_abs_t(o.dPsi));
        const T3 two_tau_psi = wedge_1_2(o.tau, o.Psi.val);
        for (std::size_t idx = 0; idx < o.dPsi.size(); ++idx)
            r_kenmotsu = std::max(r_kenmotsu, std::abs(o.dPsi[idx] - 2.0 * two_tau_psi[idx]));
        r_k1_full = std::max(r_k1_full, max_abs_t(o.k1));
        r_k1_kernel = std::max(r_k1_kernel, detail::k1_kernel_max(o));
        r_nzz = std::max(r_nzz, max_abs(o.nab_zeta_zeta));

        // specialized covariant-derivative forms (componentwise)
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                for (int j = 0; j < d; ++j) {
                    const double lhs = o.cov_psi[idx3(d, i, k, j)];
                    double g_ij = o.g(i, j);
                    double g_xhx = 0.0;   // g(e_i - h e_i, e_j)
                    double g_hx = 0.0;    // g(h e_i, e_j)
                    double g_fx = 0.0;    // g(psi e_i, e_j)
                    double g_fxhx = 0.0;  // g(psi e_i + h e_i, e_j)
                    for (int m = 0; m < d; ++m) {
                        g_hx += o.g(m, j) * o.h(m, i);
                        g_fx += o.g(m, j) * o.psi(m, i);
                    }
                    g_xhx = g_ij - g_hx;
                    g_fxhx = g_fx + g_hx;
                    const double tau_j = o.tau[static_cast<std::size_t>(j)];
                    const double zeta_k = o.zeta[static_cast<std::size_t>(k)];
                    const double id_ki = (k == i ? 1.0 : 0.0);
                    // normal + paracontact: (nab_X psi)Y = -g(X,Y)zeta + tau(Y)X
                    r_form_psas = std::max(
                        r_form_psas, std::abs(lhs + g_ij * zeta_k - tau_j * id_ki));
                    // normal + closed forms: nab psi = 0
                    r_form_pcos = std::max(r_form_pcos, std::abs(lhs));
                    // normal + dPsi = 2 tau ^ Psi: (nab_X psi)Y = g(psiX,Y)zeta - tau(Y)psiX
                    r_form_pkenm = std::max(
                        r_form_pkenm, std::abs(lhs - g_fx * zeta_k + tau_j * o.psi(k, i)));
                    // paracontact + para-CR: (nab_X psi)Y = -g(X - hX,Y)zeta + tau(Y)(X - hX)
                    r_form_pc_cr = std::max(
                        r_form_pc_cr,
                        std::abs(lhs + g_xhx * zeta_k - tau_j * (id_ki - o.h(k, i))));
                    // closed forms + para-CR: (nab_X psi)Y = g(hX,Y)zeta - tau(Y)hX
                    r_form_pcos_cr = std::max(
                        r_form_pcos_cr, std::abs(lhs - g_hx * zeta_k + tau_j * o.h(k, i)));
                    // dPsi = 2 tau ^ Psi + para-CR:
                    //   (nab_X psi)Y = g(psiX + hX,Y)zeta - tau(Y)(psiX + hX)
                    r_form_pkenm_cr = std::max(
                        r_form_pkenm_cr,
                        std::abs(lhs - g_fxhx * zeta_k + tau_j * (o.psi(k, i) + o.h(k, i))));
                }
        // paracontact + para-Sasakian covariant form in terms of dtau
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    double lhs = 0.0, dt_fy = 0.0, dt_fz = 0.0;
                    for (int k = 0; k < d; ++k) lhs += o.g(k, l) * o.cov_psi[idx3(d, i, k, j)];
                    for (int m = 0; m < d; ++m) {
                        dt_fy += o.psi(m, j) * o.dtau(m, i);
                        dt_fz += o.psi(m, l) * o.dtau(m, i);
                    }
                    r_form_psas_covd = std::max(
                        r_form_psas_covd,
                        std::abs(lhs - dt_fy * o.tau[static_cast<std::size_t>(l)] +
                                 dt_fz * o.tau[static_cast<std::size_t>(j)]));
                }
        // h symmetry and the h = A psi = -psi A relations
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double ghab = 0.0, ghba = 0.0, apsi = 0.0, psia = 0.0;
                for (int k = 0; k < d; ++k) {
                    ghab += o.g(k, b) * o.h(k, a);
                    ghba += o.g(k, a) * o.h(k, b);
                    apsi += o.a_op(a, k) * o.psi(k, b);
                    psia += o.psi(a, k) * o.a_op(k, b);
                }
                r_h_sym = std::max(r_h_sym, std::abs(ghab - ghba));
                r_h_a = std::max(r_h_a, std::abs(o.h(a, b) - apsi));
                r_h_a = std::max(r_h_a, std::abs(o.h(a, b) + psia));
            }
    }

    const double tol = opts.tol;
    const bool taun = r_k1_kernel <= tol;
    const bool normal = r_k1_full <= tol;
    const bool paracontact = r_contact <= tol;
    const bool apcos = r_dtau <= tol && r_dpsi <= tol;
    const bool apkenm = r_dtau <= tol && r_kenmotsu <= tol;

    std::vector<std::string> classes;
    if (paracontact) classes.push_back("paracontact");
    if (apcos) classes.push_back("almost_para_cosymplectic");
    if (apkenm) classes.push_back("almost_para_kenmotsu");
    if (normal) classes.push_back("normal");
    if (paracontact && normal) classes.push_back("para_sasakian");
    if (apcos && normal) classes.push_back("para_cosymplectic");
    if (apkenm && normal) classes.push_back("para_kenmotsu");

    Report r;
    r.label("classes", classes.empty() ? "none" : [&] {
        std::string joined;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            if (i) joined += ",";
            joined += classes[i];
        }
        return joined;
    }());
    r.label("tau_normal", taun ? "yes" : "no");
    r.label("normal", normal ? "yes" : "no");
    r.label("autoparallel", r_nzz <= tol ? "yes" : "no");
    r.label("residual.dtau_minus_Psi", format_double(r_contact));
    r.label("residual.dtau", format_double(r_dtau));
    r.label("residual.dPsi", format_double(r_dpsi));
    r.label("residual.dPsi_minus_2tauPsi", format_double(r_kenmotsu));
    r.label("residual.K1", format_double(r_k1_full));

    const std::string psas_id = "(nab_X psi)Y = -g(X,Y)zeta + tau(Y)X";
    const std::string psas_covd_id =
        "g((nab_X psi)Y,Z) = dtau(psiY,X)tau(Z) - dtau(psiZ,X)tau(Y)";
    const std::string pcos_id = "nab psi = 0";
    const std::string pkenm_id = "(nab_X psi)Y = g(psiX,Y)zeta - tau(Y)psiX";
    const std::string pc_cr_id = "(nab_X psi)Y = -g(X - hX,Y)zeta + tau(Y)(X - hX)";
    const std::string pcos_cr_id = "(nab_X psi)Y = g(hX,Y)zeta - tau(Y)hX";
    const std::string pkenm_cr_id = "(nab_X psi)Y = g(psiX + hX,Y)zeta - tau(Y)(psiX + hX)";
    if (paracontact && normal) {
        r.add(CheckRow::make("form.para_sasakian", psas_id, r_form_psas, tol));
        r.add(CheckRow::make("form.para_sasakian_covd", psas_covd_id, r_form_psas_covd, tol));
    } else {
        r.add(CheckRow::not_applicable("form.para_sasakian", psas_id,
                                       "needs paracontact + normal"));
        r.add(CheckRow::not_applicable("form.para_sasakian_covd", psas_covd_id,
                                       "needs paracontact + normal"));
    }
    if (apcos && normal)
        r.add(CheckRow::make("form.para_cosymplectic", pcos_id, r_form_pcos, tol));
    else
        r.add(CheckRow::not_applicable("form.para_cosymplectic", pcos_id,
                                       "needs closed tau and Psi + normal"));
    if (apkenm && normal)
        r.add(CheckRow::make("form.para_kenmotsu", pkenm_id, r_form_pkenm, tol));
    else
        r.add(CheckRow::not_applicable("form.para_kenmotsu", pkenm_id,
                                       "needs dPsi = 2 tau ^ Psi, dtau = 0 + normal"));
    if (paracontact && taun)
        r.add(CheckRow::make("form.paracontact_cr", pc_cr_id, r_form_pc_cr, tol));
    else
        r.add(CheckRow::not_applicable("form.paracontact_cr", pc_cr_id,
                                       "needs paracontact + para-CR"));
    if (apcos && taun) {
        r.add(CheckRow::make("form.paracosymplectic_cr", pcos_cr_id, r_form_pcos_cr, tol));
        r.add(CheckRow::make("form.paracosymplectic_h", "h = A psi = -psi A,  A = -nab zeta",
                             r_h_a, tol));
    } else {
        r.add(CheckRow::not_applicable("form.paracosymplectic_cr", pcos_cr_id,
                                       "needs closed tau and Psi + para-CR"));
        r.add(CheckRow::not_applicable("form.paracosymplectic_h",
                                       "h = A psi = -psi A,  A = -nab zeta",
                                       "needs closed tau and Psi + para-CR"));
    }
    if (apkenm && taun)
        r.add(CheckRow::make("form.para_kenmotsu_cr", pkenm_cr_id, r_form_pkenm_cr, tol));
    else
        r.add(CheckRow::not_applicable("form.para_kenmotsu_cr", pkenm_cr_id,
                                       "needs dPsi = 2 tau ^ Psi, dtau = 0 + para-CR"));
    if ((paracontact || apcos || apkenm) && taun)
        r.add(CheckRow::make("form.h_symmetric", "g(hX,Y) = g(X,hY)", r_h_sym, tol));
    else
        r.add(CheckRow::not_applicable(
            "form.h_symmetric", "g(hX,Y) = g(X,hY)",
            "needs one of the three special classes + para-CR; asymmetry " +
                format_double(r_h_sym)));
    return r;
}

// ---- the product structure J on M x R ----------------------------------------------

/// J(X, f d/dt) = (psiX + f zeta, tau(X) d/dt) is an almost product structure
/// (J^2 = Id) on the cylinder over the chart. Its Nijenhuis tensor packages the
/// four torsion tensors: [J,J]((X,0),(Y,0)) = (K1(X,Y), K2(X,Y) d/dt) and
/// [J,J]((X,0),(0,d/dt)) = -((L_zeta psi)X, (L_zeta tau)(X) d/dt).
inline Report product_nijenhuis_check(const APCMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    const int dd = d + 1;
    MatE jm = zero_mat_e(dd);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
            jm[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                s.psi[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    for (int k = 0; k < d; ++k)
        jm[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] =
            s.zeta[static_cast<std::size_t>(k)];
    for (int j = 0; j < d; ++j)
        jm[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)] =
            s.tau[static_cast<std::size_t>(j)];

    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r_k12 = 0.0, r_k34 = 0.0, r_square = 0.0;
    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        std::vector<double> p_ext = p;
        p_ext.push_back(rng.uniform(-1.0, 1.0));  // the cylinder coordinate is inert
        JetContext ctx(p_ext);
        const MatJ j_j = eval_mat(ctx, jm);
        const MatD jv = values(j_j);
        const MatD j2 = jv * jv;
        for (int a = 0; a < dd; ++a)
            for (int b = 0; b < dd; ++b)
                r_square = std::max(r_square, std::abs(j2(a, b) - (a == b ? 1.0 : 0.0)));
        const T3 njj = nijenhuis(j_j);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k <= d; ++k) {
                    const double expect = k < d ? o.k1[idx3(d, k, i, j)] : o.k2(i, j);
                    r_k12 = std::max(r_k12, std::abs(njj[idx3(dd, k, i, j)] - expect));
                }
        for (int i = 0; i < d; ++i)
            for (int k = 0; k <= d; ++k) {
                const double expect = k < d ? -o.lie_zeta_psi(k, i)
                                            : -o.lie_zeta_tau[static_cast<std::size_t>(i)];
                r_k34 = std::max(r_k34, std::abs(njj[idx3(dd, k, i, d)] - expect));
            }
    }
    Report r;
    r.add(CheckRow::make("product.square", "J^2 = Id on the cylinder", r_square, 1e-9));
    r.add(CheckRow::make("product.k12",
                         "[J,J]((X,0),(Y,0)) = (K1(X,Y), K2(X,Y) d/dt)", r_k12, opts.tol));
    r.add(CheckRow::make("product.k34",
                         "[J,J]((X,0),(0,d/dt)) = -((L_zeta psi)X, (L_zeta tau)(X) d/dt)",
                         r_k34, opts.tol));
    return r;
}

// ---- model structures ---------------------------------------------------------------

/// Flat model: psi = +1 on the x-block, -1 on the y-block, 0 on the Reeb
/// direction; g pairs the two blocks hyperbolically. Everything is parallel.
inline APCMStructure flat_para_cosymplectic(int n) {
    const int d = 2 * n + 1;
    std::vector<std::string> coords;
    for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) coords.push_back("y" + std::to_string(i));
    coords.push_back("z");
    APCMStructure s;
    s.chart = make_chart("flat_para_cosymplectic_" + std::to_string(n), coords);
    s.psi = zero_mat_e(d);
    s.g = zero_mat_e(d);
    s.zeta = zero_vec_e(d);
    s.tau = zero_vec_e(d);
    for (int i = 0; i < n; ++i) {
        s.psi[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr::constant(1.0);
        s.psi[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(n + i)] =
            Expr::constant(-1.0);
        s.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = Expr::constant(0.5);
        s.g[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i)] = Expr::constant(0.5);
    }
    s.g[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(d - 1)] = Expr::constant(1.0);
    s.zeta[static_cast<std::size_t>(d - 1)] = Expr::constant(1.0);
    s.tau[static_cast<std::size_t>(d - 1)] = Expr::constant(1.0);
    return s;
}

/// Three-dimensional normal structure whose one-form is a contact form with
/// dtau = Psi: the hyperbolic analogue of the standard contact structure on
/// R^3, with psi(d/dx) = d/dx + y d/dz, psi(d/dy) = -d/dy.
inline APCMStructure para_sasakian() {
    const Expr y = Expr::coord(1);
    APCMStructure s;
    s.chart = make_chart("para_sasakian_dim3", {"x", "y", "z"});
    s.psi = zero_mat_e(3);
    s.g = zero_mat_e(3);
    s.zeta = zero_vec_e(3);
    s.tau = zero_vec_e(3);
    s.psi[0][0] = Expr::constant(1.0);
    s.psi[2][0] = y;
    s.psi[1][1] = Expr::constant(-1.0);
    s.zeta[2] = Expr::constant(1.0);
    s.tau[0] = Expr::constant(-1.0) * y;
    s.tau[2] = Expr::constant(1.0);
    s.g[0][0] = y * y;
    s.g[0][1] = Expr::constant(-0.5);
    s.g[1][0] = Expr::constant(-0.5);
    s.g[0][2] = Expr::constant(-1.0) * y;
    s.g[2][0] = Expr::constant(-1.0) * y;
    s.g[2][2] = Expr::constant(1.0);
    return s;
}

/// Warped product over the flat model: g = dz^2 + e^{2z} (hyperbolic pairing),
/// normal with dtau = 0 and dPsi = 2 tau ^ Psi.
inline APCMStructure para_kenmotsu() {
    const Expr w = exp(Expr::constant(2.0) * Expr::coord(2));
    APCMStructure s;
    s.chart = make_chart("para_kenmotsu_dim3", {"x", "y", "z"});
    s.psi = zero_mat_e(3);
    s.g = zero_mat_e(3);
    s.zeta = zero_vec_e(3);
    s.tau = zero_vec_e(3);
    s.psi[0][0] = Expr::constant(1.0);
    s.psi[1][1] = Expr::constant(-1.0);
    s.zeta[2] = Expr::constant(1.0);
    s.tau[2] = Expr::constant(1.0);
    s.g[0][1] = Expr::constant(0.5) * w;
    s.g[1][0] = Expr::constant(0.5) * w;
    s.g[2][2] = Expr::constant(1.0);
    return s;
}

/// Paracontact structure with autoparallel Reeb field, nonzero nilpotent h
/// (h^2 = 0) and curvature R(X,Y)zeta = kappa(tau(Y)X - tau(X)Y) +
/// mu(tau(Y)hX - tau(X)hY) for (kappa, mu) = (-1, 2). Not normal, but
/// kernel-normal (the eigendistributions are line fields).
inline APCMStructure kappa_mu_example() {
    const Expr y = Expr::coord(1);
    const Expr z = Expr::coord(2);
    APCMStructure s;
    s.chart = make_chart("kappa_mu_dim3", {"x", "y", "z"});
    s.psi = zero_mat_e(3);
    s.g = zero_mat_e(3);
    s.zeta = zero_vec_e(3);
    s.tau = zero_vec_e(3);
    s.psi[0][0] = Expr::constant(1.0);
    s.psi[1][0] = Expr::constant(2.0) * z;
    s.psi[2][0] = y;
    s.psi[1][1] = Expr::constant(-1.0);
    s.zeta[2] = Expr::constant(1.0);
    s.tau[0] = Expr::constant(-1.0) * y;
    s.tau[2] = Expr::constant(1.0);
    s.g[0][0] = y * y + z;
    s.g[0][1] = Expr::constant(-0.5);
    s.g[1][0] = Expr::constant(-0.5);
    s.g[0][2] = Expr::constant(-1.0) * y;
    s.g[2][0] = Expr::constant(-1.0) * y;
    s.g[2][2] = Expr::constant(1.0);
    return s;
}

} // namespace crgeo
