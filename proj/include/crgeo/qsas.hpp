#pragma once

// Quasi-Sasakian structures (normal, closed fundamental form): the two
// covariant-derivative formulas, the Reeb-derivative identity, the
// parallelism distribution C = {X : nab_X phi = 0} with its foliation checks,
// and the Heisenberg-type example family with its frame tables.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "crgeo/acm.hpp"
#include "crgeo/calculus.hpp"
#include "crgeo/chart.hpp"
#include "crgeo/errors.hpp"
#include "crgeo/expr.hpp"
#include "crgeo/linalg.hpp"
#include "crgeo/report.hpp"
#include "crgeo/rng.hpp"
#include "crgeo/tensor.hpp"

namespace crgeo {

// ---- Heisenberg-type family -------------------------------------------------------

/// Quadratic-form coefficients of the family: eta = dz - a_{ji} y^i dx^j on
/// R^{2n+1} with coordinates (x^1..x^n, y^1..y^n, z).
struct HeisenbergSpec {
    int n = 1;
    MatD a;  // n x n, symmetric
};

inline ACMStructure heisenberg(const HeisenbergSpec& spec) {
    const int n = spec.n;
    if (n < 1) throw GateError("heisenberg family needs n >= 1");
    if (spec.a.rows() != n || spec.a.cols() != n)
        throw GateError("heisenberg coefficient matrix must be n x n");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(spec.a(i, j) - spec.a(j, i)) > 1e-12)
                throw GateError("heisenberg coefficient matrix must be symmetric");
    const int d = 2 * n + 1;
    std::vector<std::string> coords;
    coords.reserve(static_cast<std::size_t>(d));
    for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) coords.push_back("y" + std::to_string(i));
    coords.push_back("z");

    ACMStructure s;
    s.chart = make_chart("heisenberg_n" + std::to_string(n), coords);

    // u_j = a_{jm} y^m
    std::vector<Expr> u(static_cast<std::size_t>(n), Expr::constant(0.0));
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
            u[static_cast<std::size_t>(j)] =
                u[static_cast<std::size_t>(j)] + Expr::constant(spec.a(j, m)) * Expr::coord(n + m);

    s.eta = zero_vec_e(d);
    for (int j = 0; j < n; ++j)
        s.eta[static_cast<std::size_t>(j)] = Expr::constant(-1.0) * u[static_cast<std::size_t>(j)];
    s.eta[static_cast<std::size_t>(2 * n)] = Expr::constant(1.0);

    s.xi = zero_vec_e(d);
    s.xi[static_cast<std::size_t>(2 * n)] = Expr::constant(1.0);

    // phi d_{x^l} = -d_{y^l};  phi d_{y^k} = d_{x^k} + u_k d_z;  phi d_z = 0
    s.phi = zero_mat_e(d);
    for (int l = 0; l < n; ++l)
        s.phi[static_cast<std::size_t>(n + l)][static_cast<std::size_t>(l)] =
            Expr::constant(-1.0);
    for (int k = 0; k < n; ++k) {
        s.phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(n + k)] = Expr::constant(1.0);
        s.phi[static_cast<std::size_t>(2 * n)][static_cast<std::size_t>(n + k)] =
            u[static_cast<std::size_t>(k)];
    }

    // g = eta (x) eta + 1/2 sum (dx (x) dx + dy (x) dy)
    s.g = zero_mat_e(d);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            Expr v = u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(l)];
            if (j == l) v = v + Expr::constant(0.5);
            s.g[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = v;
        }
    for (int i = 0; i < n; ++i)
        s.g[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(n + i)] =
            Expr::constant(0.5);
    for (int j = 0; j < n; ++j) {
        const Expr v = Expr::constant(-1.0) * u[static_cast<std::size_t>(j)];
        s.g[static_cast<std::size_t>(j)][static_cast<std::size_t>(2 * n)] = v;
        s.g[static_cast<std::size_t>(2 * n)][static_cast<std::size_t>(j)] = v;
    }
    s.g[static_cast<std::size_t>(2 * n)][static_cast<std::size_t>(2 * n)] = Expr::constant(1.0);
    return s;
}

inline ACMStructure alpha_sasakian(int n, double alpha) {
    HeisenbergSpec spec;
    spec.n = n;
    spec.a = MatD(n, n);
    for (int i = 0; i < n; ++i) spec.a(i, i) = alpha;
    return heisenberg(spec);
}

/// The orthonormal frame fields V_1..V_2n, xi of the family:
/// V_k = sqrt(2) d_{y^k}, V_{n+l} = sqrt(2)(u_l d_z + d_{x^l}).
inline std::vector<VecE> heisenberg_frame(const HeisenbergSpec& spec) {
    const int n = spec.n;
    const int d = 2 * n + 1;
    const double r2 = std::sqrt(2.0);
    std::vector<VecE> frame;
    frame.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < n; ++k) {
        VecE v = zero_vec_e(d);
        v[static_cast<std::size_t>(n + k)] = Expr::constant(r2);
        frame.push_back(std::move(v));
    }
    for (int l = 0; l < n; ++l) {
        VecE v = zero_vec_e(d);
        v[static_cast<std::size_t>(l)] = Expr::constant(r2);
        Expr u = Expr::constant(0.0);
        for (int m = 0; m < n; ++m)
            u = u + Expr::constant(spec.a(l, m)) * Expr::coord(n + m);
        v[static_cast<std::size_t>(2 * n)] = Expr::constant(r2) * u;
        frame.push_back(std::move(v));
    }
    VecE xi = zero_vec_e(d);
    xi[static_cast<std::size_t>(2 * n)] = Expr::constant(1.0);
    frame.push_back(std::move(xi));
    return frame;
}

/// Frame tables of the family: orthonormality, the commutator table
/// [V_i, V_{n+j}] = 2 a_{ji} d_z (all other brackets zero), the d eta table
/// d eta(phi V_i, V_j) = a_{ij}, the Levi signature (2k, 2l) from the
/// signature (k, l) of a, and rank 2 rank(a) + 1.
inline Report heisenberg_family_checks(const HeisenbergSpec& spec, const ProbeOptions& opts = {}) {
    const ACMStructure s = heisenberg(spec);
    const int n = spec.n;
    const int d = 2 * n + 1;
    const std::vector<VecE> frame = heisenberg_frame(spec);
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);

    double r_comm = 0.0, r_deta = 0.0, r_ortho = 0.0, r_n1 = 0.0;
    bool levi_ok = true, rank_ok = true;
    Signature levi_sig{};
    int rank_seen = -1;

    const Signature a_sig = signature_sym(spec.a, 1e-9);

    for (const auto& p : pts) {
        const ACMPointData o = acm_point(s, p);
        JetContext ctx(p);
        std::vector<VecJ> fj;
        fj.reserve(frame.size());
        for (const auto& f : frame) fj.push_back(eval_vec(ctx, f));

        // commutators: [V_i, V_{n+j}] = 2 a_{ji} d_z, everything else zero
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                std::vector<double> want(static_cast<std::size_t>(d), 0.0);
                if (a < n && b >= n && b < 2 * n)
                    want[static_cast<std::size_t>(2 * n)] = 2.0 * spec.a(b - n, a);
                const std::vector<double> got =
                    bracket(fj[static_cast<std::size_t>(a)], fj[static_cast<std::size_t>(b)]);
                for (int k = 0; k < d; ++k)
                    r_comm = std::max(r_comm, std::abs(got[static_cast<std::size_t>(k)] -
                                                       want[static_cast<std::size_t>(k)]));
            }

        // orthonormality of (V_1..V_2n, xi)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const double gv = form2_apply(o.g, values(fj[static_cast<std::size_t>(a)]),
                                              values(fj[static_cast<std::size_t>(b)]));
                r_ortho = std::max(r_ortho, std::abs(gv - (a == b ? 1.0 : 0.0)));
            }

        // d eta table against the coefficient matrix
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const std::vector<double> vi = values(fj[static_cast<std::size_t>(i)]);
                const std::vector<double> vj = values(fj[static_cast<std::size_t>(j)]);
                const std::vector<double> vni = values(fj[static_cast<std::size_t>(n + i)]);
                const std::vector<double> vnj = values(fj[static_cast<std::size_t>(n + j)]);
                const std::vector<double> fvi = mat_apply(o.phi, vi);
                const std::vector<double> fvni = mat_apply(o.phi, vni);
                // d eta(phi V_i, V_j) = a_ij
                r_deta = std::max(r_deta,
                                  std::abs(form2_apply(o.deta, fvi, vj) - spec.a(i, j)));
                // d eta(phi V_{n+i}, V_{n+j}) = a_ij
                r_deta = std::max(r_deta,
                                  std::abs(form2_apply(o.deta, fvni, vnj) - spec.a(i, j)));
                // mixed terms vanish
                r_deta = std::max(r_deta, std::abs(form2_apply(o.deta, fvi, vnj)));
                r_deta = std::max(r_deta, std::abs(form2_apply(o.deta, fvni, vj)));
            }

        r_n1 = std::max(r_n1, max_abs_t(o.n1));

        // Levi signature and rank
        const LeviData lv = levi_form(o);
        if (lv.sig.positive != 2 * a_sig.positive || lv.sig.negative != 2 * a_sig.negative)
            levi_ok = false;
        levi_sig = lv.sig;
        int p_max = 0;
        for (int q = n; q >= 0; --q) {
            if (max_wedge_1_2p(o.eta, o.deta, q) > 1e-9) {
                p_max = q;
                break;
            }
        }
        const int r_here = 2 * p_max + 1;
        if (rank_seen < 0) rank_seen = r_here;
        if (r_here != rank_seen || r_here != 2 * rank(spec.a, 1e-9) + 1) rank_ok = false;
    }

    Report r;
    r.add(CheckRow::make("family.commutators",
                         "[V_i, V_{n+j}] = 2 a_{ji} d_z and all other frame brackets vanish",
                         r_comm, 1e-10));
    r.add(CheckRow::make("family.orthonormal", "(V_1..V_2n, xi) is g-orthonormal", r_ortho, 1e-9));
    r.add(CheckRow::make("family.deta_table",
                         "deta(phi V_i, V_j) = deta(phi V_{n+i}, V_{n+j}) = a_ij, mixed terms 0",
                         r_deta, 1e-9));
    r.add(CheckRow::make("family.normal", "N1 = 0 (the coefficient matrix is symmetric)", r_n1,
                         1e-8));
    r.add(CheckRow::make("family.levi_signature",
                         "Levi signature = (2k, 2l) for (k, l) = signature of a",
                         levi_ok ? 0.0 : 1.0, 0.5,
                         "levi " + detail::signature_str(levi_sig) + ", a " +
                             detail::signature_str(a_sig)));
    r.add(CheckRow::make("family.rank", "rank = 2 rank(a) + 1", rank_ok ? 0.0 : 1.0, 0.5,
                         "rank " + std::to_string(rank_seen) + ", rank(a) = " +
                             std::to_string(rank(spec.a, 1e-9))));
    r.label("rank", std::to_string(rank_seen));
    r.label("levi_signature", detail::signature_str(levi_sig));
    return r;
}

// ---- quasi-Sasakian covariant-derivative formulas ------------------------------------

namespace detail {

struct QsGate {
    bool normal = false;
    bool closed = false;
    double n1 = 0.0, dphi = 0.0;
    bool ok() const { return normal && closed; }
};

inline QsGate qs_gate(const ACMStructure& s, const ProbeOptions& opts) {
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    QsGate g;
    for (const auto& p : pts) {
        const ACMPointData o = acm_point(s, p);
        g.n1 = std::max(g.n1, max_abs_t(o.n1));
        g.dphi = std::max(g.dphi, max_abs_t(o.dPhi));
    }
    g.normal = g.n1 <= opts.tol;
    g.closed = g.dphi <= opts.tol;
    return g;
}

} // namespace detail

inline Report qs_formulas_check(const ACMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_acm_dim(s.chart);
    const int d = s.chart.dim();
    const detail::QsGate gate = detail::qs_gate(s, opts);
    const std::string id_covd = "g((nab_X phi)Y,Z) = deta(phiY,X)eta(Z) - deta(phiZ,X)eta(Y)";
    const std::string id_variant =
        "g((nab_X phi)Y,Z) = -eta(Z)(nab_X eta)(phiY) + eta(Y)(nab_X eta)(phiZ)";
    const std::string id_xi = "g(nab_X xi, Y) = deta(X,Y)";
    Report r;
    r.label("quasi_sasakian", gate.ok() ? "yes" : "no");
    if (!gate.ok()) {
        const std::string note = "needs a quasi-Sasakian structure (normal, dPhi = 0); N1 " +
                                 format_double(gate.n1) + ", dPhi " + format_double(gate.dphi);
        r.add(CheckRow::not_applicable("qs.covd", id_covd, note));
        r.add(CheckRow::not_applicable("qs.covd_variant", id_variant, note));
        r.add(CheckRow::not_applicable("qs.nabla_xi", id_xi, note));
        return r;
    }
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r_covd = 0.0, r_variant = 0.0, r_xi = 0.0;
    for (const auto& p : pts) {
        const ACMPointData o = acm_point(s, p);
        const MatD ne = covariant_oneform(d, o.conn.gamma, o.eta_j);  // (nab_i eta)_j
        // DF(j, i) = deta(phi e_j, e_i); NF(i, j) = (nab_i eta)(phi e_j)
        MatD df(d, d), nf(d, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                double a = 0.0, b = 0.0;
                for (int m = 0; m < d; ++m) {
                    a += o.deta(m, i) * o.phi(m, j);
                    b += ne(i, m) * o.phi(m, j);
                }
                df(j, i) = a;
                nf(i, j) = b;
            }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                for (int l = 0; l < d; ++l) {
                    double lhs = 0.0;
                    for (int k = 0; k < d; ++k) lhs += o.g(k, l) * o.cov_phi[idx3(d, i, k, j)];
                    const double rhs = df(j, i) * o.eta[static_cast<std::size_t>(l)] -
                                       df(l, i) * o.eta[static_cast<std::size_t>(j)];
                    const double rhs2 = -o.eta[static_cast<std::size_t>(l)] * nf(i, j) +
                                        o.eta[static_cast<std::size_t>(j)] * nf(i, l);
                    r_covd = std::max(r_covd, std::abs(lhs - rhs));
                    r_variant = std::max(r_variant, std::abs(lhs - rhs2));
                }
                double gx = 0.0;
                for (int k = 0; k < d; ++k) gx += o.g(k, j) * o.nabla_xi(i, k);
                r_xi = std::max(r_xi, std::abs(gx - o.deta(i, j)));
            }
    }
    r.add(CheckRow::make("qs.covd", id_covd, r_covd, opts.tol));
    r.add(CheckRow::make("qs.covd_variant", id_variant, r_variant, opts.tol));
    r.add(CheckRow::make("qs.nabla_xi", id_xi, r_xi, opts.tol));
    return r;
}

// ---- the parallelism distribution C and its foliation ---------------------------------

/// Pointwise basis of C_p = {X : (nab_X phi)(p) = 0}, the null space of the
/// linear map X -> components of nab_X phi (singular values below sv_tol are
/// treated as zero).
struct FoliationProbe {
    std::vector<double> point;
    MatD basis;  // d x dim(C_p), orthonormal columns
};

inline FoliationProbe c_distribution(const ACMStructure& s, const std::vector<double>& p,
                                     double sv_tol = 1e-8) {
    const int d = s.chart.dim();
    const ACMPointData o = acm_point(s, p);
    MatD m(d * d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) m(k * d + j, i) = o.cov_phi[idx3(d, i, k, j)];
    FoliationProbe probe;
    probe.point = p;
    probe.basis = null_space(m, sv_tol);
    return probe;
}

inline Report foliation_checks(const ACMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_acm_dim(s.chart);
    const int d = s.chart.dim();
    const detail::QsGate gate = detail::qs_gate(s, opts);
    const std::string id_dim = "dim C = dim M - r + 1";
    const std::string id_inv = "phi C c C";
    const std::string id_invol = "[C, C] c C (probe-level, constant-coefficient spanning fields)";
    const std::string id_xi = "xi in C";
    Report r;
    r.label("quasi_sasakian", gate.ok() ? "yes" : "no");
    if (!gate.ok()) {
        const std::string note = "needs a quasi-Sasakian structure (normal, dPhi = 0); N1 " +
                                 format_double(gate.n1) + ", dPhi " + format_double(gate.dphi);
        r.add(CheckRow::not_applicable("foliation.dim", id_dim, note));
        r.add(CheckRow::not_applicable("foliation.phi_invariant", id_inv, note));
        r.add(CheckRow::not_applicable("foliation.involutive", id_invol, note));
        r.add(CheckRow::not_applicable("foliation.xi_in_c", id_xi, note));
        return r;
    }
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    const int n = (d - 1) / 2;
    double r_phi_inv = 0.0, r_invol = 0.0, r_xi_in = 0.0;
    int dim_c = -1;
    bool dim_const = true, dim_matches = true;
    for (const auto& p : pts) {
        const ACMPointData o = acm_point(s, p);
        const FoliationProbe probe = c_distribution(s, p);
        const MatD& b = probe.basis;
        const int m = b.cols();
        if (dim_c < 0) dim_c = m;
        if (m != dim_c) dim_const = false;

        // rank from the frame values of eta ^ (deta)^p
        int p_max = 0;
        for (int q = n; q >= 0; --q) {
            if (max_wedge_1_2p(o.eta, o.deta, q) > 1e-9) {
                p_max = q;
                break;
            }
        }
        if (m != d - (2 * p_max + 1) + 1) dim_matches = false;

        auto off_c = [&](const std::vector<double>& w) {
            std::vector<double> res = w;
            for (int c = 0; c < m; ++c) {
                double proj = 0.0;
                for (int k = 0; k < d; ++k) proj += b(k, c) * w[static_cast<std::size_t>(k)];
                for (int k = 0; k < d; ++k) res[static_cast<std::size_t>(k)] -= proj * b(k, c);
            }
            return max_abs(res);
        };

        for (int c = 0; c < m; ++c) {
            std::vector<double> v(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = b(k, c);
            r_phi_inv = std::max(r_phi_inv, off_c(mat_apply(o.phi, v)));
        }
        r_xi_in = std::max(r_xi_in, off_c(o.xi));

        // involutivity with constant-coefficient spanning fields fitted at p
        JetContext ctx(p);
        std::vector<VecJ> cfields;
        cfields.reserve(static_cast<std::size_t>(m));
        for (int c = 0; c < m; ++c) {
            std::vector<double> v(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = b(k, c);
            cfields.push_back(const_vec_jet(d, v));
        }
        for (int a = 0; a < m; ++a)
            for (int c = a + 1; c < m; ++c)
                r_invol = std::max(r_invol, off_c(bracket(cfields[static_cast<std::size_t>(a)],
                                                          cfields[static_cast<std::size_t>(c)])));
    }
    r.add(CheckRow::make("foliation.dim", id_dim, (dim_const && dim_matches) ? 0.0 : 1.0, 0.5,
                         "dim C = " + std::to_string(dim_c)));
    r.add(CheckRow::make("foliation.phi_invariant", id_inv, r_phi_inv, opts.tol));
    r.add(CheckRow::make("foliation.involutive", id_invol, r_invol, opts.tol));
    r.add(CheckRow::make("foliation.xi_in_c", id_xi, r_xi_in, opts.tol));
    r.label("dim_c", std::to_string(dim_c));
    return r;
}

} // namespace crgeo
