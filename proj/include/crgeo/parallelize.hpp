#pragma once

// Connections that make the whole almost contact metric structure parallel.
// The construction deforms Levi-Civita twice: nab1 = nab - T1 kills nab phi,
// nab xi, nab eta; the metric correction T2, defined by
// g(T2_X Y, Z) = -(1/2)(nab1_X g)(Y,Z), restores metricity without breaking
// the first stage. Torsion conditions characterize the connection uniquely on
// structures with closed fundamental form, and the set of all such
// parallelizations is an affine space modeled on tensors T with
// T_X phi Y = phi T_X Y, T_X xi = 0, g(T_X Y,Z) + g(Y,T_X Z) = 0.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "crgeo/acm.hpp"
#include "crgeo/apcm.hpp"
#include "crgeo/calculus.hpp"
#include "crgeo/errors.hpp"
#include "crgeo/expr.hpp"
#include "crgeo/linalg.hpp"
#include "crgeo/report.hpp"
#include "crgeo/rng.hpp"
#include "crgeo/tensor.hpp"

namespace crgeo {

enum class DeformationKind {
    levi_civita,  // no deformation at all
    full,         // T1 followed by the metric correction T2
};

/// A connection derived from the structure's Levi-Civita connection by the
/// two-stage deformation, optionally shifted by an extra difference term
/// T_X Y = eta(X) K Y (used to walk the affine space of parallelizations).
struct DeformedConnection {
    ACMStructure s;
    DeformationKind kind = DeformationKind::full;
    bool has_shift = false;
    MatE shift_k;  // the endomorphism K of the shift term
};

/// Everything the checks need about a deformed connection at one point.
/// All rank-3 tables use idx3(k, i, j) = (T_{e_i} e_j)^k except nab1_g,
/// which keeps the covariant_metric layout idx3(i, j, k).
struct ConnPointData {
    ACMPointData o;
    T3 t1;           // first deformation tensor
    T3 gamma1;       // Levi-Civita minus T1
    T3 nab1_g;       // (nab1_i g)_jk
    T3 t2;           // metric correction
    T3 gamma_tilde;  // gamma1 minus T2
    T3 gamma;        // final table (tilde or Levi-Civita, plus any shift)
};

/// The first deformation tensor, assembled from point data:
/// T1_X Y = -phi F_X Y - eta(X) B Y - eta(Y)(phi hbar X + B X)
///          + (1/2) eta(Y) phi (nab_xi phi) X
///          + (deta(Y,X) - (1/2)(L_xi g)(Y,X)) xi.
inline T3 t1_components(const ACMPointData& o) {
    const int d = o.d;
    T3 t1(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
              static_cast<std::size_t>(d),
          0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double v = 0.0;
                for (int l = 0; l < d; ++l) v -= o.phi(k, l) * o.f_ten[idx3(d, l, i, j)];
                v -= o.eta[static_cast<std::size_t>(i)] * o.b_op(k, j);
                double phb = 0.0, pnx = 0.0;
                for (int m = 0; m < d; ++m) {
                    phb += o.phi(k, m) * o.hbar(m, i);
                    pnx += o.phi(k, m) * o.nab_xi_phi(m, i);
                }
                v -= o.eta[static_cast<std::size_t>(j)] * (phb + o.b_op(k, i));
                v += 0.5 * o.eta[static_cast<std::size_t>(j)] * pnx;
                v += (o.deta(j, i) - 0.5 * o.lie_xi_g(j, i)) * o.xi[static_cast<std::size_t>(k)];
                t1[idx3(d, k, i, j)] = v;
            }
    return t1;
}

inline ConnPointData conn_point(const DeformedConnection& c, const std::vector<double>& p) {
    ConnPointData cp;
    cp.o = acm_point(c.s, p);
    const int d = cp.o.d;
    const std::size_t sz = static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                           static_cast<std::size_t>(d);
    if (c.kind == DeformationKind::levi_civita) {
        cp.t1.assign(sz, 0.0);
        cp.gamma1 = cp.o.conn.gamma;
        cp.nab1_g.assign(sz, 0.0);  // Levi-Civita is metric
        cp.t2.assign(sz, 0.0);
        cp.gamma_tilde = cp.o.conn.gamma;
    } else {
        cp.t1 = t1_components(cp.o);
        cp.gamma1.resize(sz);
        for (std::size_t a = 0; a < sz; ++a) cp.gamma1[a] = cp.o.conn.gamma[a] - cp.t1[a];
        cp.nab1_g = covariant_metric(d, cp.gamma1, cp.o.g_j);
        cp.t2.assign(sz, 0.0);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double v = 0.0;
                    for (int cc = 0; cc < d; ++cc)
                        v += cp.o.g_inv(k, cc) * cp.nab1_g[idx3(d, i, j, cc)];
                    cp.t2[idx3(d, k, i, j)] = -0.5 * v;
                }
        cp.gamma_tilde.resize(sz);
        for (std::size_t a = 0; a < sz; ++a) cp.gamma_tilde[a] = cp.gamma1[a] - cp.t2[a];
    }
    cp.gamma = cp.gamma_tilde;
    if (c.has_shift) {
        JetContext ctx(p);
        const MatD kv = values(eval_mat(ctx, c.shift_k));
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    cp.gamma[idx3(d, k, i, j)] +=
                        cp.o.eta[static_cast<std::size_t>(i)] * kv(k, j);
    }
    return cp;
}

inline DeformedConnection levi_civita_connection(const ACMStructure& s) {
    DeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::levi_civita;
    return c;
}

/// Adds the difference term T_X Y = eta(X) K Y on top of an existing
/// connection; K is admissible iff it commutes with phi, kills xi, and is
/// g-skew.
inline DeformedConnection shift_connection(const DeformedConnection& base, const MatE& k) {
    DeformedConnection c = base;
    c.has_shift = true;
    c.shift_k = k;
    return c;
}

namespace detail {

struct ParallelGate {
    bool eta_normal = false;
    bool autoparallel = false;
    double n1_kernel = 0.0;
    double lie_eta = 0.0;
    bool ok() const { return eta_normal && autoparallel; }
    std::string diagnostic() const {
        return std::string("kernel-normal: ") + (eta_normal ? "yes" : "no") + " (residual " +
               format_double(n1_kernel) + "), autoparallel Reeb: " +
               (autoparallel ? "yes" : "no") + " (L_xi eta residual " + format_double(lie_eta) +
               ")";
    }
};

inline ParallelGate parallel_gate(const ACMStructure& s, const ProbeOptions& opts) {
    require_acm_dim(s.chart);
    const int d = s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    ParallelGate g;
    for (const auto& p : pts) {
        const ACMPointData o = acm_point(s, p);
        const KernelBasis kb = kernel_basis(o.eta, o.xi);
        for (int a = 0; a < d - 1; ++a)
            for (int b = 0; b < d - 1; ++b) {
                std::vector<double> xa(static_cast<std::size_t>(d)),
                    xb(static_cast<std::size_t>(d));
                for (int m = 0; m < d; ++m) {
                    xa[static_cast<std::size_t>(m)] = kb.basis(m, a);
                    xb[static_cast<std::size_t>(m)] = kb.basis(m, b);
                }
                g.n1_kernel = std::max(g.n1_kernel, max_abs(n1_value(o, xa, xb)));
            }
        g.lie_eta = std::max(g.lie_eta, max_abs(o.lie_xi_eta));
    }
    g.eta_normal = g.n1_kernel <= opts.tol;
    g.autoparallel = g.lie_eta <= opts.tol;
    return g;
}

} // namespace detail

/// Builds the structure-parallelizing connection. Refuses (throws GateError)
/// when the structure is not kernel-normal with autoparallel Reeb field —
/// outside that class the construction theorem does not apply.
inline DeformedConnection build_tanaka_like(const ACMStructure& s, const ProbeOptions& opts = {}) {
    const detail::ParallelGate gate = detail::parallel_gate(s, opts);
    if (!gate.ok())
        throw GateError("parallelizing connection needs a kernel-normal structure with "
                        "autoparallel Reeb field; " +
                        gate.diagnostic());
    DeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::full;
    return c;
}

/// Residuals of nab phi, nab xi, nab eta, nab g for the connection's final
/// Christoffel table.
inline Report verify_parallel(const DeformedConnection& c, const ProbeOptions& opts = {}) {
    const int d = c.s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, c.s.chart, opts.points);
    double r_phi = 0, r_xi = 0, r_eta = 0, r_g = 0;
    for (const auto& p : pts) {
        const ConnPointData cp = conn_point(c, p);
        r_phi = std::max(r_phi, max_abs_t(covariant_affinor(d, cp.gamma, cp.o.phi_j)));
        r_xi = std::max(r_xi, covariant_vec(d, cp.gamma, cp.o.xi_j).max_abs());
        r_eta = std::max(r_eta, covariant_oneform(d, cp.gamma, cp.o.eta_j).max_abs());
        r_g = std::max(r_g, max_abs_t(covariant_metric(d, cp.gamma, cp.o.g_j)));
    }
    Report r;
    r.add(CheckRow::make("conn.phi", "nab phi = 0", r_phi, opts.tol));
    r.add(CheckRow::make("conn.xi", "nab xi = 0", r_xi, opts.tol));
    r.add(CheckRow::make("conn.eta", "nab eta = 0", r_eta, opts.tol));
    r.add(CheckRow::make("conn.g", "nab g = 0", r_g, opts.tol));
    r.label("kind", c.kind == DeformationKind::levi_civita ? "levi_civita" : "full");
    return r;
}

/// The full two-stage construction with every intermediate claim checked:
/// stage one makes phi, xi, eta parallel and satisfies the two g-defect
/// symmetry relations; the metric correction then makes g parallel while
/// preserving stage one. Gate failures produce n/a rows (build_tanaka_like
/// refuses instead).
inline Report parallelization_report(const ACMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_acm_dim(s.chart);
    const int d = s.chart.dim();
    const detail::ParallelGate gate = detail::parallel_gate(s, opts);
    Report r;
    r.label("eta_normal", gate.eta_normal ? "yes" : "no");
    r.label("autoparallel", gate.autoparallel ? "yes" : "no");
    const std::vector<std::pair<std::string, std::string>> ids = {
        {"par.nab1_phi", "nab1 phi = 0 with nab1 = nab - T1"},
        {"par.nab1_xi", "nab1 xi = 0"},
        {"par.nab1_eta", "nab1 eta = 0"},
        {"par.nab1_g_phiphi", "(nab1_X g)(phiY,phiZ) = (nab1_X g)(Y,Z)"},
        {"par.nab1_g_skew", "(nab1_X g)(phiY,Z) + (nab1_X g)(Y,phiZ) = 0"},
        {"par.nab1_g_alg", "(nab1_X g)(Y,Z) = g(T1_XY,Z) + g(Y,T1_XZ)"},
        {"par.t2_def", "g(T2_XY,Z) = -(1/2)(nab1_X g)(Y,Z)"},
        {"par.tilde_phi", "tilde-nab phi = 0"},
        {"par.tilde_xi", "tilde-nab xi = 0"},
        {"par.tilde_eta", "tilde-nab eta = 0"},
        {"par.tilde_g", "tilde-nab g = 0"},
        {"par.b_commute", "phi B = B phi"},
    };
    if (!gate.ok()) {
        const std::string note =
            "construction needs a kernel-normal structure with autoparallel Reeb; " +
            gate.diagnostic();
        for (const auto& [id, identity] : ids) r.add(CheckRow::not_applicable(id, identity, note));
        return r;
    }
    DeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::full;
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r1_phi = 0, r1_xi = 0, r1_eta = 0, r_phiphi = 0, r_skew = 0, r_alg = 0, r_t2 = 0;
    double rt_phi = 0, rt_xi = 0, rt_eta = 0, rt_g = 0, r_b = 0;
    for (const auto& p : pts) {
        const ConnPointData cp = conn_point(c, p);
        const ACMPointData& o = cp.o;
        r1_phi = std::max(r1_phi, max_abs_t(covariant_affinor(d, cp.gamma1, o.phi_j)));
        r1_xi = std::max(r1_xi, covariant_vec(d, cp.gamma1, o.xi_j).max_abs());
        r1_eta = std::max(r1_eta, covariant_oneform(d, cp.gamma1, o.eta_j).max_abs());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    double phiphi = 0.0, skew = 0.0;
                    for (int m = 0; m < d; ++m) {
                        skew += cp.nab1_g[idx3(d, i, m, l)] * o.phi(m, j) +
                                cp.nab1_g[idx3(d, i, j, m)] * o.phi(m, l);
                        for (int cc = 0; cc < d; ++cc)
                            phiphi += cp.nab1_g[idx3(d, i, m, cc)] * o.phi(m, j) * o.phi(cc, l);
                    }
                    r_phiphi = std::max(r_phiphi,
                                        std::abs(phiphi - cp.nab1_g[idx3(d, i, j, l)]));
                    r_skew = std::max(r_skew, std::abs(skew));
                    double alg = 0.0, t2d = 0.0;
                    for (int k = 0; k < d; ++k) {
                        alg += o.g(k, l) * cp.t1[idx3(d, k, i, j)] +
                               o.g(j, k) * cp.t1[idx3(d, k, i, l)];
                        t2d += o.g(k, l) * cp.t2[idx3(d, k, i, j)];
                    }
                    r_alg = std::max(r_alg, std::abs(cp.nab1_g[idx3(d, i, j, l)] - alg));
                    r_t2 = std::max(r_t2, std::abs(t2d + 0.5 * cp.nab1_g[idx3(d, i, j, l)]));
                }
        rt_phi = std::max(rt_phi, max_abs_t(covariant_affinor(d, cp.gamma_tilde, o.phi_j)));
        rt_xi = std::max(rt_xi, covariant_vec(d, cp.gamma_tilde, o.xi_j).max_abs());
        rt_eta = std::max(rt_eta, covariant_oneform(d, cp.gamma_tilde, o.eta_j).max_abs());
        rt_g = std::max(rt_g, max_abs_t(covariant_metric(d, cp.gamma_tilde, o.g_j)));
        r_b = std::max(r_b, (o.phi * o.b_op - o.b_op * o.phi).max_abs());
    }
    const double res[] = {r1_phi, r1_xi, r1_eta, r_phiphi, r_skew, r_alg,
                          r_t2,   rt_phi, rt_xi, rt_eta,   rt_g,   r_b};
    for (std::size_t a = 0; a < ids.size(); ++a)
        r.add(CheckRow::make(ids[a].first, ids[a].second, res[a], opts.tol));
    return r;
}

/// Torsion S(X,Y) = tilde-nab_X Y - tilde-nab_Y X - [X,Y] of the final
/// connection. On structures with closed fundamental form the two conditions
/// below single the connection out uniquely; when the hypothesis fails the
/// residuals are still computed and the report is marked.
inline Report torsion_conditions(const DeformedConnection& c, const ProbeOptions& opts = {}) {
    const int d = c.s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, c.s.chart, opts.points);
    double r_reeb = 0, r_kernel = 0, r_dphi = 0;
    for (const auto& p : pts) {
        const ConnPointData cp = conn_point(c, p);
        const ACMPointData& o = cp.o;
        r_dphi = std::max(r_dphi, max_abs_t(o.dPhi));
        // S^k_{ij} for coordinate directions (which commute)
        T3 tor(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                   static_cast<std::size_t>(d),
               0.0);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    tor[idx3(d, k, i, j)] =
                        cp.gamma[idx3(d, k, i, j)] - cp.gamma[idx3(d, k, j, i)];
        // S(xi, e_j) and S(xi, phi e_j)
        for (int j = 0; j < d; ++j) {
            std::vector<double> s_xi(static_cast<std::size_t>(d), 0.0);
            std::vector<double> s_xi_phi(static_cast<std::size_t>(d), 0.0);
            for (int k = 0; k < d; ++k)
                for (int i = 0; i < d; ++i) {
                    s_xi[static_cast<std::size_t>(k)] +=
                        o.xi[static_cast<std::size_t>(i)] * tor[idx3(d, k, i, j)];
                    for (int m = 0; m < d; ++m)
                        s_xi_phi[static_cast<std::size_t>(k)] +=
                            o.xi[static_cast<std::size_t>(i)] * tor[idx3(d, k, i, m)] *
                            o.phi(m, j);
                }
            for (int k = 0; k < d; ++k) {
                double v = s_xi_phi[static_cast<std::size_t>(k)];
                for (int m = 0; m < d; ++m)
                    v += o.phi(k, m) * s_xi[static_cast<std::size_t>(m)];
                r_reeb = std::max(r_reeb, std::abs(v));
            }
        }
        // kernel pairs through the projector P = Id - xi (x) eta
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                std::vector<double> xa(static_cast<std::size_t>(d), 0.0),
                    xb(static_cast<std::size_t>(d), 0.0);
                for (int m = 0; m < d; ++m) {
                    xa[static_cast<std::size_t>(m)] =
                        (m == a ? 1.0 : 0.0) -
                        o.xi[static_cast<std::size_t>(m)] * o.eta[static_cast<std::size_t>(a)];
                    xb[static_cast<std::size_t>(m)] =
                        (m == b ? 1.0 : 0.0) -
                        o.xi[static_cast<std::size_t>(m)] * o.eta[static_cast<std::size_t>(b)];
                }
                const double de = form2_apply(o.deta, xa, xb);
                for (int k = 0; k < d; ++k) {
                    double v = -2.0 * de * o.xi[static_cast<std::size_t>(k)];
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                            v += tor[idx3(d, k, i, j)] * xa[static_cast<std::size_t>(i)] *
                                 xb[static_cast<std::size_t>(j)];
                    r_kernel = std::max(r_kernel, std::abs(v));
                }
            }
    }
    const bool hyp = r_dphi <= opts.tol;
    const std::string mark = hyp ? "" : "hypothesis (closed fundamental form) not met; dPhi " +
                                            format_double(r_dphi);
    Report r;
    r.add(CheckRow::make("torsion.reeb_phi", "S(xi, phiY) = -phi S(xi, Y)", r_reeb, opts.tol,
                         mark));
    r.add(CheckRow::make("torsion.kernel_pairs",
                         "S(X,Y) = 2 deta(X,Y) xi for eta(X) = eta(Y) = 0", r_kernel, opts.tol,
                         mark));
    r.label("torsion_hypothesis", hyp ? "met" : "not met");
    return r;
}

/// Componentwise comparison of the general T1 / T2 construction against the
/// closed forms available in the three specialized classes.
inline Report specialization_check(const ACMStructure& s, const ProbeOptions& opts = {}) {
    detail::require_acm_dim(s.chart);
    const int d = s.chart.dim();
    const Report cls = classify(s, opts);
    const std::string classes = cls.labels.at("classes");
    const bool etan = cls.labels.at("eta_normal") == "yes";
    const bool contact = classes.find("contact_metric") != std::string::npos;
    const bool cosym = classes.find("almost_cosymplectic") != std::string::npos;
    const bool kenm = classes.find("almost_kenmotsu") != std::string::npos;
    Report r;
    r.label("classes", classes);
    if (!etan || !(contact || cosym || kenm)) {
        const std::string note = etan ? "structure is in none of the specialized classes"
                                      : "structure is not kernel-normal";
        r.add(CheckRow::not_applicable("spec.closed_form",
                                       "general T1/T2 vs class closed form", note));
        return r;
    }
    DeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::full;
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r_t1 = 0, r_t2 = 0, r_f = 0, r_tilde = 0;
    for (const auto& p : pts) {
        const ConnPointData cp = conn_point(c, p);
        const ACMPointData& o = cp.o;
        MatD gnx(d, d);  // g(nab_{e_i} xi, e_j)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double v = 0.0;
                for (int k = 0; k < d; ++k) v += o.g(k, j) * o.nabla_xi(i, k);
                gnx(i, j) = v;
            }
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const double ei = o.eta[static_cast<std::size_t>(i)];
                    const double ej = o.eta[static_cast<std::size_t>(j)];
                    const double xk = o.xi[static_cast<std::size_t>(k)];
                    double want = 0.0;
                    if (contact) {
                        // T1_X Y = -eta(X) phi Y + eta(Y) nab_X xi - g(nab_X xi, Y) xi
                        want = -ei * o.phi(k, j) + ej * o.nabla_xi(i, k) - gnx(i, j) * xk;
                    } else if (cosym) {
                        // T1_X Y = eta(Y) nab_X xi - g(nab_X xi, Y) xi
                        want = ej * o.nabla_xi(i, k) - gnx(i, j) * xk;
                    } else {
                        // T1_X Y = -eta(X) Y + eta(Y) nab_X xi - g(nab_X xi, Y) xi
                        //          + eta(Y) eta(X) xi
                        want = -ei * (k == j ? 1.0 : 0.0) + ej * o.nabla_xi(i, k) -
                               gnx(i, j) * xk + ej * ei * xk;
                    }
                    r_t1 = std::max(r_t1, std::abs(cp.t1[idx3(d, k, i, j)] - want));
                    if (cosym) {
                        r_t2 = std::max(r_t2, std::abs(cp.t2[idx3(d, k, i, j)]));
                    } else if (kenm) {
                        // T2_X Y = eta(X) Y - eta(X) eta(Y) xi
                        const double want2 = ei * (k == j ? 1.0 : 0.0) - ei * ej * xk;
                        r_t2 = std::max(r_t2, std::abs(cp.t2[idx3(d, k, i, j)] - want2));
                        // F_X Y = -eta(X) phi Y + eta(Y) phi X + Phi(X,Y) xi
                        const double wantf = -ei * o.phi(k, j) + ej * o.phi(k, i) +
                                             o.Phi.val(i, j) * xk;
                        r_f = std::max(r_f, std::abs(o.f_ten[idx3(d, k, i, j)] - wantf));
                        // tilde-nab_X Y = nab_X Y - eta(Y) nab_X xi + g(nab_X xi, Y) xi
                        const double wantg = cp.o.conn.gamma[idx3(d, k, i, j)] -
                                             ej * o.nabla_xi(i, k) + gnx(i, j) * xk;
                        r_tilde = std::max(r_tilde,
                                           std::abs(cp.gamma_tilde[idx3(d, k, i, j)] - wantg));
                    }
                }
    }
    if (contact) {
        r.add(CheckRow::make("spec.contact_t1",
                             "T1_XY = -eta(X)phiY + eta(Y)nab_X xi - g(nab_X xi,Y)xi", r_t1,
                             opts.tol, "contact metric closed form"));
    } else if (cosym) {
        r.add(CheckRow::make("spec.cosymplectic_t1",
                             "T1_XY = eta(Y)nab_X xi - g(nab_X xi,Y)xi", r_t1, opts.tol,
                             "almost cosymplectic closed form"));
        r.add(CheckRow::make("spec.cosymplectic_t2", "T2 = 0", r_t2, opts.tol));
    } else {
        r.add(CheckRow::make("spec.kenmotsu_f",
                             "F_XY = -eta(X)phiY + eta(Y)phiX + Phi(X,Y)xi", r_f, opts.tol,
                             "almost Kenmotsu closed form"));
        r.add(CheckRow::make(
            "spec.kenmotsu_t1",
            "T1_XY = -eta(X)Y + eta(Y)nab_X xi - g(nab_X xi,Y)xi + eta(Y)eta(X)xi", r_t1,
            opts.tol));
        r.add(CheckRow::make("spec.kenmotsu_t2", "T2_XY = eta(X)Y - eta(X)eta(Y)xi", r_t2,
                             opts.tol));
        r.add(CheckRow::make("spec.kenmotsu_tilde",
                             "tilde-nab_XY = nab_XY - eta(Y)nab_X xi + g(nab_X xi,Y)xi",
                             r_tilde, opts.tol));
    }
    return r;
}

/// Properties of the difference tensor T = C2 - C1 of two connections over
/// the same structure: T commutes with phi, kills xi, and is g-skew.
inline Report difference_tensor_check(const DeformedConnection& c1, const DeformedConnection& c2,
                                      const ProbeOptions& opts = {}) {
    if (c1.s.chart.dim() != c2.s.chart.dim())
        throw GateError("difference tensor needs connections over the same chart");
    const int d = c1.s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, c1.s.chart, opts.points);
    double r_phi = 0, r_xi = 0, r_skew = 0;
    for (const auto& p : pts) {
        const ConnPointData a = conn_point(c1, p);
        const ConnPointData b = conn_point(c2, p);
        const ACMPointData& o = a.o;
        T3 t(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                 static_cast<std::size_t>(d),
             0.0);
        for (std::size_t q = 0; q < t.size(); ++q) t[q] = b.gamma[q] - a.gamma[q];
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double commute = 0.0, kill = 0.0;
                    for (int m = 0; m < d; ++m)
                        commute += t[idx3(d, k, i, m)] * o.phi(m, j) -
                                   o.phi(k, m) * t[idx3(d, m, i, j)];
                    r_phi = std::max(r_phi, std::abs(commute));
                    if (j == 0) {
                        for (int m = 0; m < d; ++m)
                            kill += t[idx3(d, k, i, m)] * o.xi[static_cast<std::size_t>(m)];
                        r_xi = std::max(r_xi, std::abs(kill));
                    }
                }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    double v = 0.0;
                    for (int k = 0; k < d; ++k)
                        v += o.g(k, l) * t[idx3(d, k, i, j)] + o.g(j, k) * t[idx3(d, k, i, l)];
                    r_skew = std::max(r_skew, std::abs(v));
                }
    }
    Report r;
    r.add(CheckRow::make("diff.phi_commute", "T_X phiY = phi T_XY", r_phi, opts.tol));
    r.add(CheckRow::make("diff.xi_kill", "T_X xi = 0", r_xi, opts.tol));
    r.add(CheckRow::make("diff.g_skew", "g(T_XY,Z) + g(Y,T_XZ) = 0", r_skew, opts.tol));
    return r;
}

// ---- the paracontact analogue --------------------------------------------------------

/// The same two-stage deformation for almost paracontact metric structures:
/// nab1 = nab - T1 makes psi, zeta, tau parallel; the metric correction T2
/// restores metricity without breaking stage one.
struct ParaDeformedConnection {
    APCMStructure s;
    DeformationKind kind = DeformationKind::full;
};

struct ParaConnPointData {
    APCMPointData o;
    T3 t1;           // first deformation tensor
    T3 gamma1;       // Levi-Civita minus T1
    T3 nab1_g;       // (nab1_i g)_jk
    T3 t2;           // metric correction
    T3 gamma_tilde;  // gamma1 minus T2
    T3 gamma;        // final table (tilde or Levi-Civita)
};

/// The paracontact first deformation tensor:
/// T1_X Y = psi P_X Y + tau(X) B Y + tau(Y)(psi hbar X - B X)
///          - (1/2) tau(Y) psi (nab_zeta psi) X
///          + (dtau(Y,X) - (1/2)(L_zeta g)(Y,X)) zeta,
/// with g(P_X Y, Z) = (3/2) dPsi(X,Y,Z) and dtau(X,Y) = g(X,BY).
inline T3 para_t1_components(const APCMPointData& o) {
    const int d = o.d;
    T3 t1(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
              static_cast<std::size_t>(d),
          0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double v = 0.0;
                for (int l = 0; l < d; ++l) v += o.psi(k, l) * o.p_ten[idx3(d, l, i, j)];
                v += o.tau[static_cast<std::size_t>(i)] * o.b_op(k, j);
                double phb = 0.0, pnx = 0.0;
                for (int m = 0; m < d; ++m) {
                    phb += o.psi(k, m) * o.hbar(m, i);
                    pnx += o.psi(k, m) * o.nab_zeta_psi(m, i);
                }
                v += o.tau[static_cast<std::size_t>(j)] * (phb - o.b_op(k, i));
                v -= 0.5 * o.tau[static_cast<std::size_t>(j)] * pnx;
                v += (o.dtau(j, i) - 0.5 * o.lie_zeta_g(j, i)) *
                     o.zeta[static_cast<std::size_t>(k)];
                t1[idx3(d, k, i, j)] = v;
            }
    return t1;
}

inline ParaConnPointData para_conn_point(const ParaDeformedConnection& c,
                                         const std::vector<double>& p) {
    ParaConnPointData cp;
    cp.o = apcm_point(c.s, p);
    const int d = cp.o.d;
    const std::size_t sz = static_cast<std::size_t>(d) * static_cast<std::size_t>(d) *
                           static_cast<std::size_t>(d);
    if (c.kind == DeformationKind::levi_civita) {
        cp.t1.assign(sz, 0.0);
        cp.gamma1 = cp.o.conn.gamma;
        cp.nab1_g.assign(sz, 0.0);  // Levi-Civita is metric
        cp.t2.assign(sz, 0.0);
        cp.gamma_tilde = cp.o.conn.gamma;
    } else {
        cp.t1 = para_t1_components(cp.o);
        cp.gamma1.resize(sz);
        for (std::size_t a = 0; a < sz; ++a) cp.gamma1[a] = cp.o.conn.gamma[a] - cp.t1[a];
        cp.nab1_g = covariant_metric(d, cp.gamma1, cp.o.g_j);
        cp.t2.assign(sz, 0.0);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double v = 0.0;
                    for (int cc = 0; cc < d; ++cc)
                        v += cp.o.g_inv(k, cc) * cp.nab1_g[idx3(d, i, j, cc)];
                    cp.t2[idx3(d, k, i, j)] = -0.5 * v;
                }
        cp.gamma_tilde.resize(sz);
        for (std::size_t a = 0; a < sz; ++a) cp.gamma_tilde[a] = cp.gamma1[a] - cp.t2[a];
    }
    cp.gamma = cp.gamma_tilde;
    return cp;
}

inline ParaDeformedConnection levi_civita_para_connection(const APCMStructure& s) {
    ParaDeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::levi_civita;
    return c;
}

namespace detail {

struct ParaParallelGate {
    bool tau_normal = false;
    bool autoparallel = false;
    double k1_kernel = 0.0;
    double lie_tau = 0.0;
    bool ok() const { return tau_normal && autoparallel; }
    std::string diagnostic() const {
        return std::string("kernel-normal: ") + (tau_normal ? "yes" : "no") + " (residual " +
               format_double(k1_kernel) + "), autoparallel Reeb: " +
               (autoparallel ? "yes" : "no") + " (L_zeta tau residual " +
               format_double(lie_tau) + ")";
    }
};

inline ParaParallelGate para_parallel_gate(const APCMStructure& s, const ProbeOptions& opts) {
    require_apcm_dim(s.chart);
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    ParaParallelGate g;
    for (const auto& p : pts) {
        const APCMPointData o = apcm_point(s, p);
        g.k1_kernel = std::max(g.k1_kernel, k1_kernel_max(o));
        g.lie_tau = std::max(g.lie_tau, max_abs(o.lie_zeta_tau));
    }
    g.tau_normal = g.k1_kernel <= opts.tol;
    g.autoparallel = g.lie_tau <= opts.tol;
    return g;
}

} // namespace detail

/// Builds the structure-parallelizing connection for an almost paracontact
/// metric structure. Refuses (throws GateError) outside the kernel-normal +
/// autoparallel-Reeb class where the construction theorem applies.
inline ParaDeformedConnection build_para_tanaka_like(const APCMStructure& s,
                                                     const ProbeOptions& opts = {}) {
    const detail::ParaParallelGate gate = detail::para_parallel_gate(s, opts);
    if (!gate.ok())
        throw GateError("parallelizing connection needs a kernel-normal structure with "
                        "autoparallel Reeb field; " +
                        gate.diagnostic());
    ParaDeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::full;
    return c;
}

/// Residuals of nab psi, nab zeta, nab tau, nab g for the connection's final
/// Christoffel table.
inline Report verify_para_parallel(const ParaDeformedConnection& c,
                                   const ProbeOptions& opts = {}) {
    const int d = c.s.chart.dim();
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, c.s.chart, opts.points);
    double r_psi = 0, r_zeta = 0, r_tau = 0, r_g = 0;
    for (const auto& p : pts) {
        const ParaConnPointData cp = para_conn_point(c, p);
        r_psi = std::max(r_psi, max_abs_t(covariant_affinor(d, cp.gamma, cp.o.psi_j)));
        r_zeta = std::max(r_zeta, covariant_vec(d, cp.gamma, cp.o.zeta_j).max_abs());
        r_tau = std::max(r_tau, covariant_oneform(d, cp.gamma, cp.o.tau_j).max_abs());
        r_g = std::max(r_g, max_abs_t(covariant_metric(d, cp.gamma, cp.o.g_j)));
    }
    Report r;
    r.add(CheckRow::make("paraconn.psi", "nab psi = 0", r_psi, opts.tol));
    r.add(CheckRow::make("paraconn.zeta", "nab zeta = 0", r_zeta, opts.tol));
    r.add(CheckRow::make("paraconn.tau", "nab tau = 0", r_tau, opts.tol));
    r.add(CheckRow::make("paraconn.g", "nab g = 0", r_g, opts.tol));
    r.label("kind", c.kind == DeformationKind::levi_civita ? "levi_civita" : "full");
    return r;
}

/// The paracontact two-stage construction with every intermediate claim
/// checked. The stage-one metric defect satisfies the para-specific relations
/// (nab1_X g)(psiY,psiZ) = -(nab1_X g)(Y,Z) and the skew pairing; the metric
/// correction then finishes the job. Gate failures produce n/a rows.
inline Report para_parallelization_report(const APCMStructure& s,
                                          const ProbeOptions& opts = {}) {
    detail::require_apcm_dim(s.chart);
    const int d = s.chart.dim();
    const detail::ParaParallelGate gate = detail::para_parallel_gate(s, opts);
    Report r;
    r.label("tau_normal", gate.tau_normal ? "yes" : "no");
    r.label("autoparallel", gate.autoparallel ? "yes" : "no");
    const std::vector<std::pair<std::string, std::string>> ids = {
        {"par.nab1_psi", "nab1 psi = 0 with nab1 = nab - T1"},
        {"par.nab1_zeta", "nab1 zeta = 0"},
        {"par.nab1_tau", "nab1 tau = 0"},
        {"par.nab1_g_psipsi", "(nab1_X g)(psiY,psiZ) = -(nab1_X g)(Y,Z)"},
        {"par.nab1_g_skew", "(nab1_X g)(psiY,Z) + (nab1_X g)(Y,psiZ) = 0"},
        {"par.nab1_g_alg", "(nab1_X g)(Y,Z) = g(T1_XY,Z) + g(Y,T1_XZ)"},
        {"par.t2_def", "g(T2_XY,Z) = -(1/2)(nab1_X g)(Y,Z)"},
        {"par.tilde_psi", "tilde-nab psi = 0"},
        {"par.tilde_zeta", "tilde-nab zeta = 0"},
        {"par.tilde_tau", "tilde-nab tau = 0"},
        {"par.tilde_g", "tilde-nab g = 0"},
        {"par.b_commute", "psi B = B psi"},
    };
    if (!gate.ok()) {
        const std::string note =
            "construction needs a kernel-normal structure with autoparallel Reeb; " +
            gate.diagnostic();
        for (const auto& [id, identity] : ids) r.add(CheckRow::not_applicable(id, identity, note));
        return r;
    }
    ParaDeformedConnection c;
    c.s = s;
    c.kind = DeformationKind::full;
    Rng rng(opts.seed);
    const auto pts = sample_points(rng, s.chart, opts.points);
    double r1_psi = 0, r1_zeta = 0, r1_tau = 0, r_psipsi = 0, r_skew = 0, r_alg = 0, r_t2 = 0;
    double rt_psi = 0, rt_zeta = 0, rt_tau = 0, rt_g = 0, r_b = 0;
    for (const auto& p : pts) {
        const ParaConnPointData cp = para_conn_point(c, p);
        const APCMPointData& o = cp.o;
        r1_psi = std::max(r1_psi, max_abs_t(covariant_affinor(d, cp.gamma1, o.psi_j)));
        r1_zeta = std::max(r1_zeta, covariant_vec(d, cp.gamma1, o.zeta_j).max_abs());
        r1_tau = std::max(r1_tau, covariant_oneform(d, cp.gamma1, o.tau_j).max_abs());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int l = 0; l < d; ++l) {
                    double psipsi = 0.0, skew = 0.0;
                    for (int m = 0; m < d; ++m) {
                        skew += cp.nab1_g[idx3(d, i, m, l)] * o.psi(m, j) +
                                cp.nab1_g[idx3(d, i, j, m)] * o.psi(m, l);
                        for (int cc = 0; cc < d; ++cc)
                            psipsi += cp.nab1_g[idx3(d, i, m, cc)] * o.psi(m, j) * o.psi(cc, l);
                    }
                    r_psipsi = std::max(r_psipsi,
                                        std::abs(psipsi + cp.nab1_g[idx3(d, i, j, l)]));
                    r_skew = std::max(r_skew, std::abs(skew));
                    double alg = 0.0, t2d = 0.0;
                    for (int k = 0; k < d; ++k) {
                        alg += o.g(k, l) * cp.t1[idx3(d, k, i, j)] +
                               o.g(j, k) * cp.t1[idx3(d, k, i, l)];
                        t2d += o.g(k, l) * cp.t2[idx3(d, k, i, j)];
                    }
                    r_alg = std::max(r_alg, std::abs(cp.nab1_g[idx3(d, i, j, l)] - alg));
                    r_t2 = std::max(r_t2, std::abs(t2d + 0.5 * cp.nab1_g[idx3(d, i, j, l)]));
                }
        rt_psi = std::max(rt_psi, max_abs_t(covariant_affinor(d, cp.gamma_tilde, o.psi_j)));
        rt_zeta = std::max(rt_zeta, covariant_vec(d, cp.gamma_tilde, o.zeta_j).max_abs());
        rt_tau = std::max(rt_tau, covariant_oneform(d, cp.gamma_tilde, o.tau_j).max_abs());
        rt_g = std::max(rt_g, max_abs_t(covariant_metric(d, cp.gamma_tilde, o.g_j)));
        r_b = std::max(r_b, (o.psi * o.b_op - o.b_op * o.psi).max_abs());
    }
    const double res[] = {r1_psi, r1_zeta, r1_tau, r_psipsi, r_skew, r_alg,
                          r_t2,   rt_psi,  rt_zeta, rt_tau,  rt_g,   r_b};
    for (std::size_t a = 0; a < ids.size(); ++a)
        r.add(CheckRow::make(ids[a].first, ids[a].second, res[a], opts.tol));
    return r;
}

} // namespace crgeo
