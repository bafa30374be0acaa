#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "crgeo/calculus.hpp"
#include "crgeo/expr.hpp"
#include "crgeo/tensor.hpp"

using namespace crgeo;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};

VecE parse_field(const std::vector<std::string>& comps, const std::vector<std::string>& coords) {
    VecE out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(parse_expr(c, coords));
    return out;
}

MatE parse_matrix(const std::vector<std::vector<std::string>>& comps,
                  const std::vector<std::string>& coords) {
    MatE out;
    out.reserve(comps.size());
    for (const auto& row : comps) out.push_back(parse_field(row, coords));
    return out;
}

std::vector<double> eval_field(const VecE& f, const std::vector<double>& p) {
    std::vector<double> out;
    out.reserve(f.size());
    for (const auto& c : f) out.push_back(eval_value(c, p));
    return out;
}

// One RK4 flow step of dp/dt = f(p).
std::vector<double> rk4_flow(const VecE& f, std::vector<double> p, double t, int steps) {
    const double h = t / steps;
    const std::size_t d = p.size();
    for (int s = 0; s < steps; ++s) {
        const std::vector<double> k1 = eval_field(f, p);
        std::vector<double> q(d);
        for (std::size_t i = 0; i < d; ++i) q[i] = p[i] + 0.5 * h * k1[i];
        const std::vector<double> k2 = eval_field(f, q);
        for (std::size_t i = 0; i < d; ++i) q[i] = p[i] + 0.5 * h * k2[i];
        const std::vector<double> k3 = eval_field(f, q);
        for (std::size_t i = 0; i < d; ++i) q[i] = p[i] + h * k3[i];
        const std::vector<double> k4 = eval_field(f, q);
        for (std::size_t i = 0; i < d; ++i)
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return p;
}

// (flow_Y(-t) o flow_X(-t) o flow_Y(t) o flow_X(t)(p) - p) / t^2 = [X,Y] + O(t)
std::vector<double> commutator_estimate(const VecE& x, const VecE& y,
                                        const std::vector<double>& p, double t) {
    std::vector<double> q = rk4_flow(x, p, t, 20);
    q = rk4_flow(y, q, t, 20);
    q = rk4_flow(x, q, -t, 20);
    q = rk4_flow(y, q, -t, 20);
    std::vector<double> e(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) e[i] = (q[i] - p[i]) / (t * t);
    return e;
}

} // namespace

TEST_CASE("lie bracket against hand values and the flow-commutator oracle") {
    // X = (y^2, x), Y = (x*y, -y):
    // [X,Y] = (y^3 + x^2 + 2y^2, -x - x*y)
    const VecE x = parse_field({"y^2", "x"}, kXY);
    const VecE y = parse_field({"x*y", "-y"}, kXY);
    const std::vector<double> p{0.4, 0.3};
    JetContext ctx(p);
    const std::vector<double> b = bracket(eval_vec(ctx, x), eval_vec(ctx, y));
    const double a = p[0], c = p[1];
    CHECK(b[0] == doctest::Approx(c * c * c + a * a + 2 * c * c).epsilon(1e-13));
    CHECK(b[1] == doctest::Approx(-a - a * c).epsilon(1e-13));

    // flow-commutator oracle with two Richardson levels
    const double t = 0.04;
    const std::vector<double> e1 = commutator_estimate(x, y, p, t);
    const std::vector<double> e2 = commutator_estimate(x, y, p, t / 2);
    const std::vector<double> e3 = commutator_estimate(x, y, p, t / 4);
    for (std::size_t i = 0; i < 2; ++i) {
        const double r1 = 2.0 * e2[i] - e1[i];
        const double r2 = 2.0 * e3[i] - e2[i];
        const double rich = (4.0 * r2 - r1) / 3.0;
        CHECK(rich == doctest::Approx(b[i]).epsilon(1e-5));
    }
}

TEST_CASE("double brackets satisfy the Jacobi identity") {
    const VecE x = parse_field({"y^2", "x", "1"}, kXYZ);
    const VecE y = parse_field({"z", "x*y", "y"}, kXYZ);
    const VecE z = parse_field({"x + z", "y", "x*z"}, kXYZ);
    const std::vector<double> p{0.3, -0.5, 0.7};
    JetContext ctx(p);
    const VecJ xj = eval_vec(ctx, x), yj = eval_vec(ctx, y), zj = eval_vec(ctx, z);
    const std::vector<double> t1 = bracket(bracket_jet(xj, yj), zj);
    const std::vector<double> t2 = bracket(bracket_jet(yj, zj), xj);
    const std::vector<double> t3 = bracket(bracket_jet(zj, xj), yj);
    for (int k = 0; k < 3; ++k)
        CHECK(t1[static_cast<std::size_t>(k)] + t2[static_cast<std::size_t>(k)] +
                  t3[static_cast<std::size_t>(k)] ==
              doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bracket_jet retains correct first derivatives") {
    // B = [X,Y] = (y^3 + x^2 + 2y^2, -x - x*y)
    const VecE x = parse_field({"y^2", "x"}, kXY);
    const VecE y = parse_field({"x*y", "-y"}, kXY);
    const std::vector<double> p{0.4, 0.3};
    JetContext ctx(p);
    const VecJet1 b = bracket_jet(eval_vec(ctx, x), eval_vec(ctx, y));
    const double c = p[1];
    CHECK(b.jac(0, 0) == doctest::Approx(2 * p[0]).epsilon(1e-13));
    CHECK(b.jac(0, 1) == doctest::Approx(3 * c * c + 4 * c).epsilon(1e-13));
    CHECK(b.jac(1, 0) == doctest::Approx(-1 - c).epsilon(1e-13));
    CHECK(b.jac(1, 1) == doctest::Approx(-p[0]).epsilon(1e-13));
}

TEST_CASE("exterior derivative of a one-form") {
    // eta = x dy on the plane: (d eta)_xy = 1/2
    const VecE eta = parse_field({"0", "x"}, kXY);
    const std::vector<double> p{0.9, -0.2};
    JetContext ctx(p);
    const MatD deta = d_oneform(eval_vec(ctx, eta));
    CHECK(deta(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(deta(1, 0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(deta(0, 0) == 0.0);

    // field-argument path agrees on constant frames: d eta (e_x, e_y)
    const VecJ ex = const_vec_jet(2, {1.0, 0.0});
    const VecJ ey = const_vec_jet(2, {0.0, 1.0});
    CHECK(d_oneform_fields(eval_vec(ctx, eta), ex, ey) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("d of d vanishes") {
    const VecE alpha =
        parse_field({"x*y + z^2", "sin(x) - y*z", "cos(y) + x^2*z"}, kXYZ);
    const std::vector<double> pts[] = {{0.1, 0.2, 0.3}, {-0.6, 0.5, -0.4}};
    for (const auto& p : pts) {
        JetContext ctx(p);
        const Form2Jet da = d_oneform_jet(eval_vec(ctx, alpha));
        const T3 dda = d_twoform(da);
        CHECK(max_abs_t(dda) == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("wedge products in the permutation-average normalization") {
    // alpha = dz, w = (1/2) dx (x) dy - (1/2) dy (x) dx represents dx ^ dy
    const std::vector<double> alpha{0.0, 0.0, 1.0};
    MatD w(3, 3);
    w(0, 1) = 0.5;
    w(1, 0) = -0.5;
    const T3 aw = wedge_1_2(alpha, w);
    CHECK(aw[idx3(3, 2, 0, 1)] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(aw[idx3(3, 0, 1, 2)] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(aw[idx3(3, 1, 0, 2)] == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(aw[idx3(3, 0, 0, 1)] == doctest::Approx(0.0).epsilon(1e-15));

    // w^1 on a subframe is just the matrix entry
    CHECK(wedge_power_frame(w, 1, {0, 1}) == doctest::Approx(0.5).epsilon(1e-15));

    // two symplectic blocks: w(e0,e1) = 2, w(e2,e3) = 3 gives w^2 = 2*3/3 = 2
    MatD w2(4, 4);
    w2(0, 1) = 2.0;
    w2(1, 0) = -2.0;
    w2(2, 3) = 3.0;
    w2(3, 2) = -3.0;
    CHECK(wedge_power_frame(w2, 2, {0, 1, 2, 3}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(max_wedge_power(w2, 3) == doctest::Approx(0.0).epsilon(1e-15));

    // eta ^ Phi on a 3-dimensional frame: eta = dz - y dx, Phi(dx,dy) = 1/2
    const std::vector<double> eta{-0.7, 0.0, 1.0};
    MatD phi(3, 3);
    phi(0, 1) = 0.5;
    phi(1, 0) = -0.5;
    CHECK(wedge_1_2p_frame(eta, phi, 1, {0, 1, 2}) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(max_wedge_1_2p(eta, phi, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    // index subsets
    CHECK(index_combinations(5, 3).size() == 10);
    CHECK(index_combinations(4, 4).size() == 1);
    CHECK(index_combinations(3, 4).empty());
}

TEST_CASE("pointwise class of a one-form") {
    // contact form on R^3: eta = dz - y dx at y = 0.4
    std::vector<double> eta{-0.4, 0.0, 1.0};
    MatD deta(3, 3);
    deta(0, 1) = 0.5;
    deta(1, 0) = -0.5;
    CHECK(oneform_class(eta, deta, 1e-9) == 3);
    // exact form: eta = dz
    CHECK(oneform_class({0.0, 0.0, 1.0}, MatD(3, 3), 1e-9) == 1);
    // Darboux form on R^5: coords (x1, x2, y1, y2, z)
    std::vector<double> eta5{-0.3, 0.2, 0.0, 0.0, 1.0};
    MatD deta5(5, 5);
    deta5(2, 0) = -0.5;
    deta5(0, 2) = 0.5;
    deta5(3, 1) = -0.5;
    deta5(1, 3) = 0.5;
    CHECK(oneform_class(eta5, deta5, 1e-9) == 5);
}

TEST_CASE("kernel basis of a one-form") {
    const std::vector<double> alpha{-0.4, 0.0, 1.0};
    const std::vector<double> v{0.0, 0.0, 1.0};  // alpha(v) = 1
    const KernelBasis kb = kernel_basis(alpha, v);
    REQUIRE(kb.picked.size() == 2);
    CHECK(kb.basis.rows() == 3);
    CHECK(kb.basis.cols() == 2);
    for (int c = 0; c < 2; ++c) {
        double av = 0.0;
        for (int i = 0; i < 3; ++i) av += alpha[static_cast<std::size_t>(i)] * kb.basis(i, c);
        CHECK(av == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("Christoffel symbols of a closed-form metric") {
    // g = dx^2 + x^2 dy^2 on x in [0.5, 1.5]:
    // G^y_{xy} = G^y_{yx} = 1/x, G^x_{yy} = -x, all others zero.
    const MatE g = parse_matrix({{"1", "0"}, {"0", "x^2"}}, kXY);
    const std::vector<double> p{1.3, 0.2};
    JetContext ctx(p);
    const Connection c = levi_civita(eval_mat(ctx, g));
    const double x0 = p[0];
    CHECK(c.gamma[idx3(2, 1, 0, 1)] == doctest::Approx(1.0 / x0).epsilon(1e-13));
    CHECK(c.gamma[idx3(2, 1, 1, 0)] == doctest::Approx(1.0 / x0).epsilon(1e-13));
    CHECK(c.gamma[idx3(2, 0, 1, 1)] == doctest::Approx(-x0).epsilon(1e-13));
    CHECK(c.gamma[idx3(2, 0, 0, 0)] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.gamma[idx3(2, 1, 0, 0)] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("Koszul formula, torsion freeness and metricity") {
    const MatE g = parse_matrix({{"1 + 0.1*x^2", "0.05*x*y", "0"},
                                 {"0.05*x*y", "1 + 0.1*y^2", "0.02*z"},
                                 {"0", "0.02*z", "1 + 0.1*z^2"}},
                                kXYZ);
    const VecE xf = parse_field({"y", "x*z", "1"}, kXYZ);
    const VecE yf = parse_field({"x^2", "z", "y"}, kXYZ);
    const VecE zf = parse_field({"1", "x", "y*z"}, kXYZ);
    const std::vector<double> pts[] = {{0.2, 0.4, -0.3}, {-0.7, 0.1, 0.6}};
    for (const auto& p : pts) {
        JetContext ctx(p);
        const MatJ gj = eval_mat(ctx, g);
        const VecJ xj = eval_vec(ctx, xf), yj = eval_vec(ctx, yf), zj = eval_vec(ctx, zf);
        const Connection c = levi_civita(gj);
        // torsion freeness
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k)
                    CHECK(c.gamma[idx3(3, l, i, k)] ==
                          doctest::Approx(c.gamma[idx3(3, l, k, i)]).epsilon(1e-13));
        // metricity
        const T3 ng = covariant_metric(3, c.gamma, gj);
        CHECK(max_abs_t(ng) == doctest::Approx(0.0).epsilon(1e-12));
        // Koszul against the Christoffel contraction
        const double left = koszul(gj, xj, yj, zj);
        const std::vector<double> nxy = nabla_vec(3, c.gamma, xj, yj);
        double right = 0.0;
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
                right += 2.0 * c.g(l, m) * nxy[static_cast<std::size_t>(l)] *
                         zj[static_cast<std::size_t>(m)].value();
        CHECK(left == doctest::Approx(right).epsilon(1e-11));
    }
}

TEST_CASE("curvature of the round metric and its symmetries") {
    // g = dx^2 + sin(x)^2 dy^2 has R(d_x, d_y)d_y = sin(x)^2 d_x
    const MatE g = parse_matrix({{"1", "0"}, {"0", "sin(x)^2"}}, kXY);
    const std::vector<double> p{0.8, 0.1};
    JetContext ctx(p);
    const Connection c = levi_civita(eval_mat(ctx, g), true);
    const T4 r = curvature(c);
    const double s2 = std::sin(p[0]) * std::sin(p[0]);
    CHECK(r[idx4(2, 0, 0, 1, 1)] == doctest::Approx(s2).epsilon(1e-12));
    CHECK(r[idx4(2, 0, 1, 0, 1)] == doctest::Approx(-s2).epsilon(1e-12));

    // symmetries + first Bianchi on a non-diagonal 3d metric
    const MatE g3 = parse_matrix({{"1 + 0.1*x^2", "0.05*x*y", "0"},
                                  {"0.05*x*y", "1 + 0.1*y^2", "0.02*z"},
                                  {"0", "0.02*z", "1 + 0.1*z^2"}},
                                 kXYZ);
    const std::vector<double> q{0.3, -0.4, 0.5};
    JetContext ctx3(q);
    const Connection c3 = levi_civita(eval_mat(ctx3, g3), true);
    const T4 r3 = curvature(c3);
    auto low = [&](int i, int j, int k, int l) {
        double s = 0.0;
        for (int m = 0; m < 3; ++m) s += c3.g(l, m) * r3[idx4(3, m, i, j, k)];
        return s;
    };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                // first Bianchi
                double cyc = 0.0;
                for (int l = 0; l < 3; ++l)
                    cyc = std::max(cyc, std::abs(r3[idx4(3, l, i, j, k)] +
                                                 r3[idx4(3, l, j, k, i)] +
                                                 r3[idx4(3, l, k, i, j)]));
                CHECK(cyc == doctest::Approx(0.0).epsilon(1e-11));
                for (int l = 0; l < 3; ++l) {
                    CHECK(low(i, j, k, l) == doctest::Approx(-low(j, i, k, l)).epsilon(1e-11));
                    CHECK(low(i, j, k, l) == doctest::Approx(-low(i, j, l, k)).epsilon(1e-11));
                    CHECK(low(i, j, k, l) == doctest::Approx(low(k, l, i, j)).epsilon(1e-11));
                }
            }

    // flat metric has zero curvature
    const MatE gf = parse_matrix({{"1", "0"}, {"0", "1"}}, kXY);
    JetContext ctxf(p);
    const T4 rf = curvature(levi_civita(eval_mat(ctxf, gf), true));
    CHECK(max_abs_t(rf) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("metric signature") {
    MatD g(3, 3);
    g(0, 0) = 1.0;
    g(1, 1) = -2.0;
    g(2, 2) = 3.0;
    const Signature s = metric_signature(g);
    CHECK(s.positive == 2);
    CHECK(s.negative == 1);
    CHECK(s.zero == 0);
}

TEST_CASE("Lie derivative of the metric") {
    const MatE g = parse_matrix({{"1", "0"}, {"0", "1"}}, kXY);
    const std::vector<double> p{0.3, -0.6};
    JetContext ctx(p);
    const MatJ gj = eval_mat(ctx, g);
    // rotation field is Killing for the flat metric
    const VecE rot = parse_field({"-y", "x"}, kXY);
    CHECK(lie_metric(eval_vec(ctx, rot), gj).max_abs() == doctest::Approx(0.0).epsilon(1e-15));
    // X = (x^2, 0): (L_X g)_xx = 4x
    const VecE xsq = parse_field({"x^2", "0"}, kXY);
    const MatD lg = lie_metric(eval_vec(ctx, xsq), gj);
    CHECK(lg(0, 0) == doctest::Approx(4.0 * p[0]).epsilon(1e-14));
    CHECK(lg(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lg(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("Cartan formula for one-forms") {
    // L_X alpha = iota_X (d alpha as the unnormalized pairing) + d(alpha(X)),
    // where the stored (d alpha)_ij is half the unnormalized coboundary.
    const VecE alpha = parse_field({"x*y", "z^2", "1 + x"}, kXYZ);
    const VecE xf = parse_field({"z", "x", "y"}, kXYZ);
    const std::vector<double> p{0.25, -0.35, 0.45};
    JetContext ctx(p);
    const VecJ aj = eval_vec(ctx, alpha);
    const VecJ xj = eval_vec(ctx, xf);
    const std::vector<double> lhs = lie_oneform(xj, aj);
    const MatD da = d_oneform(aj);
    const Jet2 ax = pairing_jet(aj, xj);
    for (int j = 0; j < 3; ++j) {
        double rhs = ax.d(j);
        for (int i = 0; i < 3; ++i) rhs += 2.0 * xj[static_cast<std::size_t>(i)].value() * da(i, j);
        CHECK(lhs[static_cast<std::size_t>(j)] == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("Lie derivative of a two-form") {
    // w = d(x dy) has constant value 1/2 at (x,y); for X = x d_x + y d_y,
    // L_X w doubles it.
    const VecE alpha = parse_field({"0", "x", "0"}, kXYZ);
    const VecE xf = parse_field({"x", "y", "0"}, kXYZ);
    const std::vector<double> p{0.5, 0.25, 0.1};
    JetContext ctx(p);
    const Form2Jet w = d_oneform_jet(eval_vec(ctx, alpha));
    const MatD lw = lie_twoform(eval_vec(ctx, xf), w);
    CHECK(lw(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lw(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(lw(0, 2) == doctest::Approx(0.0).epsilon(1e-15));
}
