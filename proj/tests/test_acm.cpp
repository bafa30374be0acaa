#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "crgeo/acm.hpp"
#include "crgeo/calculus.hpp"
#include "crgeo/qsas.hpp"
#include "crgeo/tensor.hpp"
#include "helpers/random_structures.hpp"

using namespace crgeo;

namespace {

ProbeOptions quick(int points = 12) {
    ProbeOptions o;
    o.points = points;
    return o;
}

/// Warped-product model with a closed contact form: eta = dz, phi the
/// standard rotation on (x, y), g = dz^2 + e^{2z}(dx^2 + dy^2).
ACMStructure warped_model() {
    ACMStructure s;
    s.chart = make_chart("warped", {"x", "y", "z"});
    const Expr w = exp(Expr::constant(2.0) * Expr::coord(2));
    s.phi = zero_mat_e(3);
    s.phi[1][0] = Expr::constant(1.0);   // phi d_x = d_y
    s.phi[0][1] = Expr::constant(-1.0);  // phi d_y = -d_x
    s.g = zero_mat_e(3);
    s.g[0][0] = w;
    s.g[1][1] = w;
    s.g[2][2] = Expr::constant(1.0);
    s.xi = zero_vec_e(3);
    s.xi[2] = Expr::constant(1.0);
    s.eta = zero_vec_e(3);
    s.eta[2] = Expr::constant(1.0);
    return s;
}

HeisenbergSpec make_spec(int n, std::vector<double> entries) {
    HeisenbergSpec spec;
    spec.n = n;
    spec.a = MatD(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) spec.a(i, j) = entries[static_cast<std::size_t>(i * n + j)];
    return spec;
}

} // namespace

TEST_CASE("validator accepts the nilpotent family and conjugated-frame structures") {
    std::vector<ACMStructure> structures;
    structures.push_back(heisenberg(make_spec(1, {1.0})));
    structures.push_back(heisenberg(make_spec(2, {1.0, 0.0, 0.0, 0.0})));
    structures.push_back(warped_model());
    Rng rng(42);
    structures.push_back(testing::random_acm(rng, 1));
    structures.push_back(testing::random_acm(rng, 2));
    testing::FuzzOptions co;
    co.constant = true;
    structures.push_back(testing::random_acm(rng, 2, co));
    for (const auto& s : structures) {
        const Report r = validate_acm(s, quick());
        CAPTURE(s.chart.name);
        CHECK(r.all_passed());
        CHECK(r.labels.at("valid") == "yes");
    }
}

TEST_CASE("validator reports broken axioms") {
    ACMStructure s = heisenberg(make_spec(1, {1.0}));
    SUBCASE("perturbed affinor breaks phi^2 = -Id + eta (x) xi") {
        s.phi[0][0] = s.phi[0][0] + Expr::constant(0.05);
        const Report r = validate_acm(s, quick(4));
        CHECK_FALSE(r.all_passed());
        CHECK(r.find("axiom.phi2")->verdict == "fail");
    }
    SUBCASE("asymmetric metric is rejected") {
        s.g[0][1] = s.g[0][1] + Expr::constant(0.03);
        const Report r = validate_acm(s, quick(4));
        CHECK(r.find("axiom.g_sym")->verdict == "fail");
    }
    SUBCASE("rescaled Reeb vector breaks eta(xi) = 1") {
        s.xi[2] = Expr::constant(1.25);
        const Report r = validate_acm(s, quick(4));
        CHECK(r.find("axiom.eta_xi")->verdict == "fail");
    }
}

TEST_CASE("unit-coefficient family member: classification, Levi form, h = 0") {
    const ACMStructure s = heisenberg(make_spec(1, {1.0}));
    const Report c = classify(s, quick());
    CHECK(c.labels.at("classes").find("sasakian") != std::string::npos);
    CHECK(c.labels.at("classes").find("contact_metric") != std::string::npos);
    CHECK(c.labels.at("classes").find("k_contact") != std::string::npos);
    CHECK(c.labels.at("classes").find("quasi_sasakian") != std::string::npos);
    CHECK(c.labels.at("rank") == "3");
    CHECK(c.labels.at("levi_signature") == "(2,0,0)");
    CHECK(std::abs(std::stod(c.labels.at("alpha")) - 1.0) < 1e-9);
    CHECK(c.all_passed());

    Rng rng(7);
    const auto p = sample_point(rng, s.chart);
    const ACMPointData o = acm_point(s, p);
    CHECK(o.h.max_abs() < 1e-12);  // L_xi phi = 0 for this member

    const Report a = autoparallel_equivalences(s, quick());
    CHECK(a.all_passed());
    CHECK(a.find("auto.agree")->verdict == "pass");
}

TEST_CASE("warped model: closed contact form classification and covariant formulas") {
    const ACMStructure s = warped_model();
    const Report v = validate_acm(s, quick());
    CHECK(v.all_passed());
    const Report c = classify(s, quick());
    CHECK(c.labels.at("classes").find("kenmotsu") != std::string::npos);
    CHECK(c.labels.at("classes").find("normal") != std::string::npos);
    CHECK(c.labels.at("rank") == "1");
    CHECK(c.find("form.kenmotsu_cr")->verdict == "pass");
    CHECK(c.find("form.kenmotsu_nabla_xi")->verdict == "pass");
    CHECK(c.all_passed());
}

TEST_CASE("zero-coefficient member is cosymplectic with parallel affinor") {
    const ACMStructure s = heisenberg(make_spec(1, {0.0}));
    const Report c = classify(s, quick());
    CHECK(c.labels.at("classes").find("cosymplectic") != std::string::npos);
    CHECK(c.labels.at("rank") == "1");
    Rng rng(3);
    const auto p = sample_point(rng, s.chart);
    const ACMPointData o = acm_point(s, p);
    CHECK(max_abs_t(o.cov_phi) < 1e-12);
}

TEST_CASE("three-way equivalence agrees on kernel-normal and non-normal structures") {
    SUBCASE("normal members of the family") {
        for (auto spec : {make_spec(1, {1.0}), make_spec(2, {1.0, 0.3, 0.3, -1.0})}) {
            const ACMStructure s = heisenberg(spec);
            const Report r = normality_equivalence(s, quick());
            CAPTURE(s.chart.name);
            CHECK(r.labels.at("eta_normal") == "yes");
            CHECK(r.labels.at("cr") == "yes");
            CHECK(r.labels.at("covd") == "yes");
            CHECK(r.labels.at("equivalent") == "yes");
            CHECK(r.find("equiv.three_way")->verdict == "pass");
        }
    }
    SUBCASE("in dimension three every structure is kernel-normal") {
        // the kernel distribution is a complex line, so its integrability is
        // automatic; all three characterizations must detect this
        Rng rng(42);
        const ACMStructure s = testing::random_acm(rng, 1);
        const Report r = normality_equivalence(s, quick());
        CHECK(r.labels.at("eta_normal") == "yes");
        CHECK(r.labels.at("cr") == "yes");
        CHECK(r.labels.at("covd") == "yes");
        CHECK(r.labels.at("equivalent") == "yes");
    }
    SUBCASE("generic conjugated structure in dimension five is not kernel-normal") {
        Rng rng(42);
        const ACMStructure s = testing::random_acm(rng, 2);
        const Report r = normality_equivalence(s, quick());
        CHECK(r.labels.at("eta_normal") == "no");
        CHECK(r.labels.at("cr") == "no");
        CHECK(r.labels.at("covd") == "no");
        CHECK(r.labels.at("equivalent") == "yes");
        CHECK(r.find("equiv.three_way")->verdict == "pass");
    }
}

TEST_CASE("general covariant-derivative formula holds on conjugated structures") {
    Rng rng(42);
    for (int n : {1, 2}) {
        for (int draw = 0; draw < 2; ++draw) {
            testing::FuzzOptions fo;
            fo.constant = (draw == 1);
            const ACMStructure s = testing::random_acm(rng, n, fo);
            ProbeOptions opts = quick(10);
            opts.tol = 1e-7;
            const Report r = covd_check(s, opts);
            CAPTURE(n);
            CAPTURE(draw);
            CHECK(r.find("covdiv.general_frame")->verdict == "pass");
            CHECK(r.find("covdiv.general_probe")->verdict == "pass");
        }
    }
}

TEST_CASE("identity suite passes on models and conjugated structures") {
    std::vector<ACMStructure> structures;
    structures.push_back(heisenberg(make_spec(1, {1.0})));
    structures.push_back(heisenberg(make_spec(2, {1.0, 0.0, 0.0, 0.0})));
    structures.push_back(warped_model());
    Rng rng(11);
    structures.push_back(testing::random_acm(rng, 1));
    structures.push_back(testing::random_acm(rng, 2));
    for (const auto& s : structures) {
        ProbeOptions opts = quick(8);
        opts.tol = 1e-7;
        const Report r = acm_identity_suite(s, opts);
        CAPTURE(s.chart.name);
        for (const auto& row : r.rows) {
            CAPTURE(row.id);
            CAPTURE(row.residual);
            CHECK(row.verdict != "fail");
        }
    }
}

TEST_CASE("field-level Nijenhuis tensor matches the pointwise formula") {
    const ACMStructure s = heisenberg(make_spec(1, {1.0}));
    const int d = 3;
    // polynomial vector fields with non-constant coefficients
    VecE x = zero_vec_e(d);
    x[0] = Expr::constant(1.0) + Expr::constant(0.4) * Expr::coord(1);
    x[2] = Expr::constant(0.3) * Expr::coord(0);
    VecE y = zero_vec_e(d);
    y[1] = Expr::constant(1.0) - Expr::constant(0.2) * Expr::coord(2);
    y[0] = Expr::constant(0.5) * Expr::coord(1);
    Rng rng(5);
    for (int t = 0; t < 4; ++t) {
        const auto p = sample_point(rng, s.chart);
        const ACMPointData o = acm_point(s, p);
        JetContext ctx(p);
        const std::vector<double> xv = values(eval_vec(ctx, x));
        const std::vector<double> yv = values(eval_vec(ctx, y));
        const std::vector<double> field = n1_field(s, x, y, p);
        const std::vector<double> point = n1_value(o, xv, yv);
        for (int k = 0; k < d; ++k)
            CHECK(field[static_cast<std::size_t>(k)] ==
                  doctest::Approx(point[static_cast<std::size_t>(k)]).epsilon(1e-10));
        const double n2f = n2_field(s, x, y, p);
        const double n2p = n2_value(o, xv, yv);
        CHECK(n2f == doctest::Approx(n2p).epsilon(1e-10));
    }
}
