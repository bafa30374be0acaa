#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "crgeo/acm.hpp"
#include "crgeo/calculus.hpp"
#include "crgeo/errors.hpp"
#include "crgeo/qsas.hpp"
#include "helpers/random_structures.hpp"

using namespace crgeo;

namespace {

ProbeOptions quick(int points = 12) {
    ProbeOptions o;
    o.points = points;
    return o;
}

HeisenbergSpec make_spec(int n, std::vector<double> entries) {
    HeisenbergSpec spec;
    spec.n = n;
    spec.a = MatD(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) spec.a(i, j) = entries[static_cast<std::size_t>(i * n + j)];
    return spec;
}

ACMStructure warped_model() {
    ACMStructure s;
    s.chart = make_chart("warped", {"x", "y", "z"});
    const Expr w = exp(Expr::constant(2.0) * Expr::coord(2));
    s.phi = zero_mat_e(3);
    s.phi[1][0] = Expr::constant(1.0);
    s.phi[0][1] = Expr::constant(-1.0);
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

} // namespace

TEST_CASE("family constructor rejects invalid coefficient data") {
    HeisenbergSpec bad = make_spec(2, {1.0, 0.5, -0.5, 1.0});  // not symmetric
    CHECK_THROWS_AS(heisenberg(bad), GateError);
    HeisenbergSpec tiny;
    tiny.n = 0;
    tiny.a = MatD(0, 0);
    CHECK_THROWS_AS(heisenberg(tiny), GateError);
    HeisenbergSpec mismatched;
    mismatched.n = 2;
    mismatched.a = MatD(1, 1);
    CHECK_THROWS_AS(heisenberg(mismatched), GateError);
}

TEST_CASE("family frame tables hold across coefficient choices") {
    std::vector<HeisenbergSpec> specs;
    specs.push_back(make_spec(1, {1.0}));
    specs.push_back(make_spec(1, {0.0}));
    specs.push_back(make_spec(1, {-2.0}));
    specs.push_back(make_spec(2, {1.0, 0.0, 0.0, 0.0}));
    specs.push_back(make_spec(2, {2.0, 1.0, 1.0, -1.0}));
    for (const auto& spec : specs) {
        const Report r = heisenberg_family_checks(spec, quick(8));
        CAPTURE(spec.n);
        for (const auto& row : r.rows) {
            CAPTURE(row.id);
            CAPTURE(row.residual);
            CHECK(row.verdict == "pass");
        }
    }
}

TEST_CASE("family frame tables: expected rank and Levi signature labels") {
    SUBCASE("n = 2, rank-one coefficient matrix") {
        const Report r = heisenberg_family_checks(make_spec(2, {1.0, 0.0, 0.0, 0.0}), quick(6));
        CHECK(r.labels.at("rank") == "3");
        CHECK(r.labels.at("levi_signature") == "(2,0,2)");
    }
    SUBCASE("n = 2, indefinite coefficient matrix") {
        const Report r =
            heisenberg_family_checks(make_spec(2, {1.0, 0.0, 0.0, -1.0}), quick(6));
        CHECK(r.labels.at("rank") == "5");
        CHECK(r.labels.at("levi_signature") == "(2,2,0)");
    }
    SUBCASE("negative-definite scalar coefficient") {
        const Report r = heisenberg_family_checks(make_spec(1, {-2.0}), quick(6));
        CHECK(r.labels.at("rank") == "3");
        CHECK(r.labels.at("levi_signature") == "(0,2,0)");
    }
}

TEST_CASE("frame spot values for the unit scalar coefficient") {
    const HeisenbergSpec spec = make_spec(1, {1.0});
    const ACMStructure s = heisenberg(spec);
    const auto frame = heisenberg_frame(spec);  // V1, V2, xi
    Rng rng(9);
    const auto p = sample_point(rng, s.chart);
    const ACMPointData o = acm_point(s, p);
    JetContext ctx(p);
    const std::vector<double> v1 = values(eval_vec(ctx, frame[0]));
    const std::vector<double> v2 = values(eval_vec(ctx, frame[1]));
    // deta(V2, V1) = 1
    CHECK(form2_apply(o.deta, v2, v1) == doctest::Approx(1.0).epsilon(1e-12));
    // deta(phi V1, V2) = 0 because phi V1 = V2
    const std::vector<double> fv1 = mat_apply(o.phi, v1);
    CHECK(std::abs(form2_apply(o.deta, fv1, v2)) < 1e-12);
    for (int k = 0; k < 3; ++k)
        CHECK(fv1[static_cast<std::size_t>(k)] ==
              doctest::Approx(v2[static_cast<std::size_t>(k)]).epsilon(1e-12));
}

TEST_CASE("covariant-derivative formulas hold exactly on the closed-form class") {
    for (auto spec : {make_spec(1, {1.0}), make_spec(2, {1.0, 0.0, 0.0, 0.0}),
                      make_spec(2, {2.0, 1.0, 1.0, -1.0})}) {
        const ACMStructure s = heisenberg(spec);
        const Report r = qs_formulas_check(s, quick(8));
        CAPTURE(spec.n);
        CHECK(r.labels.at("quasi_sasakian") == "yes");
        CHECK(r.find("qs.covd")->verdict == "pass");
        CHECK(r.find("qs.covd_variant")->verdict == "pass");
        CHECK(r.find("qs.nabla_xi")->verdict == "pass");
    }
}

TEST_CASE("covariant-derivative formulas are gated on the classification") {
    SUBCASE("warped model has a non-closed fundamental form") {
        const Report r = qs_formulas_check(warped_model(), quick(6));
        CHECK(r.labels.at("quasi_sasakian") == "no");
        CHECK(r.find("qs.covd")->verdict == "n/a");
        CHECK(r.find("qs.covd")->note.find("dPhi") != std::string::npos);
    }
    SUBCASE("generic conjugated structure is not normal") {
        Rng rng(42);
        const ACMStructure s = testing::random_acm(rng, 1);
        const Report r = qs_formulas_check(s, quick(6));
        CHECK(r.labels.at("quasi_sasakian") == "no");
        CHECK(r.find("qs.nabla_xi")->verdict == "n/a");
    }
}

TEST_CASE("parallelism distribution: pointwise basis annihilates nab phi") {
    const ACMStructure s = heisenberg(make_spec(2, {1.0, 0.0, 0.0, 0.0}));
    Rng rng(13);
    const auto p = sample_point(rng, s.chart);
    const ACMPointData o = acm_point(s, p);
    const FoliationProbe probe = c_distribution(s, p);
    const int d = 5;
    REQUIRE(probe.basis.cols() == 3);
    for (int c = 0; c < probe.basis.cols(); ++c) {
        double worst = 0.0;
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                double v = 0.0;
                for (int i = 0; i < d; ++i)
                    v += probe.basis(i, c) * o.cov_phi[idx3(d, i, k, j)];
                worst = std::max(worst, std::abs(v));
            }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("foliation checks: dimension, invariance, involutivity") {
    SUBCASE("rank-one coefficient matrix in dimension five") {
        const ACMStructure s = heisenberg(make_spec(2, {1.0, 0.0, 0.0, 0.0}));
        const Report r = foliation_checks(s, quick(6));
        CHECK(r.labels.at("quasi_sasakian") == "yes");
        CHECK(r.labels.at("dim_c") == "3");
        for (const auto& row : r.rows) {
            CAPTURE(row.id);
            CHECK(row.verdict == "pass");
        }
    }
    SUBCASE("unit scalar coefficient: the distribution is the Reeb line") {
        const ACMStructure s = heisenberg(make_spec(1, {1.0}));
        const Report r = foliation_checks(s, quick(6));
        CHECK(r.labels.at("dim_c") == "1");
        CHECK(r.all_passed());
        Rng rng(17);
        const auto p = sample_point(rng, s.chart);
        const FoliationProbe probe = c_distribution(s, p);
        REQUIRE(probe.basis.cols() == 1);
        // the single basis vector is the Reeb vector up to sign
        CHECK(std::abs(probe.basis(2, 0)) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(probe.basis(0, 0)) < 1e-10);
        CHECK(std::abs(probe.basis(1, 0)) < 1e-10);
    }
    SUBCASE("zero coefficient matrix: everything is parallel") {
        const ACMStructure s = heisenberg(make_spec(1, {0.0}));
        const Report r = foliation_checks(s, quick(6));
        CHECK(r.labels.at("dim_c") == "3");
        CHECK(r.all_passed());
    }
    SUBCASE("non-quasi-Sasakian input is reported as out of scope") {
        const Report r = foliation_checks(warped_model(), quick(6));
        CHECK(r.labels.at("quasi_sasakian") == "no");
        CHECK(r.find("foliation.dim")->verdict == "n/a");
    }
}
