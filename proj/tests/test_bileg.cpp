#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <string>

#include "crgeo/bileg.hpp"
#include "helpers/random_structures.hpp"

namespace {

crgeo::ProbeOptions quick(int points = 12) {
    crgeo::ProbeOptions o;
    o.points = points;
    return o;
}

double label_num(const crgeo::Report& r, const std::string& key) {
    return std::stod(r.labels.at(key));
}

// Rescale tau by f = 1 + z/10 (and zeta by 1/f); adding (f^2 - 1) tau (x) tau
// to the metric keeps all structure axioms, but the structure field stops
// being the Reeb field of the rescaled form.
crgeo::APCMStructure rescaled_para_sasakian() {
    using crgeo::Expr;
    crgeo::APCMStructure s = crgeo::para_sasakian();
    const Expr f = 1.0 + 0.1 * Expr::coord(2);
    crgeo::APCMStructure t = s;
    for (std::size_t j = 0; j < 3; ++j) t.tau[j] = f * s.tau[j];
    for (std::size_t k = 0; k < 3; ++k) t.zeta[k] = s.zeta[k] / f;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            t.g[i][j] = s.g[i][j] + (f * f - 1.0) * s.tau[i] * s.tau[j];
    return t;
}

}  // namespace

TEST_CASE("reeb solve recovers the structure field on contact models") {
    for (const auto& s : {crgeo::para_sasakian(), crgeo::kappa_mu_example()}) {
        const crgeo::Report r = crgeo::reeb_equivalences(s, quick());
        const crgeo::CheckRow* solve = r.find("reeb.solve");
        REQUIRE(solve != nullptr);
        CHECK(solve->verdict == "pass");
        CHECK(solve->residual < 1e-9);
        CHECK(r.find("reeb.defined")->verdict == "pass");
        CHECK(r.find("reeb.lie_vs_iota")->verdict == "pass");
        CHECK(r.find("reeb.equals_zeta")->verdict == "pass");
        CHECK(r.find("reeb.lie_tau")->verdict == "pass");
        CHECK(r.find("reeb.autoparallel")->verdict == "pass");
        CHECK(r.find("reeb.h_anticommute")->verdict == "pass");
        CHECK(r.find("reeb.agree")->note == "verdicts: yyyy");
        CHECK(r.labels.at("reeb_is_zeta") == "yes");
        CHECK(label_num(r, "residual.reeb_deviation") < 1e-9);
    }
}

TEST_CASE("non-contact structures have no Reeb field") {
    CHECK_THROWS_AS((void)crgeo::reeb_equivalences(crgeo::flat_para_cosymplectic(1), quick()),
                    crgeo::GateError);
    CHECK_THROWS_AS((void)crgeo::bileg_invariants(crgeo::para_kenmotsu(), quick()),
                    crgeo::GateError);
    CHECK_THROWS_AS((void)crgeo::bileg_flatness(crgeo::flat_para_cosymplectic(2), quick()),
                    crgeo::GateError);
    CHECK_THROWS_AS((void)crgeo::bileg_report(crgeo::para_kenmotsu(), quick()),
                    crgeo::GateError);
}

TEST_CASE("rescaling tau detaches the structure field from the Reeb field") {
    const crgeo::APCMStructure s = rescaled_para_sasakian();
    const crgeo::Report v = crgeo::validate_apcm(s, quick());
    CHECK(v.all_passed());
    CHECK(v.labels.at("valid") == "yes");

    const crgeo::Report r = crgeo::reeb_equivalences(s, quick());
    CHECK(r.find("reeb.defined")->verdict == "pass");
    CHECK(r.find("reeb.solve")->verdict == "pass");
    CHECK(r.find("reeb.equals_zeta")->verdict == "n/a");
    CHECK(r.find("reeb.lie_tau")->verdict == "n/a");
    CHECK(r.find("reeb.autoparallel")->verdict == "n/a");
    CHECK(r.find("reeb.h_anticommute")->verdict == "n/a");
    CHECK(r.find("reeb.agree")->verdict == "pass");
    CHECK(r.find("reeb.agree")->note == "verdicts: nnnn");
    CHECK(r.labels.at("reeb_is_zeta") == "no");
    CHECK(label_num(r, "residual.reeb_deviation") > 1e-3);
}

TEST_CASE("gated invariant rows report diagnostics when hypotheses fail") {
    const crgeo::APCMStructure s = rescaled_para_sasakian();
    const crgeo::Report r = crgeo::bileg_invariants(s, quick());
    const crgeo::CheckRow* oracle = r.find("pang.plus_oracle");
    REQUIRE(oracle != nullptr);
    CHECK(oracle->verdict == "n/a");
    CHECK(oracle->note.find("gate not met") != std::string::npos);
    CHECK(r.labels.at("reeb_is_zeta") == "no");
    // chi(zeta, .) = 0 holds without any hypothesis
    CHECK(r.find("chi.reeb")->verdict == "pass");

    const crgeo::Report fl = crgeo::bileg_flatness(s, quick());
    CHECK(fl.find("flat.h")->verdict == "n/a");
    CHECK(fl.find("flat.h")->note.find("gate not met") != std::string::npos);
    CHECK(fl.labels.count("flat") == 1);
    CHECK(fl.labels.count("semi_flat") == 1);
}

TEST_CASE("para-Sasakian model is flat: Pang invariants, h and K1 all vanish") {
    const crgeo::APCMStructure s = crgeo::para_sasakian();
    const crgeo::Report inv = crgeo::bileg_invariants(s, quick());
    CHECK(inv.all_passed());
    CHECK(inv.labels.at("reeb_is_zeta") == "yes");
    CHECK(inv.labels.at("legendrian") == "yes");
    CHECK(inv.labels.at("paracontact") == "yes");
    CHECK(label_num(inv, "residual.pang_plus") < 1e-8);
    CHECK(label_num(inv, "residual.pang_minus") < 1e-8);

    const crgeo::Report fl = crgeo::bileg_flatness(s, quick());
    CHECK(fl.all_passed());
    CHECK(fl.labels.at("flat") == "yes");
    CHECK(fl.labels.at("semi_flat") == "yes");
    CHECK(fl.find("flat.h")->note.find("verdicts: yy") != std::string::npos);
    CHECK(fl.find("flat.normal")->note.find("verdicts: yy") != std::string::npos);
    CHECK(fl.find("flat.semiflat_h2")->note.find("verdicts: yy") != std::string::npos);
    CHECK(fl.find("flat.chi_h")->verdict == "pass");
}

TEST_CASE("kappa-mu example is semi-flat but not flat") {
    const crgeo::APCMStructure s = crgeo::kappa_mu_example();
    const crgeo::Report inv = crgeo::bileg_invariants(s, quick());
    CHECK(inv.all_passed());
    for (const char* id : {"pang.plus_oracle", "pang.minus_oracle", "pang.plus_h",
                           "pang.minus_h", "pang.symmetric", "pang.h_flips"}) {
        const crgeo::CheckRow* row = inv.find(id);
        REQUIRE(row != nullptr);
        CHECK(row->verdict == "pass");
        CHECK(row->residual < 1e-7);
    }
    for (const char* id : {"chi.symmetric", "chi.psi_left", "chi.psi_right", "chi.reeb",
                           "chi.cross", "chi.pang_plus", "chi.pang_minus"}) {
        const crgeo::CheckRow* row = inv.find(id);
        REQUIRE(row != nullptr);
        CHECK(row->verdict == "pass");
        CHECK(row->residual < 1e-7);
    }
    // one invariant vanishes, the other does not
    CHECK(label_num(inv, "residual.pang_plus") > 0.5);
    CHECK(label_num(inv, "residual.pang_minus") < 1e-8);

    const crgeo::Report fl = crgeo::bileg_flatness(s, quick());
    CHECK(fl.all_passed());
    CHECK(fl.labels.at("flat") == "no");
    CHECK(fl.labels.at("semi_flat") == "yes");
    CHECK(label_num(fl, "residual.h_squared") < 1e-8);
    CHECK(label_num(fl, "residual.h") > 0.5);
    CHECK(label_num(fl, "residual.K1") > 0.5);
    CHECK(fl.find("flat.h")->note.find("verdicts: nn") != std::string::npos);
    CHECK(fl.find("flat.normal")->note.find("verdicts: nn") != std::string::npos);
    CHECK(fl.find("flat.semiflat_h2")->note.find("verdicts: yy") != std::string::npos);
    CHECK(fl.find("flat.chi_h")->verdict == "pass");
}

TEST_CASE("curvature fit certifies the kappa-mu example as a (-1, 2) structure") {
    const crgeo::APCMStructure s = crgeo::kappa_mu_example();
    const crgeo::Report r = crgeo::kappa_mu_residual(s, quick());
    CHECK(r.all_passed());
    CHECK(std::abs(label_num(r, "kappa") + 1.0) < 1e-8);
    CHECK(std::abs(label_num(r, "mu") - 2.0) < 1e-6);
    CHECK(r.find("km.h2_shape")->residual < 1e-8);
    CHECK(r.find("km.curvature")->residual < 1e-6);
    CHECK(r.find("km.constant")->verdict == "pass");
    CHECK(r.labels.count("mu_note") == 0);
}

TEST_CASE("curvature fit on the para-Sasakian model gives kappa = -1 with h = 0") {
    const crgeo::APCMStructure s = crgeo::para_sasakian();
    const crgeo::Report r = crgeo::kappa_mu_residual(s, quick());
    CHECK(r.all_passed());
    CHECK(std::abs(label_num(r, "kappa") + 1.0) < 1e-8);
    CHECK(r.find("km.curvature")->residual < 1e-8);
    CHECK(r.labels.count("mu_note") == 1);
}

TEST_CASE("combined report carries rows from all four groups") {
    const crgeo::Report r = crgeo::bileg_report(crgeo::kappa_mu_example(), quick());
    CHECK(r.all_passed());
    for (const char* id : {"reeb.solve", "pang.plus_oracle", "chi.symmetric", "flat.h",
                           "flat.semiflat_h2", "km.curvature"})
        CHECK(r.find(id) != nullptr);
    CHECK(r.labels.at("reeb_is_zeta") == "yes");
    CHECK(r.labels.at("flat") == "no");
    CHECK(r.labels.at("semi_flat") == "yes");
    CHECK(r.labels.at("kappa") != "");
}
