#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "crgeo/errors.hpp"
#include "crgeo/expr.hpp"

using namespace crgeo;

namespace {

const std::vector<std::string> kXYZ{"x", "y", "z"};

double fd_first(const Expr& e, std::vector<double> p, int i, double h = 1e-5) {
    p[static_cast<std::size_t>(i)] += h;
    const double up = eval_value(e, p);
    p[static_cast<std::size_t>(i)] -= 2.0 * h;
    const double dn = eval_value(e, p);
    return (up - dn) / (2.0 * h);
}

double fd_second(const Expr& e, std::vector<double> p, int i, int j, double h = 1e-4) {
    auto at = [&](double di, double dj) {
        std::vector<double> q = p;
        q[static_cast<std::size_t>(i)] += di;
        q[static_cast<std::size_t>(j)] += dj;
        return eval_value(e, q);
    };
    if (i == j) return (at(h, 0) - 2.0 * at(0, 0) + at(-h, 0)) / (h * h);
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

} // namespace

TEST_CASE("parse and print round-trip") {
    const std::vector<std::string> sources{
        "x + y*z",
        "sin(x)*exp(y) - z^2",
        "1/(1 + x^2) + sqrt(1 + y^2)",
        "-x^3 + 2.5*cos(z) - sinh(y)/cosh(y)",
        "log(2 + x) * (y - z)^2",
    };
    for (const auto& src : sources) {
        const Expr e1 = parse_expr(src, kXYZ);
        const std::string printed = to_string(e1, kXYZ);
        const Expr e2 = parse_expr(printed, kXYZ);
        // printing is idempotent
        CHECK(to_string(e2, kXYZ) == printed);
        // and semantics are preserved, including derivatives
        const std::vector<double> p{0.3, -0.4, 0.2};
        JetContext c1(p), c2(p);
        const Jet2& j1 = c1.eval(e1);
        const Jet2& j2 = c2.eval(e2);
        CHECK(j1.value() == doctest::Approx(j2.value()).epsilon(1e-15));
        for (int i = 0; i < 3; ++i) {
            CHECK(j1.d(i) == doctest::Approx(j2.d(i)).epsilon(1e-15));
            for (int j = 0; j < 3; ++j)
                CHECK(j1.dd(i, j) == doctest::Approx(j2.dd(i, j)).epsilon(1e-15));
        }
    }
}

TEST_CASE("jet derivatives match central differences") {
    const Expr e = parse_expr("sin(x)*exp(y) + x^3/(1 + z^2) - cos(y*z)", kXYZ);
    const std::vector<std::vector<double>> pts{
        {0.3, -0.2, 0.5}, {-0.7, 0.4, -0.1}, {0.05, 0.8, 0.33}};
    for (const auto& p : pts) {
        JetContext ctx(p);
        const Jet2& j = ctx.eval(e);
        CHECK(j.value() == doctest::Approx(eval_value(e, p)).epsilon(1e-14));
        for (int i = 0; i < 3; ++i) {
            CHECK(j.d(i) == doctest::Approx(fd_first(e, p, i)).epsilon(1e-8));
            for (int k = i; k < 3; ++k) {
                CHECK(j.dd(i, k) ==
                      doctest::Approx(fd_second(e, p, i, k)).epsilon(5e-5).scale(1.0));
                CHECK(j.dd(i, k) == doctest::Approx(j.dd(k, i)).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("polynomial derivatives are exact") {
    // p(x, y) = 3 x^2 y - 2 y^3
    const Expr e = parse_expr("3*x^2*y - 2*y^3", kXYZ);
    const double a = 0.37, b = -0.81;
    const std::vector<double> p{a, b, 0.0};
    JetContext ctx(p);
    const Jet2& j = ctx.eval(e);
    CHECK(j.value() == doctest::Approx(3 * a * a * b - 2 * b * b * b).epsilon(1e-15));
    CHECK(j.d(0) == doctest::Approx(6 * a * b).epsilon(1e-15));
    CHECK(j.d(1) == doctest::Approx(3 * a * a - 6 * b * b).epsilon(1e-15));
    CHECK(j.dd(0, 0) == doctest::Approx(6 * b).epsilon(1e-15));
    CHECK(j.dd(0, 1) == doctest::Approx(6 * a).epsilon(1e-15));
    CHECK(j.dd(1, 1) == doctest::Approx(-12 * b).epsilon(1e-15));
}

TEST_CASE("parse errors carry the offending offset") {
    auto offset_of = [](const std::string& src) -> std::size_t {
        try {
            (void)parse_expr(src, kXYZ);
        } catch (const ParseError& e) {
            return e.offset();
        }
        FAIL("expected a parse error");
        return std::string::npos;
    };
    CHECK(offset_of("x +* y") == 3);
    CHECK(offset_of("x + (y") == 6);
    CHECK(offset_of("x + q") == 4);
    CHECK(offset_of("x ^ y") == 4);
    CHECK(offset_of("") == 0);
}

TEST_CASE("evaluation domain errors") {
    const Expr e = parse_expr("log(x)", kXYZ);
    CHECK_THROWS_AS((void)eval_value(e, {-1.0, 0.0, 0.0}), EvalError);
    const Expr q = parse_expr("1/x", kXYZ);
    CHECK_THROWS_AS((void)eval_value(q, {0.0, 0.0, 0.0}), EvalError);
}

TEST_CASE("programmatic builders fold constants") {
    const Expr zero = Expr::constant(0.0);
    const Expr one = Expr::constant(1.0);
    const Expr x = Expr::coord(0);
    CHECK(to_string(zero * x + zero, kXYZ) == "0");
    CHECK(to_string(one * x, kXYZ) == "x");
    CHECK(to_string(x + zero, kXYZ) == "x");
    CHECK(eval_value(Expr::constant(2.0) * Expr::constant(3.0) + one, {0.0}) == 7.0);
}
