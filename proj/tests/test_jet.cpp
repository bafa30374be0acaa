#include "doctest.h"

#include <cmath>

#include "crgeo/errors.hpp"
#include "crgeo/jet.hpp"

using crgeo::Jet2;

TEST_CASE("jet constants and coordinates") {
    const Jet2 c = Jet2::constant(3, 2.5);
    CHECK(c.value() == 2.5);
    for (int i = 0; i < 3; ++i) {
        CHECK(c.d(i) == 0.0);
        for (int j = 0; j < 3; ++j) CHECK(c.dd(i, j) == 0.0);
    }
    const Jet2 x = Jet2::coordinate(3, 1, 0.7);
    CHECK(x.value() == 0.7);
    CHECK(x.d(0) == 0.0);
    CHECK(x.d(1) == 1.0);
    CHECK(x.d(2) == 0.0);
    CHECK(x.dd(1, 1) == 0.0);
}

TEST_CASE("jet product rule against closed forms") {
    // f(x, y) = sin(x) exp(y) at (0.3, -0.2)
    const double a = 0.3, b = -0.2;
    const Jet2 x = Jet2::coordinate(2, 0, a);
    const Jet2 y = Jet2::coordinate(2, 1, b);
    const Jet2 f = sin(x) * exp(y);
    const double e = std::exp(b);
    CHECK(f.value() == doctest::Approx(std::sin(a) * e).epsilon(1e-14));
    CHECK(f.d(0) == doctest::Approx(std::cos(a) * e).epsilon(1e-14));
    CHECK(f.d(1) == doctest::Approx(std::sin(a) * e).epsilon(1e-14));
    CHECK(f.dd(0, 0) == doctest::Approx(-std::sin(a) * e).epsilon(1e-14));
    CHECK(f.dd(0, 1) == doctest::Approx(std::cos(a) * e).epsilon(1e-14));
    CHECK(f.dd(1, 0) == doctest::Approx(std::cos(a) * e).epsilon(1e-14));
    CHECK(f.dd(1, 1) == doctest::Approx(std::sin(a) * e).epsilon(1e-14));
}

TEST_CASE("jet quotient rule") {
    // f(x, y) = x / y at (1.2, 0.8): f_xy = -1/y^2, f_yy = 2x/y^3
    const double a = 1.2, b = 0.8;
    const Jet2 x = Jet2::coordinate(2, 0, a);
    const Jet2 y = Jet2::coordinate(2, 1, b);
    const Jet2 f = x / y;
    CHECK(f.value() == doctest::Approx(a / b).epsilon(1e-14));
    CHECK(f.d(0) == doctest::Approx(1.0 / b).epsilon(1e-14));
    CHECK(f.d(1) == doctest::Approx(-a / (b * b)).epsilon(1e-14));
    CHECK(f.dd(0, 1) == doctest::Approx(-1.0 / (b * b)).epsilon(1e-14));
    CHECK(f.dd(1, 1) == doctest::Approx(2.0 * a / (b * b * b)).epsilon(1e-14));
}

TEST_CASE("jet chain rule through composed functions") {
    // f(x) = sqrt(1 + x^2): f' = x/s, f'' = 1/s^3 with s = sqrt(1+x^2)
    const double a = 0.6;
    const Jet2 x = Jet2::coordinate(1, 0, a);
    const Jet2 f = sqrt(Jet2::constant(1, 1.0) + x * x);
    const double s = std::sqrt(1.0 + a * a);
    CHECK(f.value() == doctest::Approx(s).epsilon(1e-14));
    CHECK(f.d(0) == doctest::Approx(a / s).epsilon(1e-14));
    CHECK(f.dd(0, 0) == doctest::Approx(1.0 / (s * s * s)).epsilon(1e-13));

    // log(cosh(x)): d = tanh, dd = 1 - tanh^2
    const Jet2 g = log(cosh(x));
    const double t = std::tanh(a);
    CHECK(g.value() == doctest::Approx(std::log(std::cosh(a))).epsilon(1e-14));
    CHECK(g.d(0) == doctest::Approx(t).epsilon(1e-14));
    CHECK(g.dd(0, 0) == doctest::Approx(1.0 - t * t).epsilon(1e-13));

    // sinh'' = sinh
    const Jet2 h = sinh(x);
    CHECK(h.dd(0, 0) == doctest::Approx(std::sinh(a)).epsilon(1e-14));
}

TEST_CASE("jet integer powers") {
    const double a = -0.9;
    const Jet2 x = Jet2::coordinate(1, 0, a);
    const Jet2 p0 = pow_int(x, 0);
    CHECK(p0.value() == 1.0);
    CHECK(p0.d(0) == 0.0);
    const Jet2 p3 = pow_int(x, 3);
    CHECK(p3.value() == doctest::Approx(a * a * a).epsilon(1e-14));
    CHECK(p3.d(0) == doctest::Approx(3.0 * a * a).epsilon(1e-14));
    CHECK(p3.dd(0, 0) == doctest::Approx(6.0 * a).epsilon(1e-14));
    const Jet2 pm2 = pow_int(x, -2);
    CHECK(pm2.value() == doctest::Approx(1.0 / (a * a)).epsilon(1e-13));
    CHECK(pm2.d(0) == doctest::Approx(-2.0 / (a * a * a)).epsilon(1e-13));
}

TEST_CASE("jet domain errors") {
    const Jet2 x = Jet2::coordinate(1, 0, -1.0);
    CHECK_THROWS_AS((void)log(x), crgeo::EvalError);
    CHECK_THROWS_AS((void)sqrt(x), crgeo::EvalError);
    const Jet2 z = Jet2::constant(1, 0.0);
    CHECK_THROWS_AS((void)(x / z), crgeo::EvalError);
    CHECK_THROWS_AS((void)pow_int(z, -1), crgeo::EvalError);
    CHECK_THROWS_AS((void)Jet2::constant(0, 1.0), crgeo::NumericsError);
    CHECK_THROWS_AS((void)Jet2::constant(13, 1.0), crgeo::NumericsError);
}
