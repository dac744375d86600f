#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bsglab/distributions.hpp"
#include "bsglab/rng.hpp"

using namespace bsg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("every catalogue law is centered with unit variance") {
    for (const char* spec : {"gaussian", "rademacher", "uniform", "three_point",
                             "table:-2,0.2;0.5,0.8"}) {
        Noise law = Noise::parse(spec);
        CAPTURE(spec);
        CHECK(std::abs(law.raw_moment(1)) < 1e-12);
        CHECK(law.raw_moment(2) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact raw moments of the named laws") {
    Noise g = Noise::gaussian(), r = Noise::rademacher(), u = Noise::uniform(),
          t = Noise::three_point();
    CHECK(g.raw_moment(4) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(g.raw_moment(6) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(r.raw_moment(3) == 0.0);
    CHECK(r.raw_moment(4) == doctest::Approx(1.0).epsilon(1e-14));
    // uniform on [-sqrt(3), sqrt(3)]: E x^4 = 9/5
    CHECK(u.raw_moment(4) == doctest::Approx(1.8).epsilon(1e-10));
    // three-point law matches the Gaussian fourth moment but not the sixth
    CHECK(t.raw_moment(4) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(t.raw_moment(6) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("gaussian match orders") {
    CHECK(Noise::rademacher().gaussian_match_order() == 3);
    CHECK(Noise::uniform().gaussian_match_order() == 3);
    CHECK(Noise::three_point().gaussian_match_order() == 5);
    CHECK(Noise::gaussian().gaussian_match_order() == 11);
    CHECK(Noise::gaussian().gaussian_match_order(7) == 7);
}

TEST_CASE("absolute moments: closed forms and quadrature") {
    CHECK(gaussian_abs_moment(1.0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
    CHECK(gaussian_abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gaussian_abs_moment(3.0) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / kPi)).epsilon(1e-12));
    CHECK(gaussian_abs_moment(4.0) == doctest::Approx(3.0).epsilon(1e-12));
    // the Noise-level quadrature agrees with the Gamma closed form
    Noise g = Noise::gaussian();
    for (double p : {0.5, 1.0, 2.5, 4.0})
        CHECK(g.abs_moment(p) == doctest::Approx(gaussian_abs_moment(p)).epsilon(1e-8));
    CHECK(Noise::rademacher().abs_moment(7.3) == doctest::Approx(1.0).epsilon(1e-14));
    // uniform: E|x|^p = 3^{p/2}/(p+1)
    CHECK(Noise::uniform().abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(Noise::uniform().abs_moment(4.0) == doctest::Approx(1.8).epsilon(1e-9));
}

TEST_CASE("spec strings round-trip through parse") {
    for (const char* spec : {"gaussian", "rademacher", "uniform", "three_point"}) {
        Noise law = Noise::parse(spec);
        CHECK(law.spec() == spec);
        CHECK(Noise::parse(law.spec()).spec() == law.spec());
    }
    Noise table = Noise::parse("table:-2,0.2;0.5,0.8");
    Noise again = Noise::parse(table.spec());
    CHECK(again.values() == table.values());
    CHECK(again.probs() == table.probs());
    CHECK_THROWS_AS(Noise::parse("cauchy"), std::invalid_argument);
    CHECK_THROWS_AS(Noise::parse("table:"), std::invalid_argument);
    CHECK_THROWS_AS(Noise::parse("table:1,0.5;x,0.5"), std::invalid_argument);
}

TEST_CASE("discrete tables must be centered unit-variance probability laws") {
    CHECK_THROWS_AS(Noise::discrete_table({-1.0, 1.0}, {0.3, 0.7}), std::invalid_argument);
    CHECK_THROWS_AS(Noise::discrete_table({-2.0, 2.0}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Noise::discrete_table({-1.0, 1.0}, {0.6, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(Noise::discrete_table({1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(Noise::discrete_table({-1.0, 1.0}, {0.5, 0.5}));
}

TEST_CASE("inverse-CDF sampling hits the discrete atoms at the right rates") {
    Noise t = Noise::three_point();
    CHECK(t.sample(0.05) == doctest::Approx(-std::sqrt(3.0)));
    CHECK(t.sample(0.5) == 0.0);
    CHECK(t.sample(0.95) == doctest::Approx(std::sqrt(3.0)));
    CHECK(Noise::rademacher().sample(0.2) == -1.0);
    CHECK(Noise::rademacher().sample(0.8) == 1.0);
    CHECK_THROWS_AS(Noise::rademacher().sample(0.0), std::domain_error);
    CHECK_THROWS_AS(Noise::rademacher().sample(1.0), std::domain_error);
    // continuous laws: quantiles of the uniform on [-sqrt(3), sqrt(3)]
    CHECK(Noise::uniform().sample(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(Noise::uniform().sample(0.75) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("expect() is exact for discrete laws and accurate for continuous ones") {
    Noise r = Noise::rademacher();
    CHECK(r.expect([](double x) { return std::cos(x); }) ==
          doctest::Approx(std::cos(1.0)).epsilon(1e-14));
    Noise g = Noise::gaussian();
    CHECK(g.expect([](double x) { return std::cos(x); }) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
    Noise u = Noise::uniform();
    CHECK(u.expect([](double x) { return x * x * x * x; }) ==
          doctest::Approx(1.8).epsilon(1e-9));
}

TEST_CASE("support bounds") {
    CHECK(Noise::rademacher().support_bound() == 1.0);
    CHECK(Noise::uniform().support_bound() == doctest::Approx(std::sqrt(3.0)));
    CHECK(Noise::three_point().support_bound() == doctest::Approx(std::sqrt(3.0)));
    CHECK_THROWS_AS(Noise::gaussian().support_bound(), std::domain_error);
    CHECK(Noise::gaussian().bounded() == false);
    CHECK(Noise::uniform().discrete() == false);
    CHECK(Noise::three_point().discrete() == true);
}

TEST_CASE("sample_matrix is reproducible and entry-addressed") {
    Noise g = Noise::gaussian();
    Matrix a = sample_matrix(3, 5, g, 99, 4);
    Matrix b = sample_matrix(3, 5, g, 99, 4);
    CHECK(a.data() == b.data());
    CHECK(sample_matrix(3, 5, g, 99, 5).data() != a.data());
    CHECK(sample_matrix(3, 5, g, 100, 4).data() != a.data());
    // law sanity on a larger draw
    Matrix big = sample_matrix(200, 200, g, 7, 0);
    double mean = 0.0, var = 0.0;
    for (double v : big.data()) mean += v;
    mean /= big.data().size();
    for (double v : big.data()) var += (v - mean) * (v - mean);
    var /= big.data().size();
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("sample_matrix_pair shares uniforms across laws") {
    Matrix r(1, 1), g(1, 1);
    sample_matrix_pair(16, 16, Noise::rademacher(), Noise::gaussian(), 11, 2, r, g);
    REQUIRE(r.rows() == 16);
    REQUIRE(g.rows() == 16);
    // both inverse CDFs are monotone with median 0, so the signs agree entry-wise
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            CHECK(std::abs(r(i, j)) == 1.0);
            CHECK((g(i, j) >= 0.0) == (r(i, j) > 0.0));
        }
    // the law-a path must coincide with a plain sample of the same stream
    Matrix direct = sample_matrix(16, 16, Noise::rademacher(), 11, 2);
    CHECK(direct.data() == r.data());
}

TEST_CASE("moment_profile aggregates match order and absolute moments") {
    MomentProfile prof = moment_profile(Noise::rademacher(), {1.0, 2.0, 4.0});
    CHECK(prof.match_order == 3);
    REQUIRE(prof.abs_moments.size() == 3);
    CHECK(prof.abs_moments[2].first == 4.0);
    CHECK(prof.abs_moments[2].second == doctest::Approx(1.0));
}
