#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bsglab/quadrature.hpp"

using namespace bsg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Gauss-Hermite nodes are symmetric and weights sum to sqrt(pi)") {
    for (int n : {1, 2, 5, 10, 31, 64}) {
        GaussHermite rule = gauss_hermite(n);
        REQUIRE(int(rule.x.size()) == n);
        REQUIRE(int(rule.w.size()) == n);
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            wsum += rule.w[i];
            CHECK(rule.w[i] > 0.0);
            if (i > 0) CHECK(rule.x[i] > rule.x[i - 1]);
            CHECK(rule.x[i] == doctest::Approx(-rule.x[n - 1 - i]).epsilon(1e-13));
        }
        CHECK(wsum == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    }
}

TEST_CASE("Gauss-Hermite integrates monomials exactly up to degree 2n-1") {
    // integral of x^{2m} e^{-x^2} dx = sqrt(pi) (2m-1)!! / 2^m
    GaussHermite rule = gauss_hermite(6);  // exact through degree 11
    for (int m : {0, 1, 2, 3, 4, 5}) {
        double dfact = 1.0;
        for (int q = 2 * m - 1; q > 1; q -= 2) dfact *= q;
        double want = std::sqrt(kPi) * dfact / std::pow(2.0, m);
        double got = 0.0, got_odd = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            got += rule.w[i] * std::pow(rule.x[i], 2 * m);
            got_odd += rule.w[i] * std::pow(rule.x[i], 2 * m + 1);
        }
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::abs(got_odd) < 1e-12);
    }
}

TEST_CASE("gauss_hermite_expect reproduces standard normal expectations") {
    CHECK(gauss_hermite_expect([](double g) { return g * g; }, 8) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gauss_hermite_expect([](double g) { return g * g * g * g; }, 8) ==
          doctest::Approx(3.0).epsilon(1e-13));
    // E[cos g] = exp(-1/2), analytic
    CHECK(gauss_hermite_expect([](double g) { return std::cos(g); }, 24) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
    CHECK(std::abs(gauss_hermite_expect([](double g) { return std::sin(g); }, 24)) < 1e-14);
}

TEST_CASE("adaptive Simpson hits analytic integrals") {
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-13) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // mildly singular derivative at zero still converges
    CHECK(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("quadrature argument validation") {
    CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_hermite(-3), std::invalid_argument);
}
