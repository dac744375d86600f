#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bsglab/interpolation.hpp"

using namespace bsg;

TEST_CASE("lemma gap vanishes for the Gaussian law (Stein identity)") {
    Noise g = Noise::gaussian();
    CHECK(lemma_gap(g, [](double x) { return std::sin(x); },
                    [](double x) { return std::cos(x); }) < 1e-9);
    CHECK(lemma_gap(g, [](double x) { return std::tanh(x); },
                    [](double x) { double c = std::cosh(x); return 1.0 / (c * c); }) < 1e-9);
}

TEST_CASE("lemma gap and bound have exact values for cubic f under rademacher") {
    Noise r = Noise::rademacher();
    // f = x^3: E[xi f(xi)] = E[xi^4] = 1, E[f'(xi)] = 3 E[xi^2] = 3, gap = 2
    double gap = lemma_gap(r, [](double x) { return x * x * x; },
                           [](double x) { return 3.0 * x * x; });
    CHECK(gap == doctest::Approx(2.0).epsilon(1e-13));
    // bound with m = 3, sup|f'''| = 6: (4/3!) E|xi|^4 * 6 = 4
    double bound = lemma_bound(r, 3, 6.0);
    CHECK(bound == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(gap <= bound);
}

TEST_CASE("lemma bound enforces its moment-matching hypothesis") {
    CHECK_THROWS_AS(lemma_bound(Noise::rademacher(), 5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma_bound(Noise::uniform(), 4, 1.0), std::invalid_argument);
    CHECK_NOTHROW(lemma_bound(Noise::three_point(), 5, 1.0));
    CHECK_NOTHROW(lemma_bound(Noise::gaussian(), 9, 1.0));
}

TEST_CASE("interpolating pressure hits both endpoints") {
    SystemShape s{3, 2, 0.8, Ensemble::bipartite};
    Matrix xi = sample_matrix(3, 2, Noise::rademacher(), 41, 0);
    Matrix g = sample_matrix(3, 2, Noise::gaussian(), 41, 1);
    CHECK(interpolating_pressure(s, xi, g, 1.0) ==
          doctest::Approx(pressure(s, xi)).epsilon(1e-13));
    CHECK(interpolating_pressure(s, xi, g, 0.0) ==
          doctest::Approx(pressure(s, g)).epsilon(1e-13));
    CHECK_THROWS_AS(interpolating_pressure(s, xi, g, 1.2), std::domain_error);
}

TEST_CASE("path derivative agrees with a secant through the path") {
    SystemShape s{2, 2, 0.7, Ensemble::bipartite};
    Matrix xi = sample_matrix(2, 2, Noise::rademacher(), 43, 0);
    Matrix g = sample_matrix(2, 2, Noise::gaussian(), 43, 1);
    double t = 0.4, h = 1e-3;
    double secant = (interpolating_pressure(s, xi, g, t + h) -
                     interpolating_pressure(s, xi, g, t - h)) / (2.0 * h);
    CHECK(path_derivative(s, xi, g, t) == doctest::Approx(secant).epsilon(1e-5));
    // substituted variable: d/du A(u^2) = 2u A'(u^2)
    double u = std::sqrt(t);
    CHECK(substituted_path_derivative(s, xi, g, u) ==
          doctest::Approx(2.0 * u * path_derivative(s, xi, g, t)).epsilon(1e-5));
    CHECK_THROWS_AS(path_derivative(s, xi, g, 0.0), std::domain_error);
}

TEST_CASE("interpolation path is monotone in t resolution and consistent") {
    SystemShape s{2, 3, 0.9, Ensemble::bipartite};
    Matrix xi = sample_matrix(2, 3, Noise::rademacher(), 47, 0);
    Matrix g = sample_matrix(2, 3, Noise::gaussian(), 47, 1);
    InterpolationPath path = interpolation_path(s, xi, g, {0.0, 0.25, 0.5, 0.75, 1.0});
    REQUIRE(path.values.size() == 5);
    CHECK(path.values.front() == doctest::Approx(pressure(s, g)).epsilon(1e-13));
    CHECK(path.values.back() == doctest::Approx(pressure(s, xi)).epsilon(1e-13));
}

TEST_CASE("fundamental theorem closes along the substituted path") {
    SystemShape s{2, 2, 0.6, Ensemble::bipartite};
    double residual = ftc_closure(s, Noise::rademacher(), 6, 64, 11);
    CHECK(residual < 1e-3);
    CHECK_THROWS_AS(ftc_closure(s, Noise::rademacher(), 0, 16, 1), std::invalid_argument);
}

TEST_CASE("cumulants of the dichotomic pair reduce to polynomials in omega") {
    SystemShape s{2, 2, 1.2, Ensemble::bipartite};
    Matrix xi = sample_matrix(2, 2, Noise::gaussian(), 53, 0);
    GibbsState state(s, xi);
    double w = state.spin_pair_moment(0, 1, 1);
    REQUIRE(std::abs(w) > 1e-4);  // non-degenerate draw
    CHECK(cumulant_polynomial(state, 0, 1, 1) == doctest::Approx(w).epsilon(1e-13));
    // x = sigma tau is +-1-valued: x^2 = 1, so P^2 = 1 - w^2 and
    // P^3 = E(x-w)^3 = -2w(1-w^2)
    CHECK(cumulant_polynomial(state, 0, 1, 2) ==
          doctest::Approx(1.0 - w * w).epsilon(1e-12));
    CHECK(cumulant_polynomial(state, 0, 1, 3) ==
          doctest::Approx(-2.0 * w * (1.0 - w * w)).epsilon(1e-11));
    CHECK_THROWS_AS(cumulant_polynomial(state, 0, 1, 7), std::invalid_argument);
}

TEST_CASE("derivative and theorem bounds take their closed-form values") {
    SystemShape s{2, 2, 0.5, Ensemble::bipartite};
    // m = 1: beta sqrt(2t) (N+K)^{-1/2} * 2!
    CHECK(derivative_norm_bound(s, 0.5, 1) ==
          doctest::Approx(0.5 * 1.0 * 0.5 * 2.0).epsilon(1e-13));
    // theorem bound at m = 3 for unit fourth moment:
    // (sqrt(2) * 0.5)^4 * (1/4) * 4 * 1 / 4 = 1/16
    CHECK(theorem1_bound(s, Noise::rademacher(), 3) ==
          doctest::Approx(0.0625).epsilon(1e-13));
    CHECK_THROWS_AS(derivative_norm_bound(s, 1.5, 1), std::domain_error);
    CHECK_THROWS_AS(theorem1_bound(s, Noise::rademacher(), 0), std::invalid_argument);
}

TEST_CASE("gap experiment with the Gaussian law against itself is identically zero") {
    std::vector<SystemShape> shapes{{2, 2, 0.5, Ensemble::bipartite},
                                    {3, 3, 0.5, Ensemble::bipartite}};
    GapExperiment exp = universality_gap_experiment(shapes, Noise::gaussian(), 3, 40, 61);
    REQUIRE(exp.rows.size() == 2);
    for (const GapRow& row : exp.rows) {
        CHECK(row.gap == 0.0);  // common random numbers: identical draws on both paths
        CHECK(row.se == 0.0);
        CHECK(row.pass);
    }
}

TEST_CASE("gap experiment rows carry the pinned bound and shape data") {
    std::vector<SystemShape> shapes{{2, 2, 0.5, Ensemble::bipartite},
                                    {4, 4, 0.5, Ensemble::bipartite}};
    GapExperiment exp = universality_gap_experiment(shapes, Noise::rademacher(), 3, 400, 67);
    REQUIRE(exp.rows.size() == 2);
    for (const GapRow& row : exp.rows) {
        CHECK(row.bound == doctest::Approx(theorem1_bound(
                               {row.n, row.k, row.beta, Ensemble::bipartite},
                               Noise::rademacher(), 3)));
        CHECK(row.se > 0.0);
        CHECK(std::isfinite(row.gap));
    }
    CHECK(exp.rows[1].bound < exp.rows[0].bound);  // decays with size
}

TEST_CASE("fit_slope recovers an exact line") {
    CHECK(fit_slope({1.0, 2.0, 3.0, 4.0}, {3.0, 1.0, -1.0, -3.0}) ==
          doctest::Approx(-2.0).epsilon(1e-13));
    CHECK_THROWS_AS(fit_slope({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_slope({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}
