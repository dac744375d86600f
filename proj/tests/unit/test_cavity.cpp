#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bsglab/cavity.hpp"
#include "bsglab/model.hpp"
#include "bsglab/rng.hpp"

using namespace bsg;

namespace {

// direct E[log Z] over the full +-1 disorder space (uniform weights)
double mean_log_z_signs(const SystemShape& shape) {
    int cells = shape.n * shape.k;
    double acc = 0.0;
    for (int mask = 0; mask < (1 << cells); ++mask) {
        Matrix xi(shape.n, shape.k);
        for (int c = 0; c < cells; ++c)
            xi(c / shape.k, c % shape.k) = (mask >> c) & 1 ? -1.0 : 1.0;
        acc += log_z_traced(shape, xi);
    }
    return acc / double(1 << cells);
}

}  // namespace

TEST_CASE("schedules cover every entry once and grow to the full system") {
    GrowthSchedule rm = entry_rowmajor_schedule(2, 3);
    CHECK(rm.step_count() == 6);
    CHECK_NOTHROW(rm.validate());
    CHECK(rm.flat_entries().size() == 6);
    CHECK(rm.entries_before(0) == 0);
    CHECK(rm.entries_before(6) == 6);
    CHECK(rm.steps.back().n_sub == 2);
    CHECK(rm.steps.back().k_sub == 3);

    GrowthSchedule bal = balanced_spin_schedule(3, 2);
    CHECK(bal.step_count() == 5);
    CHECK_NOTHROW(bal.validate());
    CHECK(bal.flat_entries().size() == 6);
    CHECK(bal.steps.back().n_sub == 3);
    CHECK(bal.steps.back().k_sub == 2);

    GrowthSchedule broken = rm;
    broken.steps[3].entries.clear();  // drops an entry from the covering
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("cavity decomposition sums to the full interaction exactly") {
    SystemShape s{3, 3, 0.9, Ensemble::bipartite};
    Matrix xi = sample_matrix(3, 3, Noise::gaussian(), 71, 0);
    GrowthSchedule sched = balanced_spin_schedule(3, 3);
    Rng rng(7);
    SpinConfig cfg;
    for (int i = 0; i < 3; ++i) cfg.sigma.push_back(rng.below(2) ? 1 : -1);
    for (int j = 0; j < 3; ++j) cfg.tau.push_back(rng.below(2) ? 1 : -1);
    double target = -s.beta * hamiltonian_energy(s, xi, cfg);
    for (int h = 0; h <= sched.step_count(); ++h) {
        CavityTerms terms = cavity_decomposition(s, xi, sched, h, cfg);
        CAPTURE(h);
        CHECK(terms.total() == doctest::Approx(target).epsilon(1e-12));
    }
    // h = 0 pins nothing: everything sits in the residual block
    CavityTerms empty = cavity_decomposition(s, xi, sched, 0, cfg);
    CHECK(empty.core == 0.0);
    CHECK(empty.residual == doctest::Approx(target).epsilon(1e-12));
    // h = H pins everything: the core is the whole interaction
    CavityTerms full = cavity_decomposition(s, xi, sched, sched.step_count(), cfg);
    CHECK(full.core == doctest::Approx(target).epsilon(1e-12));
    CHECK(full.residual == 0.0);
    CHECK_THROWS_AS(cavity_decomposition(s, xi, sched, 7, cfg), std::out_of_range);
}

TEST_CASE("conditional log Z interpolates between the mean and the draw") {
    SystemShape s{2, 2, 0.8, Ensemble::bipartite};
    Noise r = Noise::rademacher();
    Matrix xi = sample_matrix(2, 2, r, 73, 0);
    GrowthSchedule sched = entry_rowmajor_schedule(2, 2);

    CondValue full = conditional_log_z(s, r, xi, sched, 4);
    CHECK(full.exact);
    CHECK(full.value == doctest::Approx(log_z_traced(s, xi)).epsilon(1e-13));

    CondValue none = conditional_log_z(s, r, xi, sched, 0);
    CHECK(none.exact);
    CHECK(none.value == doctest::Approx(mean_log_z_signs(s)).epsilon(1e-12));
}

TEST_CASE("gaussian conditionals use tensor quadrature and match the oracle") {
    SystemShape s{2, 2, 0.7, Ensemble::bipartite};
    Noise g = Noise::gaussian();
    Matrix xi = sample_matrix(2, 2, g, 79, 0);
    GrowthSchedule sched = entry_rowmajor_schedule(2, 2);
    ConditionalConfig cc;
    cc.gh_nodes = 16;
    CondValue none = conditional_log_z(s, g, xi, sched, 0, cc);
    CHECK(none.exact);
    double oracle = quenched_pressure_gauss_hermite(s, 16) * s.total();
    CHECK(none.value == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("continuous non-gaussian laws fall back to Monte Carlo") {
    SystemShape s{2, 2, 0.6, Ensemble::bipartite};
    Noise u = Noise::uniform();
    Matrix xi = sample_matrix(2, 2, u, 83, 0);
    GrowthSchedule sched = entry_rowmajor_schedule(2, 2);
    ConditionalConfig cc;
    cc.mc_samples = 4000;
    CondValue none = conditional_log_z(s, u, xi, sched, 0, cc);
    CHECK_FALSE(none.exact);
    CHECK(none.se > 0.0);
    MeanSe ref = quenched_pressure(s, u, 4000, 999);
    double ref_logz = ref.mean * s.total(), ref_se = ref.se * s.total();
    CHECK(std::abs(none.value - ref_logz) < 5.0 * (none.se + ref_se));
}

TEST_CASE("martingale trace telescopes exactly for discrete laws") {
    SystemShape s{2, 2, 0.9, Ensemble::bipartite};
    Noise r = Noise::rademacher();
    Matrix xi = sample_matrix(2, 2, r, 89, 0);
    for (const GrowthSchedule& sched :
         {entry_rowmajor_schedule(2, 2), balanced_spin_schedule(2, 2)}) {
        MartingaleTrace trace = martingale_trace(s, r, xi, sched);
        CHECK(trace.exact);
        CHECK(trace.mc_se == 0.0);
        REQUIRE(int(trace.conditional.size()) == sched.step_count() + 1);
        REQUIRE(int(trace.delta.size()) == sched.step_count());
        CHECK(trace.telescoping_residual() < 1e-12);
        // a step revealing r entries obeys |Delta| <= r * (per-entry bound)
        std::size_t max_step = 0;
        for (const GrowthStep& st : sched.steps) max_step = std::max(max_step, st.entries.size());
        double linear = increment_bound(s, r, IncrementVariant::linear);
        for (double d : trace.delta) CHECK(std::abs(d) <= double(max_step) * linear + 1e-12);
    }
}

TEST_CASE("increment bound coefficients and domain") {
    SystemShape s{3, 5, 0.7, Ensemble::bipartite};
    Noise r = Noise::rademacher();
    CHECK(increment_bound(s, r, IncrementVariant::linear) ==
          doctest::Approx(0.7 * std::sqrt(2.0 / 8.0)).epsilon(1e-14));
    CHECK(increment_bound(s, r, IncrementVariant::squared) ==
          doctest::Approx(2.0 * 0.49 / 8.0).epsilon(1e-14));
    SystemShape hop{3, 2, 0.7, Ensemble::hopfield};
    CHECK_THROWS_AS(increment_bound(hop, r, IncrementVariant::linear), std::invalid_argument);
}

TEST_CASE("exhaustive martingale diagnostics vanish to machine precision") {
    SystemShape s{2, 2, 0.8, Ensemble::bipartite};
    Noise r = Noise::rademacher();
    for (const GrowthSchedule& sched :
         {entry_rowmajor_schedule(2, 2), balanced_spin_schedule(2, 2)}) {
        ExhaustiveMartingale ex = exhaustive_martingale(s, r, sched);
        CHECK(ex.max_martingale_residual < 1e-12);
        CHECK(ex.max_telescoping_residual < 1e-12);
        CHECK(ex.orthogonality_residual < 1e-12);
        std::size_t max_step = 0;
        for (const GrowthStep& st : sched.steps) max_step = std::max(max_step, st.entries.size());
        CHECK(ex.sup_abs_delta <= double(max_step) * s.beta * s.coupling() + 1e-12);
        CHECK(ex.mean_log_z == doctest::Approx(mean_log_z_signs(s)).epsilon(1e-12));
    }
}

TEST_CASE("exhaustive variance agrees with direct enumeration") {
    SystemShape s{2, 2, 0.8, Ensemble::bipartite};
    // direct Var(A) over the 16 sign matrices
    double mean = 0.0, sq = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
        Matrix xi(2, 2);
        for (int c = 0; c < 4; ++c) xi(c / 2, c % 2) = (mask >> c) & 1 ? -1.0 : 1.0;
        double a = pressure(s, xi);
        mean += a / 16.0;
        sq += a * a / 16.0;
    }
    double var_direct = sq - mean * mean;
    ExhaustiveMartingale ex = exhaustive_martingale(s, Noise::rademacher(),
                                                    entry_rowmajor_schedule(2, 2));
    CHECK(ex.var_pressure == doctest::Approx(var_direct).epsilon(1e-11));
    // increment variances sum to Var(log Z) (orthogonality)
    double sum_delta_sq = 0.0;
    for (double v : ex.delta_sq_mean) sum_delta_sq += v;
    CHECK(sum_delta_sq == doctest::Approx(var_direct * 16.0).epsilon(1e-10));
}

TEST_CASE("three-point law exercises radix > 2 exhaustive folding") {
    SystemShape s{2, 2, 0.7, Ensemble::bipartite};
    ExhaustiveMartingale ex = exhaustive_martingale(s, Noise::three_point(),
                                                    entry_rowmajor_schedule(2, 2));
    CHECK(ex.max_martingale_residual < 1e-12);
    CHECK(ex.orthogonality_residual < 1e-12);
    CHECK(ex.sup_abs_delta <=
          s.beta * s.coupling() * Noise::three_point().support_bound() + 1e-12);
}

TEST_CASE("lp fluctuation experiment: rows, gating, and residuals") {
    std::vector<SystemShape> shapes{{2, 2, 0.5, Ensemble::bipartite},
                                    {4, 4, 0.5, Ensemble::bipartite}};
    LpExperiment exp = lp_fluctuation_experiment(shapes, Noise::rademacher(), 2.0, 200, 97);
    REQUIRE(exp.rows.size() == 2);
    for (const LpRow& row : exp.rows) {
        CHECK(row.moment > 0.0);
        CHECK(row.se > 0.0);
        CHECK(std::isfinite(row.bound_thm2));
        //  p = 2 with a third-order match law: the v2 hypothesis p < (m+1)/2 fails
        CHECK(std::isnan(row.bound_thm2v2));
    }
    // 2x2 fits the exhaustive cross-check budget, 4x4 does not
    CHECK(std::isfinite(exp.rows[0].c2_residual));
    CHECK(exp.rows[0].c2_residual < 1e-12);
    CHECK(std::isnan(exp.rows[1].c2_residual));
    CHECK(std::isfinite(exp.exponent));

    LpExperiment gexp = lp_fluctuation_experiment(shapes, Noise::gaussian(), 2.0, 100, 97);
    for (const LpRow& row : gexp.rows) CHECK(std::isfinite(row.bound_thm2v2));
    CHECK(std::isfinite(gexp.c_fit_thm2v2));
}
