#pragma once
// Disorder-universality machinery: the Gaussian-approximation lemma, the
// interpolating pressure between an arbitrary unit-variance disorder and the
// Gaussian one, Gibbs cumulants of the coupled spin pair with their uniform
// derivative bounds, and the desk-scale universality-gap experiment.
#include <cstdint>
#include <functional>
#include <vector>

#include "bsglab/distributions.hpp"
#include "bsglab/model.hpp"

namespace bsg {

// |E[xi f(xi)] - E[xi^2] E[f'(xi)]|, expectations exact/quadrature (tol 1e-10).
double lemma_gap(const Noise& noise, const std::function<double(double)>& f,
                 const std::function<double(double)>& fprime, double tol = 1e-10);

// ((m+1)/m!) E|xi|^{m+1} sup|f^{(m)}|. Requires the law to match Gaussian
// moments through order m (precondition of the approximation lemma).
double lemma_bound(const Noise& noise, int m, double f_m_sup);

// Pressure of the interpolating system: couplings sqrt(t) xi + sqrt(1-t) g.
// Endpoints: t=0 is the Gaussian draw, t=1 the xi draw (exact per draw).
double interpolating_pressure(const SystemShape& shape, const Matrix& xi, const Matrix& g,
                              double t);

// Central finite difference of A(t) in t; interior t only (the per-draw path
// derivative has 1/sqrt(t) and 1/sqrt(1-t) endpoint singularities).
double path_derivative(const SystemShape& shape, const Matrix& xi, const Matrix& g, double t,
                       double step = 1e-5);

// d/du A(u^2): derivative along the substituted path (t = u^2 removes the
// 1/sqrt(t) singularity). Interior u in (0,1); used by the fundamental-
// theorem closure check on a u-uniform midpoint grid.
double substituted_path_derivative(const SystemShape& shape, const Matrix& xi, const Matrix& g,
                                   double u, double step = 1e-4);

struct InterpolationPath {
    SystemShape shape;
    std::vector<double> t_grid;
    std::vector<double> values;  // A(t) per node
};

InterpolationPath interpolation_path(const SystemShape& shape, const Matrix& xi, const Matrix& g,
                                     const std::vector<double>& t_grid);

// Quenched fundamental-theorem closure: |mean_s integral_0^1 A'(t) dt -
// mean_s (A(1)-A(0))|, integrating with the mirrored substitutions t = u^2
// below t = 1/2 and t = 1 - v^2 above it (midpoint rule, n_panels per half),
// which removes both endpoint singularities of the per-sample derivative.
double ftc_closure(const SystemShape& shape, const Noise& noise, int n_samples, int n_panels,
                   std::uint64_t seed);

// Gibbs cumulant P^m of x = sigma_i tau_j (P^2 = 1 - omega(x)^2, P^3 the
// third cumulant, ...); orders m <= 6.
double cumulant_polynomial(const GibbsState& state, int i, int j, int m);

// Uniform bound on the m-th xi_ij-derivative of omega(sigma_i tau_j) along
// the interpolation: (beta sqrt(2t))^m (N+K)^{-m/2} (m+1)!.
double derivative_norm_bound(const SystemShape& shape, double t, int m);

// Universality gap bound:
// (sqrt(2) beta)^{m+1} alpha(1-alpha) (m+1) E|xi|^{m+1} / (N+K)^{(m-1)/2}.
double theorem1_bound(const SystemShape& shape, const Noise& noise, int m);

struct GapRow {
    int n = 0, k = 0;
    double beta = 0.0;
    int m = 0;
    double gap = 0.0;  // signed mean of A^xi - A^g (CRN + control variate)
    double se = 0.0;
    double bound = 0.0;
    bool pass = false;  // |gap| <= bound + 3 se
};

struct GapExperiment {
    std::vector<GapRow> rows;
    double exponent = 0.0;  // fitted log|gap| vs log(N+K) slope (NaN if < 2 sizes)
};

// Quenched-gap experiment with common random numbers and the exact per-entry
// log-cosh control variate on both paths (unbiased for the mean gap).
GapExperiment universality_gap_experiment(const std::vector<SystemShape>& shapes,
                                          const Noise& noise, int m, int n_samples,
                                          std::uint64_t seed);

// Least-squares slope of y against x (used for log-log decay fits).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bsg
