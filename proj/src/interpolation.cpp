#include "bsglab/interpolation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bsglab/quadrature.hpp"
#include "bsglab/rng.hpp"

namespace bsg {

namespace {

inline double log_2cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a));
}

Matrix blend(const Matrix& xi, const Matrix& g, double t) {
    const double a = std::sqrt(t), b = std::sqrt(1.0 - t);
    Matrix out(xi.rows(), xi.cols());
    for (int i = 0; i < xi.rows(); ++i)
        for (int j = 0; j < xi.cols(); ++j) out(i, j) = a * xi(i, j) + b * g(i, j);
    return out;
}

void check_pair(const SystemShape& shape, const Matrix& xi, const Matrix& g, const char* who) {
    shape.validate();
    if (xi.rows() != shape.n || xi.cols() != shape.k || g.rows() != shape.n ||
        g.cols() != shape.k)
        throw std::invalid_argument(std::string(who) + ": disorder dimensions must both match the shape");
}

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace

double lemma_gap(const Noise& noise, const std::function<double(double)>& f,
                 const std::function<double(double)>& fprime, double tol) {
    double lhs = noise.expect([&](double x) { return x * f(x); }, tol);
    double rhs = noise.raw_moment(2) * noise.expect(fprime, tol);
    return std::abs(lhs - rhs);
}

double lemma_bound(const Noise& noise, int m, double f_m_sup) {
    if (m < 1) throw std::invalid_argument("lemma_bound: m must be >= 1");
    if (!(f_m_sup >= 0.0)) throw std::invalid_argument("lemma_bound: sup|f^(m)| must be >= 0");
    if (noise.gaussian_match_order(m) < m)
        throw std::invalid_argument(
            "lemma_bound: law matches Gaussian moments only to order " +
            std::to_string(noise.gaussian_match_order(m)) + " < m = " + std::to_string(m));
    return (double(m) + 1.0) / factorial(m) * noise.abs_moment(m + 1) * f_m_sup;
}

double interpolating_pressure(const SystemShape& shape, const Matrix& xi, const Matrix& g,
                              double t) {
    check_pair(shape, xi, g, "interpolating_pressure");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("interpolating_pressure: t must lie in [0,1]");
    if (t == 0.0) return pressure(shape, g);
    if (t == 1.0) return pressure(shape, xi);
    return pressure(shape, blend(xi, g, t));
}

double path_derivative(const SystemShape& shape, const Matrix& xi, const Matrix& g, double t,
                       double step) {
    check_pair(shape, xi, g, "path_derivative");
    if (!(step > 0.0)) throw std::invalid_argument("path_derivative: step must be positive");
    if (!(t > 0.0 && t < 1.0))
        throw std::domain_error(
            "path_derivative: t must lie strictly inside (0,1); the per-draw derivative is "
            "singular at the endpoints");
    double h = std::min(step, 0.5 * std::min(t, 1.0 - t));
    return (interpolating_pressure(shape, xi, g, t + h) -
            interpolating_pressure(shape, xi, g, t - h)) /
           (2.0 * h);
}

double substituted_path_derivative(const SystemShape& shape, const Matrix& xi, const Matrix& g,
                                   double u, double step) {
    check_pair(shape, xi, g, "substituted_path_derivative");
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("substituted_path_derivative: u must lie in (0,1)");
    if (!(step > 0.0))
        throw std::invalid_argument("substituted_path_derivative: step must be positive");
    // keep the stencil inside [0,1]; A(u^2) is smooth there for u in (0,1)
    double h = std::min({step, u, 0.5 * (1.0 - u)});
    double up = u + h, um = u - h;
    return (interpolating_pressure(shape, xi, g, up * up) -
            interpolating_pressure(shape, xi, g, um * um)) /
           (2.0 * h);
}

InterpolationPath interpolation_path(const SystemShape& shape, const Matrix& xi, const Matrix& g,
                                     const std::vector<double>& t_grid) {
    check_pair(shape, xi, g, "interpolation_path");
    InterpolationPath path;
    path.shape = shape;
    path.t_grid = t_grid;
    path.values.reserve(t_grid.size());
    for (double t : t_grid) path.values.push_back(interpolating_pressure(shape, xi, g, t));
    return path;
}

double ftc_closure(const SystemShape& shape, const Noise& noise, int n_samples, int n_panels,
                   std::uint64_t seed) {
    shape.validate();
    if (n_samples < 1 || n_panels < 2)
        throw std::invalid_argument("ftc_closure: need n_samples >= 1 and n_panels >= 2");
    const Noise gauss = Noise::gaussian();
    double integral = 0.0, jump = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        Matrix xi, g;
        sample_matrix_pair(shape.n, shape.k, noise, gauss, seed, std::uint64_t(s), xi, g);
        // split at t = 1/2 with mirrored substitutions t = u^2 and t = 1 - v^2:
        // each kills the inverse-square-root endpoint singularity on its half,
        // so the u- and v-integrands are smooth and midpoint converges at h^2
        const double half = 1.0 / std::sqrt(2.0);
        double acc = 0.0;
        for (int p = 0; p < n_panels; ++p) {
            double u = (p + 0.5) * half / n_panels;
            acc += substituted_path_derivative(shape, xi, g, u) * half / n_panels;
            acc += 2.0 * u * path_derivative(shape, xi, g, 1.0 - u * u) * half / n_panels;
        }
        integral += acc;
        jump += interpolating_pressure(shape, xi, g, 1.0) -
                interpolating_pressure(shape, xi, g, 0.0);
    }
    return std::abs(integral - jump) / n_samples;
}

double cumulant_polynomial(const GibbsState& state, int i, int j, int m) {
    if (m < 1) throw std::invalid_argument("cumulant_polynomial: order must be >= 1");
    if (m > 6)
        throw std::invalid_argument("cumulant_polynomial: orders above 6 are not implemented");
    double mu[7] = {1.0};
    for (int k = 1; k <= m; ++k) mu[k] = state.spin_pair_moment(i, j, k);
    const double m1 = mu[1], m2 = mu[2], m3 = mu[3], m4 = mu[4], m5 = mu[5], m6 = mu[6];
    double value = 0.0;
    switch (m) {
        case 1: value = m1; break;
        case 2: value = m2 - m1 * m1; break;
        case 3: value = m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1; break;
        case 4:
            value = m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 -
                    6.0 * m1 * m1 * m1 * m1;
            break;
        case 5:
            value = m5 - 5.0 * m4 * m1 - 10.0 * m3 * m2 + 20.0 * m3 * m1 * m1 +
                    30.0 * m2 * m2 * m1 - 60.0 * m2 * m1 * m1 * m1 +
                    24.0 * std::pow(m1, 5);
            break;
        case 6:
            value = m6 - 6.0 * m5 * m1 - 15.0 * m4 * m2 + 30.0 * m4 * m1 * m1 -
                    10.0 * m3 * m3 + 120.0 * m3 * m2 * m1 - 120.0 * m3 * m1 * m1 * m1 +
                    30.0 * m2 * m2 * m2 - 270.0 * m2 * m2 * m1 * m1 +
                    360.0 * m2 * std::pow(m1, 4) - 120.0 * std::pow(m1, 6);
            break;
    }
    // crude cumulant bound for a [-1,1]-valued observable
    if (std::abs(value) > factorial(m) * (1.0 + 1e-9))
        throw std::logic_error("cumulant_polynomial: |P^m| exceeded m! for a dichotomic pair");
    return value;
}

double derivative_norm_bound(const SystemShape& shape, double t, int m) {
    shape.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("derivative_norm_bound: t in [0,1]");
    if (m < 1) throw std::invalid_argument("derivative_norm_bound: m must be >= 1");
    return std::pow(shape.beta * std::sqrt(2.0 * t), m) *
           std::pow(double(shape.total()), -0.5 * m) * factorial(m + 1);
}

double theorem1_bound(const SystemShape& shape, const Noise& noise, int m) {
    shape.validate();
    if (m < 1) throw std::invalid_argument("theorem1_bound: m must be >= 1");
    if (noise.gaussian_match_order(m) < m)
        throw std::invalid_argument(
            "theorem1_bound: law matches Gaussian moments only to order " +
            std::to_string(noise.gaussian_match_order(m)) + " < m = " + std::to_string(m));
    const double alpha = shape.alpha();
    return std::pow(std::sqrt(2.0) * shape.beta, m + 1) * alpha * (1.0 - alpha) * (m + 1) *
           noise.abs_moment(m + 1) / std::pow(double(shape.total()), 0.5 * (m - 1));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need >= 2 matched points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
    return sxy / sxx;
}

GapExperiment universality_gap_experiment(const std::vector<SystemShape>& shapes,
                                          const Noise& noise, int m, int n_samples,
                                          std::uint64_t seed) {
    if (shapes.empty()) throw std::invalid_argument("universality_gap_experiment: no shapes");
    if (n_samples < 2) throw std::invalid_argument("universality_gap_experiment: n_samples >= 2");
    const Noise gauss = Noise::gaussian();

    GapExperiment exp;
    std::vector<double> log_sizes, log_gaps;
    for (std::size_t sh = 0; sh < shapes.size(); ++sh) {
        const SystemShape& shape = shapes[sh];
        shape.validate();
        const double scale = shape.beta * shape.coupling();
        const int cells = shape.n * shape.k;
        // exact means of the per-entry log-cosh control variate
        // both means go through Noise::expect so identical laws cancel bitwise
        const double cv_mean_xi =
            noise.expect([&](double x) { return log_2cosh(scale * x); });
        const double cv_mean_g =
            gauss.expect([&](double x) { return log_2cosh(scale * x); });

        double sum = 0.0, sumsq = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            Matrix xi, g;
            sample_matrix_pair(shape.n, shape.k, noise, gauss, seed + sh,
                               std::uint64_t(s), xi, g);
            double cv_xi = -cells * cv_mean_xi, cv_g = -cells * cv_mean_g;
            for (int i = 0; i < shape.n; ++i)
                for (int j = 0; j < shape.k; ++j) {
                    cv_xi += log_2cosh(scale * xi(i, j));
                    cv_g += log_2cosh(scale * g(i, j));
                }
            double d = (pressure(shape, xi) - cv_xi / shape.total()) -
                       (pressure(shape, g) - cv_g / shape.total());
            sum += d;
            sumsq += d * d;
        }
        GapRow row;
        row.n = shape.n;
        row.k = shape.k;
        row.beta = shape.beta;
        row.m = m;
        row.gap = sum / n_samples;
        row.se = std::sqrt(std::max(0.0, sumsq / n_samples - row.gap * row.gap) /
                           (n_samples - 1.0));
        row.bound = theorem1_bound(shape, noise, m);
        row.pass = std::abs(row.gap) <= row.bound + 3.0 * row.se;
        exp.rows.push_back(row);
        if (std::abs(row.gap) > 0.0) {
            log_sizes.push_back(std::log(double(shape.total())));
            log_gaps.push_back(std::log(std::abs(row.gap)));
        }
    }
    exp.exponent = (log_sizes.size() >= 2) ? fit_slope(log_sizes, log_gaps)
                                           : std::nan("");
    return exp;
}

}  // namespace bsg
