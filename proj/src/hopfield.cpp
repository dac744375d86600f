#include "bsglab/hopfield.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bsglab/cavity.hpp"
#include "bsglab/interpolation.hpp"
#include "bsglab/quadrature.hpp"
#include "bsglab/rng.hpp"

namespace bsg {

namespace {

constexpr int kGapScanCellCap = 16;  // 2^(N*K) sign matrices

void check_hopfield(const SystemShape& shape, const char* who) {
    shape.validate();
    if (shape.ensemble != Ensemble::hopfield)
        throw std::invalid_argument(std::string(who) +
                                    ": bipartite-normalized shapes are handled by the model "
                                    "core; set ensemble = hopfield");
}

void check_dims(const SystemShape& shape, const Matrix& xi, const char* who) {
    if (xi.rows() != shape.n || xi.cols() != shape.k)
        throw std::invalid_argument(std::string(who) + ": disorder is " +
                                    std::to_string(xi.rows()) + "x" + std::to_string(xi.cols()) +
                                    " but the shape wants " + std::to_string(shape.n) + "x" +
                                    std::to_string(shape.k));
}

// Streaming log-sum-exp accumulator (same shape as the model core's).
struct LogSumExp {
    double max_term = -1e308;
    double sum = 0.0;
    void add(double x) {
        if (x <= max_term) {
            sum += std::exp(x - max_term);
        } else {
            sum = sum * std::exp(max_term - x) + 1.0;
            max_term = x;
        }
    }
    double value() const { return max_term + std::log(sum); }
};

// Gray-code walk over sigma with the pattern overlaps m_mu maintained
// incrementally; per_config maps the overlap vector to the summand exponent.
template <typename F>
double sigma_walk_lse(const SystemShape& shape, const Matrix& xi, F per_config) {
    const int n = shape.n, k = shape.k;
    if (n > kTracedCap)
        throw std::length_error("hopfield enumeration: N = " + std::to_string(n) +
                                " exceeds cap " + std::to_string(kTracedCap));
    std::vector<double> m(k, 0.0);
    std::vector<int> sigma(n, 1);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) m[j] += xi(i, j);

    LogSumExp lse;
    lse.add(per_config(m));
    const std::uint64_t count = 1ull << n;
    for (std::uint64_t step = 1; step < count; ++step) {
        int i = std::countr_zero(step);
        for (int j = 0; j < k; ++j) m[j] -= 2.0 * sigma[i] * xi(i, j);
        sigma[i] = -sigma[i];
        lse.add(per_config(m));
    }
    return lse.value();
}

}  // namespace

double hopfield_log_z(const SystemShape& shape, const Matrix& xi) {
    check_hopfield(shape, "hopfield_log_z");
    check_dims(shape, xi, "hopfield_log_z");
    const double c2 = shape.beta * shape.beta / (2.0 * shape.n);
    return sigma_walk_lse(shape, xi, [&](const std::vector<double>& m) {
        double q = 0.0;
        for (double v : m) q += v * v;
        return c2 * q;
    });
}

double hopfield_pressure(const SystemShape& shape, const Matrix& xi) {
    return hopfield_log_z(shape, xi) / shape.n;
}

double hopfield_pressure_quadrature(const SystemShape& shape, const Matrix& xi, int nodes) {
    check_hopfield(shape, "hopfield_pressure_quadrature");
    check_dims(shape, xi, "hopfield_pressure_quadrature");
    GaussHermite rule = gauss_hermite(nodes);
    const double inv_sqrt_pi = 1.0 / std::sqrt(4.0 * std::atan(1.0));
    const double sqrt2 = std::sqrt(2.0);
    const double bc = shape.beta / std::sqrt(double(shape.n));
    // per pattern: log E_tau exp(bc m tau), tau ~ N(0,1), by quadrature
    auto pattern_term = [&](double m) {
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.x.size(); ++q)
            acc += rule.w[q] * std::exp(bc * m * sqrt2 * rule.x[q]);
        return std::log(acc * inv_sqrt_pi);
    };
    double log_z = sigma_walk_lse(shape, xi, [&](const std::vector<double>& m) {
        double e = 0.0;
        for (double v : m) e += pattern_term(v);
        return e;
    });
    return log_z / shape.n;
}

double HopfieldGapScan::p_norm(double p) const {
    if (!(p > 0.0)) throw std::invalid_argument("HopfieldGapScan::p_norm: p must be > 0");
    double acc = 0.0;
    for (double d : abs_dev) acc += std::pow(d, p);
    return std::pow(acc / abs_dev.size(), 1.0 / p);
}

HopfieldGapScan uniform_gap_exhaustive(const SystemShape& shape) {
    check_hopfield(shape, "uniform_gap_exhaustive");
    const int cells = shape.n * shape.k;
    if (cells > kGapScanCellCap)
        throw std::length_error("uniform_gap_exhaustive: N*K = " + std::to_string(cells) +
                                " exceeds cap " + std::to_string(kGapScanCellCap) +
                                "; use hopfield_lp_experiment with sampled disorder");

    HopfieldGapScan scan;
    scan.n = shape.n;
    scan.k = shape.k;
    scan.beta = shape.beta;
    scan.bound = shape.alpha() * shape.beta * shape.beta;

    const std::uint64_t count = 1ull << cells;
    std::vector<double> pressure(count);
    Matrix xi(shape.n, shape.k);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (int c = 0; c < cells; ++c)
            xi(c / shape.k, c % shape.k) = (mask >> c) & 1 ? -1.0 : 1.0;
        pressure[mask] = hopfield_pressure(shape, xi);
        scan.mean_pressure += pressure[mask];
    }
    scan.mean_pressure /= double(count);
    scan.abs_dev.resize(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        scan.abs_dev[mask] = std::abs(pressure[mask] - scan.mean_pressure);
        scan.max_gap = std::max(scan.max_gap, scan.abs_dev[mask]);
    }
    return scan;
}

std::vector<LinfRow> linf_convergence_experiment(const std::vector<SystemShape>& shapes,
                                                 const std::vector<double>& betas,
                                                 const std::vector<double>& ps) {
    if (shapes.empty() || betas.empty() || ps.empty())
        throw std::invalid_argument("linf_convergence_experiment: empty input list");
    constexpr double slack = 1e-12;  // rounding headroom on exact inequalities
    std::vector<LinfRow> rows;
    for (const SystemShape& base : shapes)
        for (double beta : betas) {
            SystemShape shape = base;
            shape.beta = beta;
            HopfieldGapScan scan = uniform_gap_exhaustive(shape);
            double prev_norm = 0.0;
            for (double p : ps) {
                LinfRow row;
                row.n = shape.n;
                row.k = shape.k;
                row.beta = beta;
                row.max_gap = scan.max_gap;
                row.alpha_beta_sq = scan.bound;
                row.p = p;
                row.p_norm = scan.p_norm(p);
                row.pass = scan.max_gap <= scan.bound + slack &&
                           row.p_norm <= scan.max_gap + slack &&
                           row.p_norm + slack >= prev_norm;
                prev_norm = row.p_norm;
                rows.push_back(row);
            }
        }
    return rows;
}

ComparisonRecord comparison_inequality_check(const SystemShape& shape, int n_samples,
                                             std::uint64_t seed) {
    check_hopfield(shape, "comparison_inequality_check");
    if (n_samples < 2)
        throw std::invalid_argument("comparison_inequality_check: n_samples >= 2");

    ComparisonRecord rec;
    rec.n = shape.n;
    rec.k = shape.k;
    rec.beta = shape.beta;

    SystemShape sign_shape = shape;
    sign_shape.beta = 2.0 * shape.beta / (4.0 * std::atan(1.0));  // 2 beta / pi

    const Noise gauss = Noise::gaussian();
    const Noise rade = Noise::rademacher();
    double gsum = 0.0, gsq = 0.0, ssum = 0.0, ssq = 0.0, dsum = 0.0, dsq = 0.0;
    Matrix xg, xs;
    for (int s = 0; s < n_samples; ++s) {
        sample_matrix_pair(shape.n, shape.k, gauss, rade, seed, std::uint64_t(s), xg, xs);
        double ag = hopfield_pressure(shape, xg);
        double as = hopfield_pressure(sign_shape, xs);
        gsum += ag;
        gsq += ag * ag;
        ssum += as;
        ssq += as * as;
        double d = ag - as;
        dsum += d;
        dsq += d * d;
    }
    auto finish = [n_samples](double sum, double sq, double& mean, double& se) {
        mean = sum / n_samples;
        se = std::sqrt(std::max(0.0, sq / n_samples - mean * mean) / (n_samples - 1.0));
    };
    finish(gsum, gsq, rec.gauss_mean, rec.gauss_se);
    finish(ssum, ssq, rec.sign_mean, rec.sign_se);
    finish(dsum, dsq, rec.diff_mean, rec.diff_se);
    rec.pass = rec.diff_mean >= -3.0 * rec.diff_se;
    return rec;
}

HopfieldLpExperiment hopfield_lp_experiment(const std::vector<SystemShape>& shapes,
                                            const Noise& noise, double p, int n_samples,
                                            std::uint64_t seed) {
    if (shapes.empty()) throw std::invalid_argument("hopfield_lp_experiment: no shapes");
    if (!(p > 0.0)) throw std::invalid_argument("hopfield_lp_experiment: p must be > 0");
    if (n_samples < 2) throw std::invalid_argument("hopfield_lp_experiment: n_samples >= 2");
    if (!noise.bounded()) {
        const int match = noise.gaussian_match_order();
        if (p >= 0.5 * (match + 1))
            throw std::domain_error(
                "hopfield_lp_experiment: p >= (m+1)/2 for an unbounded law of match order " +
                std::to_string(match));
    }

    HopfieldLpExperiment exp;
    std::vector<double> envelope(shapes.size());
    std::vector<double> log_sizes, log_moments;

    for (std::size_t sh = 0; sh < shapes.size(); ++sh) {
        const SystemShape& shape = shapes[sh];
        check_hopfield(shape, "hopfield_lp_experiment");
        std::vector<double> a(n_samples);
        for (int s = 0; s < n_samples; ++s) {
            Matrix xi = sample_matrix(shape.n, shape.k, noise, seed + sh, std::uint64_t(s));
            a[s] = hopfield_pressure(shape, xi);
        }
        double mean = 0.0;
        for (double v : a) mean += v;
        mean /= n_samples;
        double msum = 0.0, msq = 0.0;
        for (double v : a) {
            double dev = std::pow(std::abs(v - mean), p);
            msum += dev;
            msq += dev * dev;
        }
        HopfieldLpRow row;
        row.n = shape.n;
        row.k = shape.k;
        row.beta = shape.beta;
        row.p = p;
        row.moment = msum / n_samples;
        row.se = std::sqrt(std::max(0.0, msq / n_samples - row.moment * row.moment) /
                           (n_samples - 1.0));
        envelope[sh] = std::pow(shape.beta * std::sqrt(shape.alpha()) / shape.n, p) *
                       noise.abs_moment(2.0 * p);
        if (envelope[sh] > 0.0) exp.c_fit = std::max(exp.c_fit, row.moment / envelope[sh]);

        row.c2_residual = std::nan("");
        if (noise.discrete() && shape.n * shape.k <= 9) {
            ExhaustiveMartingale ex = exhaustive_martingale(
                shape, noise, entry_rowmajor_schedule(shape.n, shape.k),
                [&shape](const Matrix& m) { return hopfield_log_z(shape, m); });
            row.c2_residual = ex.orthogonality_residual;
        }
        exp.rows.push_back(row);
        if (row.moment > 0.0) {
            log_sizes.push_back(std::log(double(shape.n)));
            log_moments.push_back(std::log(row.moment));
        }
    }
    for (std::size_t sh = 0; sh < shapes.size(); ++sh)
        exp.rows[sh].bound = exp.c_fit * envelope[sh];
    exp.exponent = (log_sizes.size() >= 2) ? fit_slope(log_sizes, log_moments) : std::nan("");
    return exp;
}

}  // namespace bsg
