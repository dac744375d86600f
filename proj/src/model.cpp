#include "bsglab/model.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bsglab/rng.hpp"
#include "bsglab/quadrature.hpp"

namespace bsg {

namespace {

// log(2 cosh x) = log(e^x + e^-x), overflow-safe.
inline double log_2cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a));
}

// Streaming log-sum-exp accumulator.
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

void check_bipartite(const SystemShape& shape, const char* who) {
    shape.validate();
    if (shape.ensemble != Ensemble::bipartite)
        throw std::invalid_argument(std::string(who) +
                                    ": hopfield-normalized shapes are handled by the "
                                    "hopfield module");
}

void check_dims(const SystemShape& shape, const Matrix& xi, const char* who) {
    if (xi.rows() != shape.n || xi.cols() != shape.k)
        throw std::invalid_argument(std::string(who) + ": disorder is " +
                                    std::to_string(xi.rows()) + "x" + std::to_string(xi.cols()) +
                                    " but the shape wants " + std::to_string(shape.n) + "x" +
                                    std::to_string(shape.k));
}

}  // namespace

double SystemShape::alpha() const {
    return ensemble == Ensemble::bipartite ? double(n) / total() : double(k) / n;
}

double SystemShape::coupling() const {
    return ensemble == Ensemble::bipartite ? std::sqrt(2.0 / total()) : 1.0 / std::sqrt(double(n));
}

void SystemShape::validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("SystemShape: party sizes must be >= 1");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("SystemShape: beta must be finite and >= 0");
}

double hamiltonian_energy(const SystemShape& shape, const Matrix& xi, const SpinConfig& cfg) {
    check_bipartite(shape, "hamiltonian_energy");
    check_dims(shape, xi, "hamiltonian_energy");
    if (int(cfg.sigma.size()) != shape.n || int(cfg.tau.size()) != shape.k)
        throw std::invalid_argument("hamiltonian_energy: spin configuration size mismatch");
    for (int s : cfg.sigma)
        if (s != 1 && s != -1) throw std::invalid_argument("hamiltonian_energy: sigma not +-1");
    for (int s : cfg.tau)
        if (s != 1 && s != -1) throw std::invalid_argument("hamiltonian_energy: tau not +-1");
    double overlap = 0.0;
    for (int i = 0; i < shape.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < shape.k; ++j) row += xi(i, j) * cfg.tau[j];
        overlap += cfg.sigma[i] * row;
    }
    return -shape.coupling() * overlap;
}

double log_z_exact(const SystemShape& shape, const Matrix& xi) {
    check_bipartite(shape, "log_z_exact");
    check_dims(shape, xi, "log_z_exact");
    const int n = shape.n, k = shape.k, total = n + k;
    if (total > kExactCap)
        throw std::length_error("log_z_exact: N+K = " + std::to_string(total) + " exceeds cap " +
                                std::to_string(kExactCap) + "; use log_z_traced or the sampler");

    // Gray-code walk over joint configurations, maintaining the overlap
    // E = sum_ij xi_ij sigma_i tau_j. Bits 0..N-1 are sigma, N..N+K-1 tau.
    std::vector<int> spin(total, 1);
    double overlap = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) overlap += xi(i, j);

    const double scale = shape.beta * shape.coupling();
    LogSumExp lse;
    lse.add(scale * overlap);
    const std::uint64_t count = 1ull << total;
    for (std::uint64_t step = 1; step < count; ++step) {
        int bit = std::countr_zero(step);
        // field seen by the flipped spin under the current opposite party
        double field = 0.0;
        if (bit < n) {
            for (int j = 0; j < k; ++j) field += xi(bit, j) * spin[n + j];
        } else {
            int j = bit - n;
            for (int i = 0; i < n; ++i) field += xi(i, j) * spin[i];
        }
        overlap -= 2.0 * spin[bit] * field;
        spin[bit] = -spin[bit];
        lse.add(scale * overlap);
    }
    return lse.value();
}

double log_z_traced(const SystemShape& shape, const Matrix& xi) {
    check_bipartite(shape, "log_z_traced");
    check_dims(shape, xi, "log_z_traced");
    const int n = shape.n, k = shape.k;
    if (n > kTracedCap)
        throw std::length_error("log_z_traced: N = " + std::to_string(n) + " exceeds cap " +
                                std::to_string(kTracedCap) + "; use the Monte Carlo sampler");

    const double scale = shape.beta * shape.coupling();

    if (xi.is_sign_matrix()) {
        // Integer fields: m_j takes values in {-N..N}, so log(2cosh(scale*m))
        // reduces to a (2N+1)-entry lookup.
        std::vector<double> lut(2 * n + 1);
        for (int m = -n; m <= n; ++m) lut[m + n] = log_2cosh(scale * m);
        std::vector<int> m(k, 0);
        std::vector<int> sigma(n, 1);
        double term = 0.0;
        for (int j = 0; j < k; ++j) {
            int mj = 0;
            for (int i = 0; i < n; ++i) mj += int(xi(i, j));
            m[j] = mj;
            term += lut[mj + n];
        }
        LogSumExp lse;
        lse.add(term);
        const std::uint64_t count = 1ull << n;
        for (std::uint64_t step = 1; step < count; ++step) {
            int bit = std::countr_zero(step);
            int delta = -2 * sigma[bit];
            sigma[bit] = -sigma[bit];
            for (int j = 0; j < k; ++j) {
                term -= lut[m[j] + n];
                m[j] += delta * int(xi(bit, j));
                term += lut[m[j] + n];
            }
            lse.add(term);
        }
        return lse.value();
    }

    std::vector<double> m(k, 0.0);
    std::vector<int> sigma(n, 1);
    double term = 0.0;
    for (int j = 0; j < k; ++j) {
        double mj = 0.0;
        for (int i = 0; i < n; ++i) mj += xi(i, j);
        m[j] = mj;
        term += log_2cosh(scale * mj);
    }
    LogSumExp lse;
    lse.add(term);
    const std::uint64_t count = 1ull << n;
    for (std::uint64_t step = 1; step < count; ++step) {
        int bit = std::countr_zero(step);
        double delta = -2.0 * sigma[bit];
        sigma[bit] = -sigma[bit];
        for (int j = 0; j < k; ++j) {
            term -= log_2cosh(scale * m[j]);
            m[j] += delta * xi(bit, j);
            term += log_2cosh(scale * m[j]);
        }
        lse.add(term);
    }
    return lse.value();
}

double pressure(const SystemShape& shape, const Matrix& xi) {
    check_bipartite(shape, "pressure");
    check_dims(shape, xi, "pressure");
    if (shape.n <= kExactCap) return log_z_traced(shape, xi) / shape.total();
    return log_z_exact(shape, xi) / shape.total();
}

MeanSe quenched_pressure(const SystemShape& shape, const Noise& noise, int n_samples,
                         std::uint64_t seed) {
    check_bipartite(shape, "quenched_pressure");
    if (n_samples < 2)
        throw std::invalid_argument("quenched_pressure: need n_samples >= 2 for a stderr");
    std::vector<double> values(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        Matrix xi = sample_matrix(shape.n, shape.k, noise, seed, std::uint64_t(s));
        values[s] = pressure(shape, xi);
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n_samples;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    MeanSe out;
    out.mean = mean;
    out.se = std::sqrt(ss / (double(n_samples) * (n_samples - 1)));
    return out;
}

double quenched_pressure_gauss_hermite(const SystemShape& shape, int nodes) {
    check_bipartite(shape, "quenched_pressure_gauss_hermite");
    const int cells = shape.n * shape.k;
    if (cells > 6)
        throw std::length_error(
            "quenched_pressure_gauss_hermite: N*K > 6; use quenched_pressure sampling");
    if (nodes < 2 || nodes > 64)
        throw std::invalid_argument("quenched_pressure_gauss_hermite: nodes in [2,64]");

    GaussHermite rule = gauss_hermite(nodes);
    static const double inv_sqrt_pi = 1.0 / std::sqrt(4.0 * std::atan(1.0));
    static const double sqrt2 = std::sqrt(2.0);

    Matrix xi(shape.n, shape.k);
    std::vector<int> idx(cells, 0);
    double acc = 0.0;
    for (;;) {
        double weight = 1.0;
        for (int c = 0; c < cells; ++c) {
            xi(c / shape.k, c % shape.k) = sqrt2 * rule.x[idx[c]];
            weight *= rule.w[idx[c]] * inv_sqrt_pi;
        }
        acc += weight * pressure(shape, xi);
        int c = 0;
        while (c < cells && ++idx[c] == nodes) idx[c++] = 0;
        if (c == cells) break;
    }
    return acc;
}

GibbsState::GibbsState(const SystemShape& shape, const Matrix& xi) : shape_(shape), xi_(xi) {
    check_bipartite(shape, "GibbsState");
    check_dims(shape, xi, "GibbsState");
    if (shape.total() > kExactCap)
        throw std::length_error("GibbsState: N+K exceeds the exact enumeration cap");
    log_z_ = log_z_exact(shape, xi);
}

double GibbsState::expect(const std::function<double(const int*, const int*)>& observable) const {
    const int n = shape_.n, k = shape_.k, total = n + k;
    std::vector<int> spin(total, 1);
    double overlap = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) overlap += xi_(i, j);

    const double scale = shape_.beta * shape_.coupling();
    double num = observable(spin.data(), spin.data() + n) * std::exp(scale * overlap - log_z_);
    double den = std::exp(scale * overlap - log_z_);
    const std::uint64_t count = 1ull << total;
    for (std::uint64_t step = 1; step < count; ++step) {
        int bit = std::countr_zero(step);
        double field = 0.0;
        if (bit < n) {
            for (int j = 0; j < k; ++j) field += xi_(bit, j) * spin[n + j];
        } else {
            int j = bit - n;
            for (int i = 0; i < n; ++i) field += xi_(i, j) * spin[i];
        }
        overlap -= 2.0 * spin[bit] * field;
        spin[bit] = -spin[bit];
        double w = std::exp(scale * overlap - log_z_);
        num += observable(spin.data(), spin.data() + n) * w;
        den += w;
    }
    return num / den;
}

double GibbsState::spin_pair_moment(int i, int j, int k) const {
    if (i < 0 || i >= shape_.n || j < 0 || j >= shape_.k)
        throw std::invalid_argument("GibbsState::spin_pair_moment: index out of range");
    if (k < 0) throw std::invalid_argument("GibbsState::spin_pair_moment: power must be >= 0");
    if (k == 0) return 1.0;
    if (k % 2 == 0)
        return expect([](const int*, const int*) { return 1.0; });
    return expect([i, j](const int* sigma, const int* tau) {
        return double(sigma[i] * tau[j]);
    });
}

double boltzmann_expect(const GibbsState& state,
                        const std::function<double(const int*, const int*)>& observable) {
    return state.expect(observable);
}

}  // namespace bsg
