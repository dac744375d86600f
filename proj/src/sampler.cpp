#include "bsglab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bsglab/rng.hpp"

namespace bsg {

namespace {

constexpr int kBatches = 32;
constexpr int kStationarityCap = 8;

void check_bipartite(const SystemShape& shape, const char* who) {
    shape.validate();
    if (shape.ensemble != Ensemble::bipartite)
        throw std::invalid_argument(std::string(who) +
                                    ": the sampler operates on bipartite shapes; the hopfield "
                                    "pressure is evaluated analytically");
}

// Single-flip Metropolis chain over the joint (sigma, tau) configuration.
// Fields h_sigma[i] = sum_j xi_ij tau_j and h_tau[j] = sum_i xi_ij sigma_i
// are maintained incrementally; a flip of spin s costs O(opposite party).
class Chain {
public:
    Chain(const SystemShape& shape, const Matrix& xi, double beta, Rng rng)
        : shape_(shape), xi_(xi), beta_(beta), rng_(rng),
          spin_(shape.n + shape.k), h_sigma_(shape.n), h_tau_(shape.k) {
        for (int s = 0; s < shape_.n + shape_.k; ++s)
            spin_[s] = rng_.uniform() < 0.5 ? 1 : -1;
        rebuild_fields();
    }

    void sweep(FlipOrder order) {
        const int total = shape_.n + shape_.k;
        for (int step = 0; step < total; ++step) {
            int s = order == FlipOrder::sequential ? step : int(rng_.below(std::uint64_t(total)));
            propose(s);
        }
    }

    // H = -c sum_ij xi_ij sigma_i tau_j from the maintained fields.
    double energy() const {
        double overlap = 0.0;
        for (int i = 0; i < shape_.n; ++i) overlap += spin_[i] * h_sigma_[i];
        return -shape_.coupling() * overlap;
    }

private:
    void propose(int s) {
        const double c = shape_.coupling();
        double field = s < shape_.n ? h_sigma_[s] : h_tau_[s - shape_.n];
        double delta_h = 2.0 * c * spin_[s] * field;  // H(flip) - H(current)
        if (delta_h <= 0.0 || rng_.uniform() < std::exp(-beta_ * delta_h)) {
            int old = spin_[s];
            spin_[s] = -old;
            if (s < shape_.n) {
                for (int j = 0; j < shape_.k; ++j) h_tau_[j] -= 2.0 * old * xi_(s, j);
            } else {
                int j = s - shape_.n;
                for (int i = 0; i < shape_.n; ++i) h_sigma_[i] -= 2.0 * old * xi_(i, j);
            }
        }
    }

    void rebuild_fields() {
        for (int i = 0; i < shape_.n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < shape_.k; ++j) acc += xi_(i, j) * spin_[shape_.n + j];
            h_sigma_[i] = acc;
        }
        for (int j = 0; j < shape_.k; ++j) {
            double acc = 0.0;
            for (int i = 0; i < shape_.n; ++i) acc += xi_(i, j) * spin_[i];
            h_tau_[j] = acc;
        }
    }

    SystemShape shape_;
    const Matrix& xi_;
    double beta_;
    Rng rng_;
    std::vector<int> spin_;
    std::vector<double> h_sigma_, h_tau_;
};

MeanSe batch_means(const std::vector<double>& series) {
    const int batches = kBatches;
    const int size = int(series.size()) / batches;
    double grand = 0.0;
    std::vector<double> batch(batches, 0.0);
    for (int b = 0; b < batches; ++b) {
        for (int t = 0; t < size; ++t) batch[b] += series[std::size_t(b) * size + t];
        batch[b] /= size;
        grand += batch[b];
    }
    grand /= batches;
    double var = 0.0;
    for (double v : batch) var += (v - grand) * (v - grand);
    var /= (batches - 1);
    return {grand, std::sqrt(var / batches)};
}

}  // namespace

void McConfig::validate() const {
    if (burn_in < 0) throw std::invalid_argument("McConfig: burn_in must be >= 0");
    if (sweeps < 2 * kBatches)
        throw std::invalid_argument("McConfig: sweeps must be >= " + std::to_string(2 * kBatches) +
                                    " (batch-means stderr needs filled batches)");
    if (beta_grid.empty() || beta_grid.front() != 0.0)
        throw std::invalid_argument("McConfig: beta_grid must start at 0 (the exact anchor)");
    for (std::size_t t = 1; t < beta_grid.size(); ++t)
        if (!(beta_grid[t] > beta_grid[t - 1]))
            throw std::invalid_argument("McConfig: beta_grid must be strictly increasing");
}

MeanSe metropolis_energy_mean(const SystemShape& shape, const Matrix& xi, double beta,
                              const McConfig& mc, std::uint64_t stream) {
    check_bipartite(shape, "metropolis_energy_mean");
    if (xi.rows() != shape.n || xi.cols() != shape.k)
        throw std::invalid_argument("metropolis_energy_mean: disorder dimensions mismatch");
    mc.validate();
    if (!(beta >= 0.0)) throw std::domain_error("metropolis_energy_mean: beta must be >= 0");

    Chain chain(shape, xi, beta, Rng::stream(mc.seed, stream));
    for (int t = 0; t < mc.burn_in; ++t) chain.sweep(mc.flip_order);
    std::vector<double> series;
    series.reserve(mc.sweeps);
    for (int t = 0; t < mc.sweeps; ++t) {
        chain.sweep(mc.flip_order);
        series.push_back(chain.energy());
    }
    return batch_means(series);
}

EnergyCurve energy_curve(const SystemShape& shape, const Matrix& xi, const McConfig& mc) {
    check_bipartite(shape, "energy_curve");
    mc.validate();
    EnergyCurve curve;
    curve.beta = mc.beta_grid;
    curve.energy.resize(mc.beta_grid.size());
    curve.se.resize(mc.beta_grid.size());
    for (std::size_t t = 0; t < mc.beta_grid.size(); ++t) {
        if (mc.beta_grid[t] == 0.0) continue;  // analytic node: omega(H) = 0
        MeanSe e = metropolis_energy_mean(shape, xi, mc.beta_grid[t], mc, std::uint64_t(t));
        curve.energy[t] = e.mean;
        curve.se[t] = e.se;
    }
    return curve;
}

MeanSe pressure_thermodynamic_integration(const SystemShape& shape, const Matrix& xi,
                                          const McConfig& mc) {
    EnergyCurve curve = energy_curve(shape, xi, mc);
    const double log2 = 0.6931471805599453094;
    double integral = 0.0;
    for (std::size_t t = 1; t < curve.beta.size(); ++t)
        integral += 0.5 * (curve.beta[t] - curve.beta[t - 1]) *
                    (-curve.energy[t - 1] - curve.energy[t]);
    // node t carries trapezoid weight (half of each adjacent panel); the
    // per-node estimates are independent chains, so variances add
    double var = 0.0;
    for (std::size_t t = 0; t < curve.beta.size(); ++t) {
        double w = 0.0;
        if (t > 0) w += 0.5 * (curve.beta[t] - curve.beta[t - 1]);
        if (t + 1 < curve.beta.size()) w += 0.5 * (curve.beta[t + 1] - curve.beta[t]);
        var += w * w * curve.se[t] * curve.se[t];
    }
    const double total = shape.total();
    return {log2 + integral / total, std::sqrt(var) / total};
}

double stationarity_residual(const SystemShape& shape, const Matrix& xi, double beta) {
    check_bipartite(shape, "stationarity_residual");
    if (xi.rows() != shape.n || xi.cols() != shape.k)
        throw std::invalid_argument("stationarity_residual: disorder dimensions mismatch");
    const int total = shape.total();
    if (total > kStationarityCap)
        throw std::length_error("stationarity_residual: N+K = " + std::to_string(total) +
                                " exceeds cap " + std::to_string(kStationarityCap));

    const std::size_t states = std::size_t(1) << total;
    const double c = shape.coupling();

    auto state_energy = [&](std::size_t x) {
        double overlap = 0.0;
        for (int i = 0; i < shape.n; ++i) {
            int si = (x >> i) & 1 ? -1 : 1;
            for (int j = 0; j < shape.k; ++j) {
                int tj = (x >> (shape.n + j)) & 1 ? -1 : 1;
                overlap += xi(i, j) * si * tj;
            }
        }
        return -c * overlap;
    };

    std::vector<double> energy(states), pi(states);
    double z_max = -1e308;
    for (std::size_t x = 0; x < states; ++x) {
        energy[x] = state_energy(x);
        z_max = std::max(z_max, -beta * energy[x]);
    }
    double z = 0.0;
    for (std::size_t x = 0; x < states; ++x) z += std::exp(-beta * energy[x] - z_max);
    for (std::size_t x = 0; x < states; ++x) pi[x] = std::exp(-beta * energy[x] - z_max) / z;

    // random-scan kernel: propose a uniform spin flip, accept with the
    // Metropolis rule; flow[y] accumulates sum_x pi_x P(x -> y)
    std::vector<double> flow(states, 0.0);
    for (std::size_t x = 0; x < states; ++x) {
        double stay = 0.0;
        for (int s = 0; s < total; ++s) {
            std::size_t y = x ^ (std::size_t(1) << s);
            double accept = std::min(1.0, std::exp(-beta * (energy[y] - energy[x])));
            flow[y] += pi[x] * accept / total;
            stay += (1.0 - accept) / total;
        }
        flow[x] += pi[x] * stay;
    }
    double residual = 0.0;
    for (std::size_t y = 0; y < states; ++y)
        residual = std::max(residual, std::abs(flow[y] - pi[y]));
    return residual;
}

}  // namespace bsg
