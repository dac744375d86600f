#pragma once
// Bipartite system core: shapes, Hamiltonian, exact/traced partition
// functions, per-draw and quenched pressures, and the exact Boltzmann state.
//
// Conventions: sigma_i, tau_j in {-1,+1}; the bipartite Hamiltonian is
//   H = -sqrt(2/(N+K)) sum_{ij} xi_ij sigma_i tau_j,
// the per-draw pressure A = log Z / (N+K). Hopfield-normalized systems
// (coupling 1/sqrt(N), K Gaussian pattern variables integrated out) are
// handled by the hopfield module; model-core operations reject them.
//
// Error idiom: std::invalid_argument for shape/argument mismatches,
// std::length_error for enumeration caps (pointing to the traced/sampled
// alternative), std::domain_error for parameter-domain violations.
#include <cstdint>
#include <functional>
#include <vector>

#include "bsglab/distributions.hpp"
#include "bsglab/matrix.hpp"

namespace bsg {

enum class Ensemble { bipartite, hopfield };

struct SystemShape {
    int n = 1;          // sigma-party size N
    int k = 1;          // tau-party size K (pattern count for hopfield)
    double beta = 1.0;  // inverse temperature, >= 0
    Ensemble ensemble = Ensemble::bipartite;

    int total() const { return n + k; }
    // N/(N+K) for bipartite systems, K/N under the Hopfield normalization.
    double alpha() const;
    // Coupling scale: sqrt(2/(N+K)) bipartite, 1/sqrt(N) hopfield.
    double coupling() const;
    void validate() const;
};

struct SpinConfig {
    std::vector<int> sigma, tau;  // entries +-1
};

// Enumeration caps; exceeding them raises std::length_error.
inline constexpr int kExactCap = 24;   // joint 2^(N+K) enumeration
inline constexpr int kTracedCap = 30;  // 2^N partial trace

double hamiltonian_energy(const SystemShape& shape, const Matrix& xi, const SpinConfig& cfg);

// log Z by full 2^(N+K) enumeration (streaming log-sum-exp, Gray-code walk).
double log_z_exact(const SystemShape& shape, const Matrix& xi);

// log Z = LSE_sigma sum_j log(2 cosh(beta c m_j)), m_j = sum_i xi_ij sigma_i:
// the tau party traced analytically. Cost 2^N * K.
double log_z_traced(const SystemShape& shape, const Matrix& xi);

// Per-draw pressure log Z/(N+K); uses the traced kernel when N <= kExactCap.
double pressure(const SystemShape& shape, const Matrix& xi);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
};

// Quenched pressure over n_samples disorder draws (counter-based streams).
MeanSe quenched_pressure(const SystemShape& shape, const Noise& noise, int n_samples,
                         std::uint64_t seed);

// Tensor Gauss-Hermite oracle for the Gaussian quenched pressure; exact up to
// quadrature error, cost nodes^(N*K). Requires N*K <= 6.
double quenched_pressure_gauss_hermite(const SystemShape& shape, int nodes = 16);

// Exact Boltzmann (Gibbs) state at fixed disorder; expectation evaluation by
// re-enumeration, so construction is cheap and the state stores no weights.
class GibbsState {
public:
    GibbsState(const SystemShape& shape, const Matrix& xi);

    const SystemShape& shape() const { return shape_; }
    const Matrix& disorder() const { return xi_; }
    double log_z() const { return log_z_; }

    // omega(F) for an observable on (sigma, tau); sigma/tau passed as +-1
    // arrays of length N and K.
    double expect(const std::function<double(const int*, const int*)>& observable) const;

    // omega((sigma_i tau_j)^k) without functor overhead.
    double spin_pair_moment(int i, int j, int k = 1) const;

private:
    SystemShape shape_;
    Matrix xi_;
    double log_z_;
};

double boltzmann_expect(const GibbsState& state,
                        const std::function<double(const int*, const int*)>& observable);

}  // namespace bsg
