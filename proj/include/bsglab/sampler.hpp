#pragma once
// Monte Carlo estimation beyond the enumeration caps: Metropolis single-flip
// sampling of the bipartite Gibbs state and thermodynamic integration of the
// pressure over beta, anchored exactly at A(0) = log 2.
#include <cstdint>
#include <vector>

#include "bsglab/matrix.hpp"
#include "bsglab/model.hpp"

namespace bsg {

enum class FlipOrder { sequential, random };

struct McConfig {
    int sweeps = 4000;    // measured sweeps after burn-in
    int burn_in = 1000;
    std::vector<double> beta_grid;  // increasing from 0 (A(0) = log 2 anchor)
    std::uint64_t seed = 1;
    FlipOrder flip_order = FlipOrder::random;

    void validate() const;  // burn_in >= 0, sweeps >= 64, grid anchored and increasing
};

// Gibbs energy mean omega(H) at one beta with a batch-means standard error
// (32 batches). Deterministic per (config, stream): the direct call uses
// stream 0 of mc.seed; the curve uses the grid index.
MeanSe metropolis_energy_mean(const SystemShape& shape, const Matrix& xi, double beta,
                              const McConfig& mc, std::uint64_t stream = 0);

struct EnergyCurve {
    std::vector<double> beta;
    std::vector<double> energy;  // omega(H) estimates
    std::vector<double> se;
};

// omega(H) along the whole grid. The beta = 0 node is analytic: the uniform
// measure gives omega(H) = 0 exactly (H is odd under a global tau flip).
EnergyCurve energy_curve(const SystemShape& shape, const Matrix& xi, const McConfig& mc);

// A(beta_max) = log 2 + (1/(N+K)) integral_0^beta_max omega(-H) dbeta',
// trapezoid over the grid, independent-point error propagation.
MeanSe pressure_thermodynamic_integration(const SystemShape& shape, const Matrix& xi,
                                          const McConfig& mc);

// Detailed-balance diagnostic: max_y |sum_x pi_x P(x->y) - pi_y| for the
// random-scan single-flip kernel against the exact Gibbs weights.
// Requires N+K <= 8 (full 2^(N+K) transition matrix).
double stationarity_residual(const SystemShape& shape, const Matrix& xi, double beta);

}  // namespace bsg
