#pragma once
// Cavity growth schedules, the four-term energy decomposition, Doob
// martingale traces of log Z along the disorder filtration, and the L_p
// fluctuation experiment.
//
// A schedule is an ordered covering of the N*K disorder entries. Conditioning
// on the first h steps means the entries revealed by those steps are held at
// their drawn values while the remainder is averaged over the law.
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bsglab/distributions.hpp"
#include "bsglab/model.hpp"

namespace bsg {

struct GrowthStep {
    std::vector<std::pair<int, int>> entries;  // (i,j) coordinates revealed at this step
    int n_sub = 0, k_sub = 0;                  // implied sub-system sizes after the step
};

struct GrowthSchedule {
    int n = 0, k = 0;
    std::vector<GrowthStep> steps;

    int step_count() const { return int(steps.size()); }
    std::vector<std::pair<int, int>> flat_entries() const;
    int entries_before(int h) const;  // revealed-entry count after h steps
    void validate() const;            // covers each entry once, sizes monotone to (N,K)
};

// One entry per step, row-major: (0,0), (0,1), ..., (N-1,K-1). N*K steps.
GrowthSchedule entry_rowmajor_schedule(int n, int k);

// One spin per step (N+K steps), alternating parties to keep the running
// ratio N_h/(N_h+K_h) close to N/(N+K); each step reveals the couplings of
// the new spin to the opposite party already present.
GrowthSchedule balanced_spin_schedule(int n, int k);

// Four-term decomposition of -beta H at the rectangle (N_h, K_h) implied by
// step h, evaluated on a configuration: core sub-system, row fields of the
// sigma spins outside, column fields of the tau spins outside, and the
// residual block. The terms sum to -beta H exactly (algebraic identity).
struct CavityTerms {
    double core = 0.0, row_fields = 0.0, col_fields = 0.0, residual = 0.0;
    int n_sub = 0, k_sub = 0;
    double total() const { return core + row_fields + col_fields + residual; }
};

CavityTerms cavity_decomposition(const SystemShape& shape, const Matrix& xi,
                                 const GrowthSchedule& schedule, int h, const SpinConfig& cfg);

struct CondValue {
    double value = 0.0;
    double se = 0.0;   // 0 for exact evaluation
    bool exact = true;
};

struct ConditionalConfig {
    int max_exhaustive = 12;   // unrevealed discrete entries enumerated exactly
    int gh_nodes = 10;         // Gauss-Hermite nodes per Gaussian entry
    int gh_max_dims = 6;       // tensor-quadrature dimension cap
    int mc_samples = 4000;     // Monte Carlo fallback
    std::uint64_t seed = 1;
};

// E[log Z | F_h]: first h steps' entries pinned from xi, the rest averaged.
// Exhaustive for discrete laws (<= max_exhaustive unrevealed), tensor
// Gauss-Hermite for Gaussian (<= gh_max_dims), Monte Carlo with a stderr
// otherwise.
CondValue conditional_log_z(const SystemShape& shape, const Noise& noise, const Matrix& xi,
                            const GrowthSchedule& schedule, int h,
                            const ConditionalConfig& cfg = {});

struct MartingaleTrace {
    std::vector<double> conditional;  // E[log Z|F_h], h = 0..H
    std::vector<double> delta;        // increments, H entries
    bool exact = true;
    double mc_se = 0.0;               // largest stderr among inexact conditionals

    // | (log Z - E log Z) - sum_h delta_h |
    double telescoping_residual() const;
};

MartingaleTrace martingale_trace(const SystemShape& shape, const Noise& noise, const Matrix& xi,
                                 const GrowthSchedule& schedule,
                                 const ConditionalConfig& cfg = {});

enum class IncrementVariant { linear, squared };

// Per-step increment bound coefficient: |Delta_h| <= coeff * |xi_h| (linear,
// coeff = beta sqrt(2/(N+K))) or the squared-variant coefficient
// 2 beta^2/(N+K) multiplying xi_h^2. Bipartite shapes only.
double increment_bound(const SystemShape& shape, const Noise& noise, IncrementVariant variant);

// Exhaustive martingale diagnostics over the full discrete disorder space
// (support^(N*K) assignments in schedule order, probability-weighted).
struct ExhaustiveMartingale {
    double mean_log_z = 0.0;       // E log Z
    double var_pressure = 0.0;     // exact Var(A) over the disorder ensemble
    double orthogonality_residual = 0.0;  // |E[(sum Delta)^2] - sum E[Delta_h^2]|
    double max_martingale_residual = 0.0; // max over steps/conditionings |E[Delta_h|F_{h-1}]|
    double max_telescoping_residual = 0.0;
    double sup_abs_delta = 0.0;
    std::vector<double> delta_sq_mean;  // E[Delta_h^2] per step
};

// logz_override lets other normalizations (e.g. the Hopfield pressure) reuse
// the machinery; default evaluates the bipartite traced log Z.
ExhaustiveMartingale exhaustive_martingale(
    const SystemShape& shape, const Noise& noise, const GrowthSchedule& schedule,
    const std::function<double(const Matrix&)>& logz_override = nullptr);

struct LpRow {
    int n = 0, k = 0;
    double beta = 0.0, p = 0.0;
    double moment = 0.0;       // empirical E|A - mean A|^p
    double se = 0.0;
    double bound_thm2 = 0.0;   // fitted constant for p != 2; C_2 = 1 at p = 2
    double bound_thm2v2 = 0.0; // NaN when p >= (m+1)/2 (hypothesis empty)
    double c2_residual = 0.0;  // exhaustive orthogonality residual; NaN if infeasible
};

struct LpExperiment {
    std::vector<LpRow> rows;
    double exponent = 0.0;     // fitted log(moment) vs log(N+K) slope
    double c_fit_thm2 = 0.0;   // fitted constants (max moment/envelope ratio)
    double c_fit_thm2v2 = 0.0; // NaN when the v2 hypothesis fails at this p
};

LpExperiment lp_fluctuation_experiment(const std::vector<SystemShape>& shapes,
                                       const Noise& noise, double p, int n_samples,
                                       std::uint64_t seed);

}  // namespace bsg
