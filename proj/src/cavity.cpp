#include "bsglab/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bsglab/interpolation.hpp"
#include "bsglab/quadrature.hpp"
#include "bsglab/rng.hpp"

namespace bsg {

namespace {

void check_dims(const SystemShape& shape, const GrowthSchedule& schedule, const char* who) {
    if (schedule.n != shape.n || schedule.k != shape.k)
        throw std::invalid_argument(std::string(who) + ": schedule built for " +
                                    std::to_string(schedule.n) + "x" + std::to_string(schedule.k) +
                                    ", shape is " + std::to_string(shape.n) + "x" +
                                    std::to_string(shape.k));
}

double logz_dispatch(const SystemShape& shape, const Matrix& xi,
                     const std::function<double(const Matrix&)>& override_fn) {
    return override_fn ? override_fn(xi) : log_z_traced(shape, xi);
}

}  // namespace

std::vector<std::pair<int, int>> GrowthSchedule::flat_entries() const {
    std::vector<std::pair<int, int>> flat;
    for (const auto& s : steps) flat.insert(flat.end(), s.entries.begin(), s.entries.end());
    return flat;
}

int GrowthSchedule::entries_before(int h) const {
    if (h < 0 || h > step_count())
        throw std::out_of_range("GrowthSchedule: step index out of range");
    int count = 0;
    for (int s = 0; s < h; ++s) count += int(steps[s].entries.size());
    return count;
}

void GrowthSchedule::validate() const {
    if (n < 1 || k < 1) throw std::invalid_argument("GrowthSchedule: sizes must be >= 1");
    std::vector<char> seen(std::size_t(n) * k, 0);
    int prev_n = 0, prev_k = 0, covered = 0;
    for (const auto& step : steps) {
        for (auto [i, j] : step.entries) {
            if (i < 0 || i >= n || j < 0 || j >= k)
                throw std::invalid_argument("GrowthSchedule: entry out of range");
            char& flag = seen[std::size_t(i) * k + j];
            if (flag) throw std::invalid_argument("GrowthSchedule: entry revealed twice");
            flag = 1;
            ++covered;
        }
        if (step.n_sub < prev_n || step.k_sub < prev_k || step.n_sub > n || step.k_sub > k)
            throw std::invalid_argument("GrowthSchedule: sub-system sizes must grow monotonically");
        prev_n = step.n_sub;
        prev_k = step.k_sub;
    }
    if (covered != n * k)
        throw std::invalid_argument("GrowthSchedule: schedule must cover every entry exactly once");
    if (prev_n != n || prev_k != k)
        throw std::invalid_argument("GrowthSchedule: final sub-system must be the full system");
}

GrowthSchedule entry_rowmajor_schedule(int n, int k) {
    if (n < 1 || k < 1) throw std::invalid_argument("entry_rowmajor_schedule: sizes >= 1");
    GrowthSchedule sched;
    sched.n = n;
    sched.k = k;
    int max_i = -1, max_j = -1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            GrowthStep step;
            step.entries = {{i, j}};
            max_i = std::max(max_i, i);
            max_j = std::max(max_j, j);
            step.n_sub = max_i + 1;
            step.k_sub = max_j + 1;
            sched.steps.push_back(std::move(step));
        }
    // the last step's rectangle is the full system by construction
    sched.steps.back().n_sub = n;
    sched.steps.back().k_sub = k;
    sched.validate();
    return sched;
}

GrowthSchedule balanced_spin_schedule(int n, int k) {
    if (n < 1 || k < 1) throw std::invalid_argument("balanced_spin_schedule: sizes >= 1");
    GrowthSchedule sched;
    sched.n = n;
    sched.k = k;
    const double alpha = double(n) / (n + k);
    int cur_n = 0, cur_k = 0;
    while (cur_n < n || cur_k < k) {
        bool add_sigma;
        if (cur_n == n) {
            add_sigma = false;
        } else if (cur_k == k) {
            add_sigma = true;
        } else {
            double with_sigma = std::abs(double(cur_n + 1) / (cur_n + 1 + cur_k) - alpha);
            double with_tau = std::abs(double(cur_n) / (cur_n + cur_k + 1) - alpha);
            add_sigma = with_sigma <= with_tau;  // sigma first on ties
        }
        GrowthStep step;
        if (add_sigma) {
            for (int j = 0; j < cur_k; ++j) step.entries.emplace_back(cur_n, j);
            ++cur_n;
        } else {
            for (int i = 0; i < cur_n; ++i) step.entries.emplace_back(i, cur_k);
            ++cur_k;
        }
        step.n_sub = cur_n;
        step.k_sub = cur_k;
        sched.steps.push_back(std::move(step));
    }
    sched.validate();
    return sched;
}

CavityTerms cavity_decomposition(const SystemShape& shape, const Matrix& xi,
                                 const GrowthSchedule& schedule, int h, const SpinConfig& cfg) {
    shape.validate();
    check_dims(shape, schedule, "cavity_decomposition");
    if (h < 0 || h > schedule.step_count())
        throw std::out_of_range("cavity_decomposition: step index out of range");
    if (int(cfg.sigma.size()) != shape.n || int(cfg.tau.size()) != shape.k)
        throw std::invalid_argument("cavity_decomposition: spin configuration size mismatch");

    CavityTerms terms;
    if (h > 0) {
        terms.n_sub = schedule.steps[h - 1].n_sub;
        terms.k_sub = schedule.steps[h - 1].k_sub;
    }
    const double scale = shape.beta * shape.coupling();
    for (int i = 0; i < shape.n; ++i)
        for (int j = 0; j < shape.k; ++j) {
            double w = scale * xi(i, j) * cfg.sigma[i] * cfg.tau[j];
            if (i < terms.n_sub && j < terms.k_sub)
                terms.core += w;
            else if (i >= terms.n_sub && j < terms.k_sub)
                terms.row_fields += w;
            else if (i < terms.n_sub && j >= terms.k_sub)
                terms.col_fields += w;
            else
                terms.residual += w;
        }
    return terms;
}

CondValue conditional_log_z(const SystemShape& shape, const Noise& noise, const Matrix& xi,
                            const GrowthSchedule& schedule, int h, const ConditionalConfig& cfg) {
    shape.validate();
    check_dims(shape, schedule, "conditional_log_z");
    if (xi.rows() != shape.n || xi.cols() != shape.k)
        throw std::invalid_argument("conditional_log_z: disorder dimensions mismatch");
    if (h < 0 || h > schedule.step_count())
        throw std::out_of_range("conditional_log_z: step index out of range");

    const auto flat = schedule.flat_entries();
    const int revealed = schedule.entries_before(h);
    const int unrevealed = int(flat.size()) - revealed;

    Matrix work = xi;
    CondValue out;

    if (unrevealed == 0) {
        out.value = log_z_traced(shape, work);
        return out;
    }

    if (noise.discrete() && unrevealed <= cfg.max_exhaustive) {
        const auto& values = noise.values();
        const auto& probs = noise.probs();
        const int radix = int(values.size());
        std::vector<int> digit(unrevealed, 0);
        double acc = 0.0;
        for (;;) {
            double weight = 1.0;
            for (int c = 0; c < unrevealed; ++c) {
                auto [i, j] = flat[revealed + c];
                work(i, j) = values[digit[c]];
                weight *= probs[digit[c]];
            }
            acc += weight * log_z_traced(shape, work);
            int c = 0;
            while (c < unrevealed && ++digit[c] == radix) digit[c++] = 0;
            if (c == unrevealed) break;
        }
        out.value = acc;
        return out;
    }

    if (noise.kind() == NoiseKind::gaussian && unrevealed <= cfg.gh_max_dims) {
        GaussHermite rule = gauss_hermite(cfg.gh_nodes);
        static const double inv_sqrt_pi = 1.0 / std::sqrt(4.0 * std::atan(1.0));
        static const double sqrt2 = std::sqrt(2.0);
        std::vector<int> digit(unrevealed, 0);
        double acc = 0.0;
        for (;;) {
            double weight = 1.0;
            for (int c = 0; c < unrevealed; ++c) {
                auto [i, j] = flat[revealed + c];
                work(i, j) = sqrt2 * rule.x[digit[c]];
                weight *= rule.w[digit[c]] * inv_sqrt_pi;
            }
            acc += weight * log_z_traced(shape, work);
            int c = 0;
            while (c < unrevealed && ++digit[c] == cfg.gh_nodes) digit[c++] = 0;
            if (c == unrevealed) break;
        }
        out.value = acc;
        return out;
    }

    // Monte Carlo fallback with a reported standard error.
    if (cfg.mc_samples < 2)
        throw std::invalid_argument("conditional_log_z: mc_samples >= 2 for the fallback");
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(h));
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < cfg.mc_samples; ++s) {
        for (int c = 0; c < unrevealed; ++c) {
            auto [i, j] = flat[revealed + c];
            work(i, j) = noise.sample(rng.uniform());
        }
        double v = log_z_traced(shape, work);
        sum += v;
        sumsq += v * v;
    }
    out.value = sum / cfg.mc_samples;
    out.se = std::sqrt(std::max(0.0, sumsq / cfg.mc_samples - out.value * out.value) /
                       (cfg.mc_samples - 1.0));
    out.exact = false;
    return out;
}

double MartingaleTrace::telescoping_residual() const {
    if (conditional.empty()) return 0.0;
    double sum = 0.0;
    for (double d : delta) sum += d;
    return std::abs(conditional.back() - conditional.front() - sum);
}

MartingaleTrace martingale_trace(const SystemShape& shape, const Noise& noise, const Matrix& xi,
                                 const GrowthSchedule& schedule, const ConditionalConfig& cfg) {
    MartingaleTrace trace;
    const int steps = schedule.step_count();
    trace.conditional.reserve(steps + 1);
    for (int h = 0; h <= steps; ++h) {
        CondValue cv = conditional_log_z(shape, noise, xi, schedule, h, cfg);
        trace.conditional.push_back(cv.value);
        trace.exact = trace.exact && cv.exact;
        trace.mc_se = std::max(trace.mc_se, cv.se);
    }
    trace.delta.reserve(steps);
    for (int h = 1; h <= steps; ++h)
        trace.delta.push_back(trace.conditional[h] - trace.conditional[h - 1]);
    return trace;
}

double increment_bound(const SystemShape& shape, const Noise& noise, IncrementVariant variant) {
    shape.validate();
    (void)noise;  // coefficients are law-free; the caller multiplies realized |xi| powers
    if (shape.ensemble != Ensemble::bipartite)
        throw std::invalid_argument(
            "increment_bound: bipartite normalization only; the hopfield module carries its own "
            "alpha beta^2 chain");
    switch (variant) {
        case IncrementVariant::linear: return shape.beta * shape.coupling();
        case IncrementVariant::squared: return 2.0 * shape.beta * shape.beta / shape.total();
    }
    throw std::invalid_argument("increment_bound: unknown variant");
}

ExhaustiveMartingale exhaustive_martingale(
    const SystemShape& shape, const Noise& noise, const GrowthSchedule& schedule,
    const std::function<double(const Matrix&)>& logz_override) {
    shape.validate();
    check_dims(shape, schedule, "exhaustive_martingale");
    if (!noise.discrete())
        throw std::invalid_argument("exhaustive_martingale: discrete laws only");

    const auto flat = schedule.flat_entries();
    const int cells = int(flat.size());
    const auto& values = noise.values();
    const auto& probs = noise.probs();
    const int radix = int(values.size());

    double leaves_d = std::pow(double(radix), cells);
    if (leaves_d > double(1 << 22))
        throw std::length_error("exhaustive_martingale: support^(N*K) exceeds 2^22 assignments");
    const std::size_t leaves = std::size_t(leaves_d + 0.5);

    // log Z at every assignment; digit 0 (first revealed entry) most significant.
    std::vector<std::vector<double>> level(cells + 1);
    level[cells].resize(leaves);
    {
        Matrix work(shape.n, shape.k);
        std::vector<int> digit(cells, 0);
        for (auto [i, j] : flat) work(i, j) = values[0];
        for (std::size_t L = 0;; ++L) {
            level[cells][L] = logz_dispatch(shape, work, logz_override);
            int c = cells - 1;  // least significant digit last -> row index order
            while (c >= 0 && digit[c] == radix - 1) {
                digit[c] = 0;
                auto [i, j] = flat[c];
                work(i, j) = values[0];
                --c;
            }
            if (c < 0) break;
            ++digit[c];
            auto [i, j] = flat[c];
            work(i, j) = values[digit[c]];
        }
    }

    // fold towards the root: level[P-1][idx] = sum_d probs[d] level[P][idx*R+d]
    for (int depth = cells; depth >= 1; --depth) {
        std::size_t size = level[depth].size() / radix;
        level[depth - 1].resize(size);
        for (std::size_t idx = 0; idx < size; ++idx) {
            double acc = 0.0;
            for (int d = 0; d < radix; ++d) acc += probs[d] * level[depth][idx * radix + d];
            level[depth - 1][idx] = acc;
        }
    }

    ExhaustiveMartingale out;
    out.mean_log_z = level[0][0];

    const int steps = schedule.step_count();
    std::vector<int> prefix(steps + 1);
    for (int h = 0; h <= steps; ++h) prefix[h] = schedule.entries_before(h);

    // martingale property: every conditioning of every increment averages to 0
    for (int h = 1; h <= steps; ++h) {
        const auto& parent = level[prefix[h - 1]];
        const auto& child = level[prefix[h]];
        const int span = prefix[h] - prefix[h - 1];
        std::size_t branch = 1;
        for (int s = 0; s < span; ++s) branch *= radix;
        for (std::size_t node = 0; node < parent.size(); ++node) {
            double acc = 0.0;
            for (std::size_t b = 0; b < branch; ++b) {
                double w = 1.0;
                std::size_t rest = b;
                for (int s = 0; s < span; ++s) {
                    w *= probs[rest % radix];
                    rest /= radix;
                }
                acc += w * child[node * branch + b];
            }
            out.max_martingale_residual =
                std::max(out.max_martingale_residual, std::abs(acc - parent[node]));
        }
    }

    // per-leaf walk: weights, increments, orthogonality, telescoping
    std::vector<std::size_t> stride(cells + 1, 1);
    for (int d = cells - 1; d >= 0; --d) stride[d] = stride[d + 1] * radix;

    out.delta_sq_mean.assign(steps, 0.0);
    double sum_sq_total = 0.0;
    std::vector<int> digit(cells, 0);
    for (std::size_t L = 0; L < leaves; ++L) {
        std::size_t rest = L;
        double w = 1.0;
        for (int c = cells - 1; c >= 0; --c) {
            digit[c] = int(rest % radix);
            rest /= radix;
            w *= probs[digit[c]];
        }
        double telescoped = 0.0;
        for (int h = 1; h <= steps; ++h) {
            double d = level[prefix[h]][L / stride[prefix[h]]] -
                       level[prefix[h - 1]][L / stride[prefix[h - 1]]];
            out.delta_sq_mean[h - 1] += w * d * d;
            out.sup_abs_delta = std::max(out.sup_abs_delta, std::abs(d));
            telescoped += d;
        }
        double centered = level[cells][L] - out.mean_log_z;
        out.max_telescoping_residual =
            std::max(out.max_telescoping_residual, std::abs(centered - telescoped));
        sum_sq_total += w * centered * centered;
    }
    double delta_sq_sum = 0.0;
    for (double v : out.delta_sq_mean) delta_sq_sum += v;
    out.orthogonality_residual = std::abs(sum_sq_total - delta_sq_sum);
    const double norm = shape.ensemble == Ensemble::hopfield ? double(shape.n)
                                                             : double(shape.total());
    out.var_pressure = sum_sq_total / (norm * norm);
    return out;
}

LpExperiment lp_fluctuation_experiment(const std::vector<SystemShape>& shapes, const Noise& noise,
                                       double p, int n_samples, std::uint64_t seed) {
    if (shapes.empty()) throw std::invalid_argument("lp_fluctuation_experiment: no shapes");
    if (!(p > 0.0)) throw std::invalid_argument("lp_fluctuation_experiment: p must be > 0");
    if (n_samples < 2) throw std::invalid_argument("lp_fluctuation_experiment: n_samples >= 2");

    const int match = noise.gaussian_match_order();
    const bool v2_ok = p < 0.5 * (match + 1);

    LpExperiment exp;
    exp.c_fit_thm2 = (p == 2.0) ? 1.0 : 0.0;
    exp.c_fit_thm2v2 = v2_ok ? 0.0 : std::nan("");

    std::vector<double> env2(shapes.size()), env2v2(shapes.size());
    std::vector<double> log_sizes, log_moments;

    for (std::size_t sh = 0; sh < shapes.size(); ++sh) {
        const SystemShape& shape = shapes[sh];
        shape.validate();
        std::vector<double> a(n_samples);
        for (int s = 0; s < n_samples; ++s) {
            Matrix xi = sample_matrix(shape.n, shape.k, noise, seed + sh, std::uint64_t(s));
            a[s] = pressure(shape, xi);
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
        LpRow row;
        row.n = shape.n;
        row.k = shape.k;
        row.beta = shape.beta;
        row.p = p;
        row.moment = msum / n_samples;
        row.se = std::sqrt(std::max(0.0, msq / n_samples - row.moment * row.moment) /
                           (n_samples - 1.0));

        const double S = shape.total();
        const double aa = shape.alpha() * (1.0 - shape.alpha());
        env2[sh] = std::pow(2.0 * shape.beta * shape.beta * aa / S, 0.5 * p) *
                   noise.abs_moment(p);
        env2v2[sh] = v2_ok
                         ? std::pow(2.0 * shape.beta * shape.beta * std::sqrt(aa) / S, p) *
                               noise.abs_moment(2.0 * p)
                         : std::nan("");
        if (p != 2.0 && env2[sh] > 0.0)
            exp.c_fit_thm2 = std::max(exp.c_fit_thm2, row.moment / env2[sh]);
        if (v2_ok && env2v2[sh] > 0.0)
            exp.c_fit_thm2v2 = std::max(exp.c_fit_thm2v2, row.moment / env2v2[sh]);

        // exhaustive p=2 orthogonality identity where feasible
        row.c2_residual = std::nan("");
        if (noise.discrete() && shape.n * shape.k <= 9) {
            ExhaustiveMartingale ex = exhaustive_martingale(
                shape, noise, entry_rowmajor_schedule(shape.n, shape.k));
            row.c2_residual = ex.orthogonality_residual;
        }
        exp.rows.push_back(row);
        if (row.moment > 0.0) {
            log_sizes.push_back(std::log(S));
            log_moments.push_back(std::log(row.moment));
        }
    }

    for (std::size_t sh = 0; sh < shapes.size(); ++sh) {
        exp.rows[sh].bound_thm2 = (p == 2.0 ? 1.0 : exp.c_fit_thm2) * env2[sh];
        exp.rows[sh].bound_thm2v2 =
            v2_ok ? exp.c_fit_thm2v2 * env2v2[sh] : std::nan("");
    }
    exp.exponent =
        (log_sizes.size() >= 2) ? fit_slope(log_sizes, log_moments) : std::nan("");
    return exp;
}

}  // namespace bsg
