#include "bsglab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bsglab/quadrature.hpp"
#include "bsglab/rng.hpp"

namespace bsg {

namespace {

const double kSqrt3 = std::sqrt(3.0);

double gaussian_raw_moment(int k) {
    if (k % 2 == 1) return 0.0;
    double m = 1.0;  // (k-1)!!
    for (int j = k - 1; j > 1; j -= 2) m *= j;
    return m;
}

}  // namespace

Noise::Noise(NoiseKind kind, std::vector<double> values, std::vector<double> probs)
    : kind_(kind), values_(std::move(values)), probs_(std::move(probs)) {
    if (!values_.empty()) {
        // sort support ascending, keep probs aligned
        std::vector<std::size_t> idx(values_.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
        std::vector<double> v(values_.size()), p(values_.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            v[i] = values_[idx[i]];
            p[i] = probs_[idx[i]];
        }
        values_ = std::move(v);
        probs_ = std::move(p);
        cdf_.resize(probs_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            acc += probs_[i];
            cdf_[i] = acc;
        }
        cdf_.back() = 1.0;
    }
    validate();
}

void Noise::validate() const {
    if (discrete()) {
        if (values_.empty() || values_.size() != probs_.size())
            throw std::invalid_argument("Noise: discrete law needs matching values/probs");
        double mass = 0.0, mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(probs_[i] >= 0.0))
                throw std::invalid_argument("Noise: probabilities must be nonnegative");
            if (!std::isfinite(values_[i]))
                throw std::invalid_argument("Noise: support values must be finite");
            mass += probs_[i];
            mean += probs_[i] * values_[i];
        }
        if (std::abs(mass - 1.0) > 1e-12)
            throw std::invalid_argument("Noise: probabilities must sum to 1 (1e-12)");
        for (std::size_t i = 0; i < values_.size(); ++i)
            var += probs_[i] * (values_[i] - mean) * (values_[i] - mean);
        if (std::abs(mean) > 1e-12)
            throw std::invalid_argument("Noise: law must be centered (|mean| <= 1e-12)");
        if (std::abs(var - 1.0) > 1e-12)
            throw std::invalid_argument("Noise: law must have unit variance (1e-12)");
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i] == values_[i - 1])
                throw std::invalid_argument("Noise: duplicate support value");
    }
}

Noise Noise::gaussian() { return Noise(NoiseKind::gaussian, {}, {}); }
Noise Noise::rademacher() {
    return Noise(NoiseKind::rademacher, {-1.0, 1.0}, {0.5, 0.5});
}
Noise Noise::uniform() { return Noise(NoiseKind::uniform, {}, {}); }
Noise Noise::three_point() {
    return Noise(NoiseKind::three_point, {-kSqrt3, 0.0, kSqrt3},
                 {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0});
}
Noise Noise::discrete_table(std::vector<double> values, std::vector<double> probs) {
    return Noise(NoiseKind::table, std::move(values), std::move(probs));
}

Noise Noise::parse(const std::string& spec) {
    if (spec == "gaussian") return gaussian();
    if (spec == "rademacher") return rademacher();
    if (spec == "uniform") return uniform();
    if (spec == "three_point") return three_point();
    const std::string prefix = "table:";
    if (spec.rfind(prefix, 0) == 0) {
        std::vector<double> values, probs;
        std::stringstream body(spec.substr(prefix.size()));
        std::string item;
        while (std::getline(body, item, ';')) {
            if (item.empty()) continue;
            auto comma = item.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("Noise::parse: table entry needs 'value,prob': " + item);
            std::size_t used = 0;
            double v = std::stod(item.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("Noise::parse: bad value in " + item);
            std::string ps = item.substr(comma + 1);
            double p = std::stod(ps, &used);
            if (used != ps.size()) throw std::invalid_argument("Noise::parse: bad prob in " + item);
            values.push_back(v);
            probs.push_back(p);
        }
        if (values.empty()) throw std::invalid_argument("Noise::parse: empty table spec");
        return discrete_table(std::move(values), std::move(probs));
    }
    throw std::invalid_argument("Noise::parse: unknown distribution spec '" + spec + "'");
}

std::string Noise::spec() const {
    switch (kind_) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::rademacher: return "rademacher";
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::three_point: return "three_point";
        case NoiseKind::table: {
            std::string out = "table:";
            char buf[64];
            for (std::size_t i = 0; i < values_.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g", values_[i], probs_[i]);
                if (i) out += ';';
                out += buf;
            }
            return out;
        }
    }
    return {};
}

double Noise::support_bound() const {
    switch (kind_) {
        case NoiseKind::gaussian:
            throw std::domain_error("Noise::support_bound: gaussian law is unbounded");
        case NoiseKind::uniform: return kSqrt3;
        default: return std::max(std::abs(values_.front()), std::abs(values_.back()));
    }
}

const std::vector<double>& Noise::values() const {
    if (!discrete()) throw std::domain_error("Noise::values: continuous law has no finite support");
    return values_;
}
const std::vector<double>& Noise::probs() const {
    if (!discrete()) throw std::domain_error("Noise::probs: continuous law has no finite support");
    return probs_;
}

double Noise::sample(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("Noise::sample: u must lie in (0,1)");
    switch (kind_) {
        case NoiseKind::gaussian: return normal_quantile(u);
        case NoiseKind::uniform: return kSqrt3 * (2.0 * u - 1.0);
        default: {
            for (std::size_t i = 0; i + 1 < cdf_.size(); ++i)
                if (u <= cdf_[i]) return values_[i];
            return values_.back();
        }
    }
}

double Noise::raw_moment(int k) const {
    if (k < 0) throw std::invalid_argument("Noise::raw_moment: order must be >= 0");
    if (k == 0) return 1.0;
    switch (kind_) {
        case NoiseKind::gaussian: return gaussian_raw_moment(k);
        case NoiseKind::uniform:
            // E[xi^k] over [-s,s]: 0 odd, s^k/(k+1) even with s = sqrt(3)
            return (k % 2 == 1) ? 0.0 : std::pow(kSqrt3, k) / (k + 1);
        default: {
            double acc = 0.0;
            for (std::size_t i = 0; i < values_.size(); ++i)
                acc += probs_[i] * std::pow(values_[i], k);
            return acc;
        }
    }
}

double Noise::abs_moment(double p) const {
    if (!(p >= 0.0)) throw std::invalid_argument("Noise::abs_moment: p must be >= 0");
    if (p == 0.0) return 1.0;
    if (discrete()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            acc += probs_[i] * std::pow(std::abs(values_[i]), p);
        return acc;
    }
    return expect([p](double x) { return std::pow(std::abs(x), p); });
}

double Noise::expect(const std::function<double(double)>& f, double tol) const {
    switch (kind_) {
        case NoiseKind::gaussian: {
            static const double inv_sqrt_2pi = 1.0 / std::sqrt(8.0 * std::atan(1.0));
            auto integrand = [&](double x) {
                return f(x) * inv_sqrt_2pi * std::exp(-0.5 * x * x);
            };
            // split at 0: |x|^p kinks there for odd p
            const double lim = 13.0;
            return adaptive_simpson(integrand, -lim, 0.0, 0.5 * tol) +
                   adaptive_simpson(integrand, 0.0, lim, 0.5 * tol);
        }
        case NoiseKind::uniform: {
            const double dens = 1.0 / (2.0 * kSqrt3);
            auto integrand = [&](double x) { return f(x) * dens; };
            return adaptive_simpson(integrand, -kSqrt3, 0.0, 0.5 * tol) +
                   adaptive_simpson(integrand, 0.0, kSqrt3, 0.5 * tol);
        }
        default: {
            double acc = 0.0;
            for (std::size_t i = 0; i < values_.size(); ++i) acc += probs_[i] * f(values_[i]);
            return acc;
        }
    }
}

int Noise::gaussian_match_order(int max_check) const {
    if (max_check < 1) throw std::invalid_argument("Noise::gaussian_match_order: max_check >= 1");
    if (kind_ == NoiseKind::gaussian) return max_check;
    int m = 0;
    for (int k = 1; k <= max_check; ++k) {
        if (std::abs(raw_moment(k) - gaussian_raw_moment(k)) > 1e-9) break;
        m = k;
    }
    return m;
}

MomentProfile moment_profile(const Noise& noise, const std::vector<double>& ps, int max_check) {
    MomentProfile profile;
    profile.match_order = noise.gaussian_match_order(max_check);
    for (double p : ps) profile.abs_moments.emplace_back(p, noise.abs_moment(p));
    return profile;
}

double gaussian_abs_moment(double p) {
    if (!(p >= 0.0)) throw std::invalid_argument("gaussian_abs_moment: p must be >= 0");
    static const double log_sqrt_pi = 0.5 * std::log(4.0 * std::atan(1.0));
    return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - log_sqrt_pi);
}

Matrix sample_matrix(int rows, int cols, const Noise& noise, std::uint64_t root_seed,
                     std::uint64_t stream_id) {
    Matrix m(rows, cols);
    Rng rng = Rng::stream(root_seed, stream_id);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = noise.sample(rng.uniform());
    return m;
}

void sample_matrix_pair(int rows, int cols, const Noise& a, const Noise& b,
                        std::uint64_t root_seed, std::uint64_t stream_id, Matrix& out_a,
                        Matrix& out_b) {
    out_a = Matrix(rows, cols);
    out_b = Matrix(rows, cols);
    Rng rng = Rng::stream(root_seed, stream_id);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double u = rng.uniform();
            out_a(i, j) = a.sample(u);
            out_b(i, j) = b.sample(u);
        }
}

}  // namespace bsg
