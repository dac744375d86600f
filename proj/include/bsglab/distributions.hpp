#pragma once
// Catalogue of unit-variance, mean-zero disorder laws and their moment
// machinery. Discrete laws carry their support explicitly; continuous laws
// (gaussian, uniform) are handled by quadrature against the density.
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bsglab/matrix.hpp"

namespace bsg {

enum class NoiseKind { gaussian, rademacher, uniform, three_point, table };

class Noise {
public:
    static Noise gaussian();
    static Noise rademacher();
    static Noise uniform();      // uniform on [-sqrt(3), sqrt(3)]
    static Noise three_point();  // {-sqrt(3), 0, sqrt(3)} with probs {1/6, 2/3, 1/6}
    static Noise discrete_table(std::vector<double> values, std::vector<double> probs);

    // Spec strings: "gaussian" | "rademacher" | "uniform" | "three_point" |
    // "table:v1,p1;v2,p2;...". parse/spec round-trip.
    static Noise parse(const std::string& spec);
    std::string spec() const;

    NoiseKind kind() const { return kind_; }
    bool discrete() const { return kind_ != NoiseKind::gaussian && kind_ != NoiseKind::uniform; }
    bool bounded() const { return kind_ != NoiseKind::gaussian; }
    double support_bound() const;  // sup |xi| for bounded laws; throws for gaussian

    const std::vector<double>& values() const;  // discrete laws only, ascending
    const std::vector<double>& probs() const;

    // Inverse CDF draw from a uniform u in (0,1). Common random numbers across
    // laws are obtained by feeding the same u to different laws.
    double sample(double u) const;

    double raw_moment(int k) const;      // E[xi^k], exact
    double abs_moment(double p) const;   // E[|xi|^p]; exact for discrete laws,
                                         // adaptive quadrature (tol 1e-10) otherwise
    // E[f(xi)]: exact sum for discrete laws, adaptive quadrature against the
    // density for continuous ones.
    double expect(const std::function<double(double)>& f, double tol = 1e-10) const;

    // Largest m <= max_check such that E[xi^k] matches the standard Gaussian
    // moment for all k = 1..m (tolerance 1e-9). Gaussian returns max_check.
    int gaussian_match_order(int max_check = 11) const;

private:
    Noise(NoiseKind kind, std::vector<double> values, std::vector<double> probs);
    void validate() const;

    NoiseKind kind_;
    std::vector<double> values_;  // discrete support (empty for continuous)
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

struct MomentProfile {
    int match_order = 0;
    std::vector<std::pair<double, double>> abs_moments;  // (p, E|xi|^p)
};

MomentProfile moment_profile(const Noise& noise, const std::vector<double>& ps,
                             int max_check = 11);

// Gaussian absolute moment E|g|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
double gaussian_abs_moment(double p);

// Draw a rows x cols disorder matrix; entry (i,j) consumes counter i*cols+j of
// stream (root_seed, stream_id), so draws are reproducible and order-free.
Matrix sample_matrix(int rows, int cols, const Noise& noise, std::uint64_t root_seed,
                     std::uint64_t stream_id = 0);

// Same uniforms pushed through two laws (common random numbers).
void sample_matrix_pair(int rows, int cols, const Noise& a, const Noise& b,
                        std::uint64_t root_seed, std::uint64_t stream_id, Matrix& out_a,
                        Matrix& out_b);

}  // namespace bsg
