#pragma once
// Quadrature utilities: Gauss-Hermite rules (weight e^{-x^2}) for Gaussian
// expectations, and adaptive Simpson integration for generic 1-d integrals.
#include <functional>
#include <vector>

namespace bsg {

struct GaussHermite {
    std::vector<double> x;  // nodes, ascending
    std::vector<double> w;  // weights; sum(w) = sqrt(pi)
};

// n-point Gauss-Hermite rule via Newton iteration on the orthonormal
// recurrence; exact for polynomials of degree <= 2n-1 against e^{-x^2}.
GaussHermite gauss_hermite(int n);

// E[f(g)] for g ~ N(0,1) using an n-point rule.
double gauss_hermite_expect(const std::function<double(double)>& f, int n);

// Adaptive Simpson on [a,b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 52);

}  // namespace bsg
