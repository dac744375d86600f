#include "bsglab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bsg {

namespace {

// Orthonormal Hermite functions h_k (weight e^{-x^2}):
//   h_{k+1} = x*sqrt(2/(k+1))*h_k - sqrt(k/(k+1))*h_{k-1},  h_0 = pi^{-1/4}.
// Returns h_n(x) and h_{n-1}(x).
void hermite_pair(int n, double x, double& hn, double& hnm1) {
    double p0 = std::pow(4.0 * std::atan(1.0), -0.25), p1 = std::sqrt(2.0) * x * p0;
    if (n == 0) { hn = p0; hnm1 = 0.0; return; }
    for (int k = 1; k < n; ++k) {
        double p2 = x * std::sqrt(2.0 / (k + 1)) * p1 - std::sqrt(double(k) / (k + 1)) * p0;
        p0 = p1;
        p1 = p2;
    }
    hn = p1;
    hnm1 = p0;
}

}  // namespace

GaussHermite gauss_hermite(int n) {
    if (n < 1 || n > 256) throw std::invalid_argument("gauss_hermite: order out of range [1,256]");
    GaussHermite rule;
    rule.x.assign(n, 0.0);
    rule.w.assign(n, 0.0);

    const int half = (n + 1) / 2;
    // r1/r2 hold the two previously converged roots for the guess ladder.
    double z = 0.0, r1 = 0.0, r2 = 0.0;
    for (int i = 0; i < half; ++i) {
        // Initial guesses, largest root first (Numerical-Recipes ladder).
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * r2;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * r2;
        } else {
            z = 2.0 * z - r2;
        }

        double hn = 0.0, hnm1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            hermite_pair(n, z, hn, hnm1);
            double deriv = std::sqrt(2.0 * n) * hnm1;  // h_n' = sqrt(2n) h_{n-1}
            double dz = hn / deriv;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        hermite_pair(n, z, hn, hnm1);
        double deriv = std::sqrt(2.0 * n) * hnm1;
        r2 = r1;
        r1 = z;
        rule.x[n - 1 - i] = z;
        rule.x[i] = -z;
        double wi = 2.0 / (deriv * deriv);
        rule.w[n - 1 - i] = wi;
        rule.w[i] = wi;
    }
    if (n % 2 == 1) rule.x[half - 1] = 0.0;  // symmetrize the middle node exactly
    return rule;
}

double gauss_hermite_expect(const std::function<double(double)>& f, int n) {
    static const double inv_sqrt_pi = 1.0 / std::sqrt(4.0 * std::atan(1.0));
    static const double sqrt2 = std::sqrt(2.0);
    GaussHermite rule = gauss_hermite(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rule.w[i] * f(sqrt2 * rule.x[i]);
    return acc * inv_sqrt_pi;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tol must be positive");
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace bsg
