#ifndef WITSOLVE_QUADRATURE_HPP
#define WITSOLVE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace witsolve {

// n-point Gauss-Hermite rule for the weight e^{-x^2}:
//   integral f(x) e^{-x^2} dx ~= sum_i weights[i] * f(nodes[i])
// exact for polynomials of degree <= 2n-1.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Eigenvalues and first eigenvector components of a symmetric tridiagonal
// matrix, QL with implicit shifts. d is the diagonal, e the subdiagonal
// (e[0..n-2] used). On return d holds eigenvalues and z the first component
// of each normalized eigenvector.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    z.assign(n, 0.0);
    z[0] = 1.0;
    if (n == 1) return;
    e.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 50)
                    throw solve_error("tridiag_ql: no convergence in 50 iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

inline constexpr int kMaxQuadratureOrder = 64;

// Golub-Welsch construction: the Hermite three-term recurrence gives a
// symmetric tridiagonal matrix with zero diagonal and off-diagonal sqrt(i/2);
// its eigenvalues are the nodes and sqrt(pi) times the squared first
// eigenvector components are the weights.
inline QuadratureRule hermite_rule(int n) {
    if (n < 1 || n > kMaxQuadratureOrder) {
        std::ostringstream os;
        os << "hermite_rule: order " << n << " outside [1, " << kMaxQuadratureOrder << "]";
        throw std::out_of_range(os.str());
    }
    std::vector<double> d(n, 0.0), e(n, 0.0), z;
    for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(0.5 * i);
    detail::tridiag_ql(d, e, z);

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });

    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[idx[i]];
        rule.weights[i] = sqrt_pi * z[idx[i]] * z[idx[i]];
    }

    // The weight e^{-x^2} is even, so the exact rule is symmetric; enforce it
    // bitwise rather than leaving eigensolver noise in the last bits.
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// Weighted node sum: sum_i weights[i] * f(nodes[i]).
template <class F>
double integrate(F&& f, const QuadratureRule& rule) {
    double acc = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double fi = f(rule.nodes[i]);
        if (!std::isfinite(fi)) {
            std::ostringstream os;
            os << "integrate: non-finite integrand at node " << i << " (z = " << rule.nodes[i] << ")";
            throw evaluation_error(os.str());
        }
        acc += rule.weights[i] * fi;
    }
    return acc;
}

} // namespace witsolve

#endif
