#ifndef WITSOLVE_BASELINES_HPP
#define WITSOLVE_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "quadrature.hpp"

namespace witsolve {

// Optimal linear pair g1bar(x0) = nu x0, gamma2(y1) = mu y1.
struct AffineLaw {
    double nu = 0.0;
    double mu = 0.0;
    double t_root = 0.0;
    std::vector<double> all_real_roots;
};

// Bansal-Basar parametric first stage: u1 = epsilon sgn(x0) + lambda x0.
struct BansalBasarLaw {
    double epsilon = 0.0;
    double lambda = 0.0;
};

namespace detail {

// Stationarity condition of the closed-form affine cost in t = sigma_x nu.
inline double affine_quintic(double t, double k, double sigma_x) {
    const double q = 1.0 + t * t;
    return (t - sigma_x) * q * q + t / (k * k);
}

inline double affine_closed_cost(double nu, double k, double sigma_x) {
    const double sx2 = sigma_x * sigma_x;
    const double a = nu - 1.0;
    return k * k * a * a * sx2 + sx2 * nu * nu / (1.0 + sx2 * nu * nu);
}

// All real roots on (0, hi]: sign-change scan over 4096 subintervals, each
// bracket polished by bisection to width 1e-12.
inline std::vector<double> affine_scan_roots(double k, double sigma_x, double hi) {
    constexpr int kIntervals = 4096;
    std::vector<double> roots;
    double t_prev = 0.0;
    double f_prev = affine_quintic(0.0, k, sigma_x);
    for (int i = 1; i <= kIntervals; ++i) {
        const double t = hi * static_cast<double>(i) / kIntervals;
        const double f = affine_quintic(t, k, sigma_x);
        if (f == 0.0) {
            roots.push_back(t);
        } else if (f_prev * f < 0.0) {
            double lo = t_prev, up = t, flo = f_prev;
            int guard = 0;
            while (up - lo > 1e-12 && ++guard < 200) {
                const double mid = 0.5 * (lo + up);
                const double fm = affine_quintic(mid, k, sigma_x);
                if (fm == 0.0) { lo = up = mid; break; }
                if (flo * fm < 0.0) up = mid;
                else { lo = mid; flo = fm; }
            }
            roots.push_back(0.5 * (lo + up));
        }
        t_prev = t;
        f_prev = f;
    }
    return roots;
}

// Cost-minimizing root of the quintic; exact ties (they occur when
// k^2 sigma_x^2 = 1) break toward the larger root.
inline std::pair<double, std::vector<double>> affine_best_root(double k, double sigma_x) {
    std::vector<double> roots = affine_scan_roots(k, sigma_x, sigma_x);
    if (roots.empty()) roots = affine_scan_roots(k, sigma_x, 2.0 * sigma_x);
    if (roots.empty())
        throw solve_error("affine_best_root: no real root of the slope equation found");
    double best_t = roots.front();
    double best_cost = affine_closed_cost(best_t / sigma_x, k, sigma_x);
    for (std::size_t i = 1; i < roots.size(); ++i) {
        const double cost = affine_closed_cost(roots[i] / sigma_x, k, sigma_x);
        if (cost <= best_cost + 1e-12 * (1.0 + std::fabs(best_cost))) {
            best_t = roots[i];
            best_cost = std::min(best_cost, cost);
        }
    }
    return {best_t, std::move(roots)};
}

// Uniform tabulation of a closed-form first stage; step_at_zero inserts a
// +-1e-9 sigma_x pair around the origin so interpolation reproduces a jump there.
template <class F>
void tabulate_curve(F&& g1, const ProblemParams& params, const GridSpec& grid, bool step_at_zero,
                    std::vector<double>& xs, std::vector<double>& gs) {
    xs = uniform_grid(grid, params.sigma_x);
    if (step_at_zero && grid.refine_jumps) {
        const double d = 1e-9 * params.sigma_x;
        xs.push_back(-d);
        xs.push_back(d);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    gs.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) gs[i] = g1(xs[i]);
}

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace detail

// Minimizes the closed-form affine cost k^2 (nu-1)^2 sigma_x^2 +
// sigma_x^2 nu^2 / (1 + sigma_x^2 nu^2) over the stationary slopes. The mu
// relation assumes unit observation noise, so sigma != 1 is rejected.
inline AffineLaw affine_optimal(const ProblemParams& params) {
    if (params.sigma != 1.0)
        throw std::invalid_argument("affine_optimal: only sigma = 1 is supported");
    auto [t, roots] = detail::affine_best_root(params.k, params.sigma_x);
    AffineLaw law;
    law.t_root = t;
    law.all_real_roots = std::move(roots);
    law.nu = t / params.sigma_x;
    law.mu = t * t / (1.0 + t * t);
    return law;
}

inline StrategyProfile affine_profile(const AffineLaw& law, const ProblemParams& params,
                                      const GridSpec& grid = {}) {
    StrategyProfile p;
    detail::tabulate_curve([&](double x) { return law.nu * x; }, params, grid, false, p.curve_x,
                           p.curve_g1bar);
    p.gamma2 = [mu = law.mu](double y1) { return mu * y1; };
    p.provenance = "affine";
    return p;
}

// g1bar(x0) = sigma_x sgn(x0), gamma2(y1) = sigma_x tanh(sigma_x y1).
inline StrategyProfile witsenhausen_sign(const ProblemParams& params, const GridSpec& grid = {}) {
    const double sx = params.sigma_x;
    StrategyProfile p;
    detail::tabulate_curve([sx](double x) { return sx * detail::sgn(x); }, params, grid, true,
                           p.curve_x, p.curve_g1bar);
    p.gamma2 = [sx](double y1) { return sx * std::tanh(sx * y1); };
    p.provenance = "sign";
    return p;
}

// First stage x0 + epsilon sgn(x0) + lambda x0; second stage is the
// quadrature posterior mean given y1 = g1bar(x0) + v. The conditioned
// quantity is the control term epsilon sgn(x0) + lambda x0 by default;
// condition_on_state switches to the post-control state g1bar(x0).
inline StrategyProfile bansal_basar_profile(const BansalBasarLaw& law, const ProblemParams& params,
                                            const QuadratureRule& rule, bool condition_on_state = false,
                                            const GridSpec& grid = {}) {
    const double eps = law.epsilon, lam = law.lambda;
    auto g1 = [eps, lam](double x) { return x + eps * detail::sgn(x) + lam * x; };

    const std::vector<double> x0 = collocation_points(params, rule);
    std::vector<double> means(x0.size()), values(x0.size());
    for (std::size_t j = 0; j < x0.size(); ++j) {
        means[j] = g1(x0[j]);
        values[j] = condition_on_state ? means[j] : eps * detail::sgn(x0[j]) + lam * x0[j];
    }

    StrategyProfile p;
    detail::tabulate_curve(g1, params, grid, true, p.curve_x, p.curve_g1bar);
    p.gamma2 = [means = std::move(means), values = std::move(values), w = rule.weights,
                inv2s2 = 1.0 / (2.0 * params.sigma * params.sigma)](double y1) {
        double emax = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < means.size(); ++j) {
            const double d = y1 - means[j];
            emax = std::max(emax, -d * d * inv2s2);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < means.size(); ++j) {
            const double d = y1 - means[j];
            const double wj = w[j] * std::exp(-d * d * inv2s2 - emax);
            num += values[j] * wj;
            den += wj;
        }
        return num / den;
    };
    p.provenance = "bansal-basar";
    return p;
}

} // namespace witsolve

#endif
