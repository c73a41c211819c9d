#ifndef WITSOLVE_MODEL_HPP
#define WITSOLVE_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace witsolve {

// Two-stage control problem: x1 = x0 + u1, observed as y1 = x1 + v, corrected
// to x2 = x1 - u2; cost E{k^2 u1^2 + x2^2}; x0 ~ N(0, sigma_x^2), v ~ N(0, sigma^2).
struct ProblemParams {
    double k;
    double sigma;
    double sigma_x;

    ProblemParams(double k_, double sigma_, double sigma_x_)
        : k(k_), sigma(sigma_), sigma_x(sigma_x_) {
        if (!(k > 0.0) || !(sigma > 0.0) || !(sigma_x > 0.0))
            throw std::invalid_argument("ProblemParams: k, sigma, sigma_x must all be positive");
        if (!std::isfinite(k) || !std::isfinite(sigma) || !std::isfinite(sigma_x))
            throw std::invalid_argument("ProblemParams: parameters must be finite");
    }
};

// Values of the first-stage map at the collocation points: s_l = g1bar(x_{0l}).
struct SignalingLevels {
    std::vector<double> levels;
    int rule_order = 0;
};

// Evaluable strategy pair. curve_x/curve_g1bar tabulate the first-stage map
// (linear interpolation between points, clamped outside); gamma2 is callable
// directly. provenance: pbp | affine | sign | bansal-basar | external.
struct StrategyProfile {
    std::vector<double> curve_x;
    std::vector<double> curve_g1bar;
    std::function<double(double)> gamma2;
    std::string provenance;
    // Optional exact evaluator bypassing the tabulated curve (validation runs).
    std::function<double(double)> g1bar_exact;

    double g1bar(double x0) const {
        if (g1bar_exact) return g1bar_exact(x0);
        const auto& xs = curve_x;
        const auto& gs = curve_g1bar;
        if (x0 <= xs.front()) return gs.front();
        if (x0 >= xs.back()) return gs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x0);
        const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        const std::size_t lo = hi - 1;
        if (gs[lo] == gs[hi]) return gs[lo];
        const double w = (x0 - xs[lo]) / (xs[hi] - xs[lo]);
        return gs[lo] + w * (gs[hi] - gs[lo]);
    }
};

// Tabulation grid for strategy curves: uniformly spaced points over
// [-half_width_sigmas * sigma_x, +half_width_sigmas * sigma_x]. When
// refine_jumps is set, cells containing a plateau jump get extra points
// hugging the jump so linear interpolation reproduces the step.
struct GridSpec {
    int points = 2001;
    double half_width_sigmas = 4.0;
    bool refine_jumps = true;
};

inline std::vector<double> uniform_grid(const GridSpec& grid, double sigma_x) {
    if (grid.points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    const double w = grid.half_width_sigmas * sigma_x;
    std::vector<double> xs(grid.points);
    for (int i = 0; i < grid.points; ++i)
        xs[i] = -w + (2.0 * w) * (static_cast<double>(i) / (grid.points - 1));
    return xs;
}

// x_{0l} = sqrt(2 sigma_x^2) z_l, the points where the discretized equation is
// enforced exactly.
inline std::vector<double> collocation_points(const ProblemParams& params, const QuadratureRule& rule) {
    std::vector<double> x0(rule.nodes.size());
    const double scale = std::sqrt(2.0 * params.sigma_x * params.sigma_x);
    for (std::size_t l = 0; l < x0.size(); ++l) x0[l] = scale * rule.nodes[l];
    return x0;
}

// Posterior-mean second stage over the signaling levels:
//   gamma2(y1) = sum_j s_j w_j / sum_j w_j,  w_j = lambda_j exp(-(y1-s_j)^2 / (2 sigma^2)).
// Exponents are shifted by their maximum before exponentiating, so the ratio
// stays finite for any y1 (the denominator keeps at least the lambda of the
// dominating level).
inline double gamma2_hat(const SignalingLevels& levels, const QuadratureRule& rule,
                         const ProblemParams& params, double y1) {
    const auto& s = levels.levels;
    const auto& lam = rule.weights;
    const double inv2s2 = 1.0 / (2.0 * params.sigma * params.sigma);
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double d = y1 - s[j];
        const double e = -d * d * inv2s2;
        if (e > emax) emax = e;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double d = y1 - s[j];
        const double w = lam[j] * std::exp(-d * d * inv2s2 - emax);
        num += s[j] * w;
        den += w;
    }
    return num / den;
}

// Discretized stationarity condition for one strategy value g at state x0:
//   r = g - x0 + (1 / (sqrt(pi) k^2)) sum_i lambda_i { (z_i/c) d_i^2 + d_i },
// with c = sqrt(2 sigma^2) and d_i = g - gamma2_hat(g + c z_i). Zero iff g is
// person-by-person stationary at x0 given the levels.
inline double gamma1bar_residual(double g, double x0, const SignalingLevels& levels,
                                 const QuadratureRule& rule, const ProblemParams& params) {
    const double c = std::sqrt(2.0 * params.sigma * params.sigma);
    double acc = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double zi = rule.nodes[i];
        const double d = g - gamma2_hat(levels, rule, params, g + c * zi);
        const double term = rule.weights[i] * ((zi / c) * d * d + d);
        if (!std::isfinite(term)) {
            std::ostringstream os;
            os << "gamma1bar_residual: non-finite term at node " << i << " (g = " << g
               << ", x0 = " << x0 << ")";
            throw evaluation_error(os.str());
        }
        acc += term;
    }
    return g - x0 + acc / (std::sqrt(std::numbers::pi) * params.k * params.k);
}

// Component l is gamma1bar_residual(t_l, x_{0l}, t, ...): the n-dimensional
// system whose root gives the signaling levels.
inline std::vector<double> system_residual(const std::vector<double>& t, const ProblemParams& params,
                                           const QuadratureRule& rule) {
    if (static_cast<int>(t.size()) != rule.order)
        throw std::invalid_argument("system_residual: t length must equal the rule order");
    const std::vector<double> x0 = collocation_points(params, rule);
    const SignalingLevels levels{t, rule.order};
    std::vector<double> r(t.size());
    for (std::size_t l = 0; l < t.size(); ++l)
        r[l] = gamma1bar_residual(t[l], x0[l], levels, rule, params);
    return r;
}

// gamma2_hat bound into a standalone callable (own copies of levels and rule).
inline std::function<double(double)> make_mixture_gamma2(SignalingLevels levels, QuadratureRule rule,
                                                         ProblemParams params) {
    return [levels = std::move(levels), rule = std::move(rule), params](double y1) {
        return gamma2_hat(levels, rule, params, y1);
    };
}

// Quadrature estimate of E[(g - gamma2(g + v))^2 | x1 = g]: the second-stage
// cost a fixed signal value g incurs through the noisy channel.
inline double stage2_quadrature(double g, const SignalingLevels& levels, const QuadratureRule& rule,
                                const ProblemParams& params) {
    const double c = std::sqrt(2.0 * params.sigma * params.sigma);
    double acc = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double d = g - gamma2_hat(levels, rule, params, g + c * rule.nodes[i]);
        acc += rule.weights[i] * d * d;
    }
    return acc / std::sqrt(std::numbers::pi);
}

// Levels-only quadrature estimate of the total cost: prior expectation over
// the collocation points of k^2 (s_l - x_{0l})^2 plus the stage-2 term at s_l.
// Used to rank distinct converged fixed points.
inline double levels_cost_quadrature(const std::vector<double>& t, const ProblemParams& params,
                                     const QuadratureRule& rule) {
    const std::vector<double> x0 = collocation_points(params, rule);
    const SignalingLevels levels{t, rule.order};
    const double k2 = params.k * params.k;
    double acc = 0.0;
    for (std::size_t l = 0; l < t.size(); ++l) {
        const double u = t[l] - x0[l];
        acc += rule.weights[l] * (k2 * u * u + stage2_quadrature(t[l], levels, rule, params));
    }
    return acc / std::sqrt(std::numbers::pi);
}

} // namespace witsolve

#endif
