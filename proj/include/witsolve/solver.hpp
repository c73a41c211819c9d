#ifndef WITSOLVE_SOLVER_HPP
#define WITSOLVE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "baselines.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "quadrature.hpp"

namespace witsolve {

struct SolverConfig {
    double tol_residual = 1e-10;   // infinity norm of the system residual
    int max_iterations = 200;
    double damping = 0.5;          // backtracking factor
    double min_step = 0x1.0p-20;   // smallest accepted line-search step
    double jacobian_step = 1e-7;   // relative finite-difference step
    std::vector<std::string> starts = {"identity", "sign", "affine"};
};

struct SolveResult {
    SignalingLevels levels;
    double residual_inf = std::numeric_limits<double>::infinity();
    double residual_two = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::string start_tag;
    bool converged = false;
};

namespace detail {

inline double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

inline double norm_two(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// In-place LU with partial pivoting; solves A x = b, returns false when a
// pivot collapses relative to the matrix scale.
inline bool lu_solve(std::vector<double> A, std::vector<double> b, int n, std::vector<double>& x) {
    double amax = 0.0;
    for (double a : A) amax = std::max(amax, std::fabs(a));
    if (amax == 0.0) return false;
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int p = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(A[r * n + col]) > std::fabs(A[p * n + col])) p = r;
        if (std::fabs(A[p * n + col]) < 1e-14 * amax) return false;
        if (p != col) {
            for (int c = 0; c < n; ++c) std::swap(A[p * n + c], A[col * n + c]);
            std::swap(b[p], b[col]);
        }
        const double inv = 1.0 / A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double m = A[r * n + col] * inv;
            if (m == 0.0) continue;
            A[r * n + col] = 0.0;
            for (int c = col + 1; c < n; ++c) A[r * n + c] -= m * A[col * n + c];
            b[r] -= m * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r * n + c] * x[c];
        x[r] = s / A[r * n + r];
    }
    return true;
}

struct NewtonOutcome {
    std::vector<double> t;
    double rinf = std::numeric_limits<double>::infinity();
    double rtwo = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// Damped Newton on the n-dimensional system: forward-difference Jacobian,
// backtracking on the merit 1/2 ||f||^2, Cauchy gradient step when the
// Jacobian is singular.
inline NewtonOutcome newton_solve(std::vector<double> t, const ProblemParams& params,
                                  const QuadratureRule& rule, const SolverConfig& config) {
    const int n = rule.order;
    NewtonOutcome out;
    std::vector<double> f;
    try {
        f = system_residual(t, params, rule);
    } catch (const evaluation_error&) {
        out.t = std::move(t);
        return out;
    }
    double merit = 0.5 * norm_two(f) * norm_two(f);

    for (int iter = 0; iter <= config.max_iterations; ++iter) {
        const double rinf = norm_inf(f);
        if (rinf <= config.tol_residual) {
            out.converged = true;
            out.iterations = iter;
            break;
        }
        if (iter == config.max_iterations) {
            out.iterations = iter;
            break;
        }

        std::vector<double> J(static_cast<std::size_t>(n) * n);
        bool jac_ok = true;
        for (int j = 0; j < n && jac_ok; ++j) {
            const double h = config.jacobian_step * std::max(1.0, std::fabs(t[j]));
            std::vector<double> tj = t;
            tj[j] += h;
            try {
                const std::vector<double> fj = system_residual(tj, params, rule);
                for (int r = 0; r < n; ++r) J[static_cast<std::size_t>(r) * n + j] = (fj[r] - f[r]) / h;
            } catch (const evaluation_error&) {
                jac_ok = false;
            }
        }
        if (!jac_ok) {
            out.iterations = iter;
            break;
        }

        std::vector<double> rhs(f);
        for (double& v : rhs) v = -v;
        std::vector<double> step;
        if (!lu_solve(J, rhs, n, step)) {
            // Cauchy step on the merit function: -alpha J^T f with the exact
            // line minimum of the linearized model.
            std::vector<double> g(n, 0.0), Jg(n, 0.0);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) g[c] += J[static_cast<std::size_t>(r) * n + c] * f[r];
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) Jg[r] += J[static_cast<std::size_t>(r) * n + c] * g[c];
            const double gg = norm_two(g) * norm_two(g);
            const double jg2 = norm_two(Jg) * norm_two(Jg);
            if (gg == 0.0 || jg2 == 0.0) {
                out.iterations = iter;
                break;
            }
            step.assign(n, 0.0);
            const double alpha = gg / jg2;
            for (int c = 0; c < n; ++c) step[c] = -alpha * g[c];
        }

        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= config.min_step) {
            std::vector<double> tn(t);
            for (int c = 0; c < n; ++c) tn[c] += alpha * step[c];
            double mn = std::numeric_limits<double>::infinity();
            std::vector<double> fn;
            try {
                fn = system_residual(tn, params, rule);
                mn = 0.5 * norm_two(fn) * norm_two(fn);
            } catch (const evaluation_error&) {
            }
            if (mn <= merit * (1.0 - 1e-4 * alpha)) {
                t = std::move(tn);
                f = std::move(fn);
                merit = mn;
                accepted = true;
                break;
            }
            alpha *= config.damping;
        }
        if (!accepted) {
            out.iterations = iter;
            break;
        }
    }

    out.rinf = norm_inf(f);
    out.rtwo = norm_two(f);
    out.t = std::move(t);
    return out;
}

inline std::vector<double> start_vector(const std::string& tag, const ProblemParams& params,
                                        const QuadratureRule& rule) {
    const std::vector<double> x0 = collocation_points(params, rule);
    std::vector<double> t(x0.size());
    if (tag == "identity") {
        t = x0;
    } else if (tag == "sign") {
        for (std::size_t l = 0; l < t.size(); ++l) t[l] = params.sigma_x * sgn(rule.nodes[l]);
    } else if (tag == "affine") {
        const double nu = affine_best_root(params.k, params.sigma_x).first / params.sigma_x;
        for (std::size_t l = 0; l < t.size(); ++l) t[l] = nu * x0[l];
    } else {
        throw std::invalid_argument("solve_levels: unknown start tag '" + tag + "'");
    }
    return t;
}

// Scalar stationarity solves share structure across x0: the residual is
// r(g; x0) = g - x0 + corr(g) where corr does not depend on x0. One table of
// corr (and of the stage-2 cost, for root selection) over a fine g grid
// serves every x0 for a given level set.
class ScalarCurveSolver {
public:
    ScalarCurveSolver(SignalingLevels levels, ProblemParams params, QuadratureRule rule,
                      const SolverConfig& config)
        : levels_(std::move(levels)), params_(std::move(params)), rule_(std::move(rule)),
          tol_(config.tol_residual) {
        const auto [mn, mx] = std::minmax_element(levels_.levels.begin(), levels_.levels.end());
        lo_ = *mn - 6.0 * params_.sigma;
        hi_ = *mx + 6.0 * params_.sigma;
        const double step = params_.sigma / 16.0;
        const int m = std::max(33, static_cast<int>(std::ceil((hi_ - lo_) / step)) + 1);
        gs_.resize(m);
        corr_.resize(m);
        for (int i = 0; i < m; ++i) {
            gs_[i] = lo_ + (hi_ - lo_) * (static_cast<double>(i) / (m - 1));
            corr_[i] = corr(gs_[i]);
        }
    }

    // Cost-minimizing stationary value at x0. Throws solve_error when no sign
    // change exists even after one 2x widening of the scan window.
    double solve_at(double x0) const {
        std::vector<double> roots = bracket_and_polish(x0);
        if (roots.empty()) roots = widened_scan(x0);
        if (roots.empty()) {
            std::ostringstream os;
            os << "gamma1bar_at: no stationary point found for x0 = " << x0;
            throw solve_error(os.str());
        }
        double best = roots.front();
        double best_cost = point_cost(best, x0);
        for (std::size_t i = 1; i < roots.size(); ++i) {
            const double c = point_cost(roots[i], x0);
            if (c < best_cost) {
                best = roots[i];
                best_cost = c;
            }
        }
        return best;
    }

private:
    double corr(double g) const {
        // Same accumulation as the full residual, with the g - x0 part left out.
        const double c = std::sqrt(2.0 * params_.sigma * params_.sigma);
        double acc = 0.0;
        for (int i = 0; i < rule_.order; ++i) {
            const double zi = rule_.nodes[i];
            const double d = g - gamma2_hat(levels_, rule_, params_, g + c * zi);
            acc += rule_.weights[i] * ((zi / c) * d * d + d);
        }
        return acc / (std::sqrt(std::numbers::pi) * params_.k * params_.k);
    }

    double residual(double g, double x0) const {
        return gamma1bar_residual(g, x0, levels_, rule_, params_);
    }

    double point_cost(double g, double x0) const {
        const double u = g - x0;
        return params_.k * params_.k * u * u + stage2_quadrature(g, levels_, rule_, params_);
    }

    std::vector<double> bracket_and_polish(double x0) const {
        std::vector<double> roots;
        double fp = gs_[0] - x0 + corr_[0];
        if (fp == 0.0) roots.push_back(gs_[0]);
        for (std::size_t i = 1; i < gs_.size(); ++i) {
            const double f = gs_[i] - x0 + corr_[i];
            if (f == 0.0) roots.push_back(gs_[i]);
            else if (fp != 0.0 && fp * f < 0.0) roots.push_back(polish(gs_[i - 1], gs_[i], fp, f, x0));
            fp = f;
        }
        return roots;
    }

    std::vector<double> widened_scan(double x0) const {
        const double c0 = 0.5 * (lo_ + hi_), w = hi_ - lo_;
        const double lo = c0 - w, hi = c0 + w;
        const int m = static_cast<int>(gs_.size()) * 2;
        std::vector<double> roots;
        double gp = lo, fp = residual(gp, x0);
        for (int i = 1; i < m; ++i) {
            const double g = lo + (hi - lo) * (static_cast<double>(i) / (m - 1));
            const double f = residual(g, x0);
            if (f == 0.0) roots.push_back(g);
            else if (fp != 0.0 && fp * f < 0.0) roots.push_back(polish(gp, g, fp, f, x0));
            gp = g;
            fp = f;
        }
        return roots;
    }

    // Safeguarded Newton with a forward-difference slope; falls back to
    // bisection whenever the Newton candidate leaves the bracket or stalls.
    double polish(double lo, double hi, double flo, double fhi, double x0) const {
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        double xl = lo, xh = hi;
        if (flo > 0.0) std::swap(xl, xh);
        double x = 0.5 * (lo + hi);
        double dxold = std::fabs(hi - lo), dx = dxold;
        double f = residual(x, x0);
        for (int iter = 0; iter < 100; ++iter) {
            if (std::fabs(f) <= tol_) return x;
            const double h = 1e-7 * std::max(1.0, std::fabs(x));
            const double df = (residual(x + h, x0) - f) / h;
            const bool newton_ok =
                df != 0.0 && ((x - xh) * df - f) * ((x - xl) * df - f) < 0.0 &&
                std::fabs(2.0 * f) <= std::fabs(dxold * df);
            if (newton_ok) {
                dxold = dx;
                dx = f / df;
                x -= dx;
            } else {
                dxold = dx;
                dx = 0.5 * (xh - xl);
                x = xl + dx;
            }
            if (std::fabs(dx) < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x)))
                return x;
            f = residual(x, x0);
            if (f < 0.0) xl = x;
            else xh = x;
        }
        return x;
    }

    SignalingLevels levels_;
    ProblemParams params_;
    QuadratureRule rule_;
    double tol_;
    double lo_ = 0.0, hi_ = 0.0;
    std::vector<double> gs_, corr_;
};

} // namespace detail

// Multi-start damped Newton on the level system. Among converged starts the
// winner is the one whose levels give the lowest quadrature cost estimate;
// when nothing converges, the lowest-residual attempt is returned with
// converged = false.
inline SolveResult solve_levels(const ProblemParams& params, const QuadratureRule& rule,
                                const SolverConfig& config = {}) {
    if (config.starts.empty()) throw std::invalid_argument("solve_levels: no starts configured");
    SolveResult best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const std::string& tag : config.starts) {
        detail::NewtonOutcome o =
            detail::newton_solve(detail::start_vector(tag, params, rule), params, rule, config);
        const bool take =
            best.start_tag.empty() ||
            (o.converged && !best.converged) ||
            (o.converged && best.converged &&
             levels_cost_quadrature(o.t, params, rule) < best_cost) ||
            (!o.converged && !best.converged && o.rinf < best.residual_inf);
        if (take) {
            best.levels = SignalingLevels{o.t, rule.order};
            best.residual_inf = o.rinf;
            best.residual_two = o.rtwo;
            best.iterations = o.iterations;
            best.start_tag = tag;
            best.converged = o.converged;
            if (o.converged) best_cost = levels_cost_quadrature(o.t, params, rule);
        }
    }
    return best;
}

// Stationary strategy value at an arbitrary state x0, given converged levels.
inline double gamma1bar_at(double x0, const SignalingLevels& levels, const ProblemParams& params,
                           const QuadratureRule& rule, const SolverConfig& config = {}) {
    return detail::ScalarCurveSolver(levels, params, rule, config).solve_at(x0);
}

// Tabulates the first-stage strategy for a given level set and attaches the
// posterior-mean second stage. Plateau jumps are located by bisection and the
// bracketing points inserted so the interpolated curve reproduces each step.
inline StrategyProfile make_pbp_profile(const SignalingLevels& levels, const ProblemParams& params,
                                        const QuadratureRule& rule, const SolverConfig& config = {},
                                        const GridSpec& grid = {}) {
    std::vector<double> xs = uniform_grid(grid, params.sigma_x);
    const detail::ScalarCurveSolver solver(levels, params, rule, config);

    std::vector<double> gs(xs.size());
    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        try {
            gs[i] = solver.solve_at(xs[i]);
        } catch (const solve_error&) {
            gs[i] = std::numeric_limits<double>::quiet_NaN();
            failed.push_back(i);
        }
    }
    if (!failed.empty()) {
        if (failed.size() * 100 > xs.size()) {
            std::ostringstream os;
            os << "make_pbp_profile: " << failed.size() << " of " << xs.size()
               << " grid points failed (first at x0 = " << xs[failed.front()] << ")";
            throw solve_error(os.str());
        }
        for (std::size_t i : failed) {
            std::size_t a = i, b = i;
            while (a > 0 && std::isnan(gs[a])) --a;
            while (b + 1 < gs.size() && std::isnan(gs[b])) ++b;
            if (std::isnan(gs[a])) gs[i] = gs[b];
            else if (std::isnan(gs[b])) gs[i] = gs[a];
            else gs[i] = gs[a] + (gs[b] - gs[a]) * ((xs[i] - xs[a]) / (xs[b] - xs[a]));
        }
    }

    if (grid.refine_jumps && xs.size() >= 3) {
        std::vector<double> adiff(xs.size() - 1);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) adiff[i] = std::fabs(gs[i + 1] - gs[i]);
        std::vector<double> tmp(adiff);
        std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
        const double med = tmp[tmp.size() / 2];
        const auto [gmin, gmax] = std::minmax_element(gs.begin(), gs.end());
        const double thr = std::max(8.0 * med, 1e-3 * (*gmax - *gmin));
        if (thr > 0.0) {
            std::vector<std::pair<double, double>> inserted;
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                if (adiff[i] <= thr) continue;
                double xl = xs[i], gl = gs[i], xr = xs[i + 1], gr = gs[i + 1];
                try {
                    for (int it = 0; it < 60; ++it) {
                        if (xr - xl <= 1e-13 * std::max({1.0, std::fabs(xl), std::fabs(xr)})) break;
                        const double xm = 0.5 * (xl + xr);
                        const double gm = solver.solve_at(xm);
                        if (std::fabs(gm - gl) <= std::fabs(gm - gr)) {
                            xl = xm;
                            gl = gm;
                        } else {
                            xr = xm;
                            gr = gm;
                        }
                    }
                } catch (const solve_error&) {
                }
                if (xl > xs[i]) inserted.emplace_back(xl, gl);
                if (xr < xs[i + 1]) inserted.emplace_back(xr, gr);
            }
            if (!inserted.empty()) {
                std::vector<std::pair<double, double>> all;
                all.reserve(xs.size() + inserted.size());
                for (std::size_t i = 0; i < xs.size(); ++i) all.emplace_back(xs[i], gs[i]);
                all.insert(all.end(), inserted.begin(), inserted.end());
                std::sort(all.begin(), all.end());
                xs.clear();
                gs.clear();
                for (const auto& [x, g] : all) {
                    if (!xs.empty() && x == xs.back()) continue;
                    xs.push_back(x);
                    gs.push_back(g);
                }
            }
        }
    }

    StrategyProfile p;
    p.curve_x = std::move(xs);
    p.curve_g1bar = std::move(gs);
    p.gamma2 = make_mixture_gamma2(levels, rule, params);
    p.provenance = "pbp";
    return p;
}

// solve_levels + make_pbp_profile in one call; throws when no start converges.
inline StrategyProfile build_strategy(const ProblemParams& params, const QuadratureRule& rule,
                                      const SolverConfig& config = {}, const GridSpec& grid = {}) {
    const SolveResult sr = solve_levels(params, rule, config);
    if (!sr.converged) {
        std::ostringstream os;
        os << "build_strategy: no start converged (best residual " << sr.residual_inf << " from '"
           << sr.start_tag << "')";
        throw solve_error(os.str());
    }
    return make_pbp_profile(sr.levels, params, rule, config, grid);
}

} // namespace witsolve

#endif
