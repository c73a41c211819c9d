// Acceptance gate: one [PASS]/[FAIL] line per criterion, sub-checks indented.
// Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <witsolve/witsolve.hpp>

using namespace witsolve;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof(b), "%.6g", v);
    return b;
}

struct Gate {
    std::string title;
    struct Sub {
        bool ok;
        bool info;
        std::string text;
    };
    std::vector<Sub> subs;

    bool check(bool ok, const std::string& text) {
        subs.push_back({ok, false, text});
        return ok;
    }
    void note(const std::string& text) { subs.push_back({true, true, text}); }
    bool pass() const {
        return std::all_of(subs.begin(), subs.end(), [](const Sub& s) { return s.ok; });
    }
};

void print_gate(const Gate& g) {
    std::printf("[%s] %s\n", g.pass() ? "PASS" : "FAIL", g.title.c_str());
    for (const auto& s : g.subs)
        std::printf("       %s %s\n", s.info ? "[--]" : (s.ok ? "[ok]" : "[!!]"), s.text.c_str());
    std::fflush(stdout);
}

double hermite_moment(int d) {
    if (d % 2 == 1) return 0.0;
    double m = std::sqrt(std::numbers::pi);
    for (int i = d - 1; i >= 1; i -= 2) m *= 0.5 * i;
    return m;
}

struct Regime {
    std::string tag;
    ProblemParams params;
    SolveResult sol;
    StrategyProfile profile;
    CostReport report;
    bool solved = false;
    bool evaluated = false;
};

constexpr std::int64_t kSamples = 600000;
constexpr std::uint64_t kSeed = 20140501;

void criterion_1(Gate& g) {
    const auto t0 = Clock::now();
    const QuadratureRule rule = hermite_rule(7);
    double worst_rel = 0.0, worst_odd = 0.0;
    for (int d = 0; d <= 13; ++d) {
        const double q = integrate([d](double x) { return std::pow(x, d); }, rule);
        if (d % 2 == 0) {
            worst_rel = std::max(worst_rel, std::fabs(q - hermite_moment(d)) / hermite_moment(d));
        } else {
            worst_odd = std::max(worst_odd, std::fabs(q) / hermite_moment(d + 1));
        }
    }
    g.check(worst_rel <= 1e-11,
            "even degrees: max relative error " + num(worst_rel) + " <= 1e-11");
    g.check(worst_odd <= 1e-11, "odd degrees (exact value 0): max |sum| " + num(worst_odd) +
                                    " <= 1e-11, scaled by the next even moment");
    const double dt = seconds_since(t0);
    g.check(dt < 1.0, "runtime " + num(dt) + " s < 1 s");
}

void criterion_2(Gate& g) {
    const auto t0 = Clock::now();
    const ProblemParams params(0.2, 1.0, 5.0);
    const QuadratureRule rule = hermite_rule(7);
    const std::vector<double> rounded = {-19.8, -12.8, -6.15, 0.0, 6.15, 12.8, 19.8};
    const std::vector<double> coarse = {-19.9, -13.2, -6.5, 0.0, 6.5, 13.2, 19.9};

    const double n_rounded = detail::norm_two(system_residual(rounded, params, rule));
    g.check(n_rounded <= 1e-2,
            "||f|| at 3-digit levels {0, +-6.15, +-12.8, +-19.8}: " + fmt17(n_rounded) +
                ", required <= 0.01");

    const detail::NewtonOutcome polished = detail::newton_solve(rounded, params, rule, {});
    g.check(polished.rtwo <= 1e-8, "||f|| after polishing: " + num(polished.rtwo) +
                                       " <= 1e-08 (" + std::to_string(polished.iterations) +
                                       " iterations)");

    const double n_coarse = detail::norm_two(system_residual(coarse, params, rule));
    g.check(n_coarse >= 0.2 && n_coarse <= 1.5,
            "||f|| at coarser levels {0, +-6.5, +-13.2, +-19.9}: " + num(n_coarse) +
                " in [0.2, 1.5]");

    const double dt = seconds_since(t0);
    g.check(dt < 1.0, "runtime " + num(dt) + " s < 1 s");
}

void criterion_3(Gate& g, Regime& r) {
    const auto t0 = Clock::now();
    const QuadratureRule rule = hermite_rule(7);
    r.sol = solve_levels(r.params, rule);
    r.solved = r.sol.converged;
    g.check(r.sol.converged, "converged from start '" + r.sol.start_tag + "' in " +
                                 std::to_string(r.sol.iterations) +
                                 " iterations, residual_inf " + num(r.sol.residual_inf));

    const std::vector<double> target = {-19.8, -12.8, -6.15, 0.0, 6.15, 12.8, 19.8};
    double worst = std::numeric_limits<double>::infinity();
    if (r.sol.levels.levels.size() == target.size()) {
        worst = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i)
            worst = std::max(worst, std::fabs(r.sol.levels.levels[i] - target[i]));
    }
    g.check(worst <= 0.1, "levels componentwise within 0.1 of {0, +-6.15, +-12.8, +-19.8} "
                          "(max deviation " +
                              num(worst) + ")");

    const double dt = seconds_since(t0);
    g.check(dt < 30.0, "runtime " + num(dt) + " s < 30 s");
}

void criterion_4(Gate& g, Regime& r) {
    const auto t0 = Clock::now();
    const QuadratureRule rule = hermite_rule(7);

    const CostReport sign_rep = monte_carlo_cost(witsenhausen_sign(r.params), r.params, kSamples,
                                                 kSeed);
    g.check(std::fabs(sign_rep.total - 0.40351) <= 0.004,
            "two-point quantizer total " + num(sign_rep.total) + " within 0.40351 +- 0.004");

    const AffineLaw law = affine_optimal(r.params);
    const double closed = detail::affine_closed_cost(law.nu, r.params.k, r.params.sigma_x);
    g.check(std::fabs(closed - 0.958693278839234) <= 1e-9,
            "best-affine closed-form total " + fmt17(closed) +
                ", required 0.958693278839234 +- 1e-9");

    const CostReport aff_rep = monte_carlo_cost(affine_profile(law, r.params), r.params, kSamples,
                                                kSeed);
    g.check(std::fabs(aff_rep.total - closed) <= 3.0 * aff_rep.se_total,
            "best-affine MC total " + num(aff_rep.total) + " within 3*SE (" +
                num(3.0 * aff_rep.se_total) + ") of the closed form");

    if (r.solved) {
        r.profile = make_pbp_profile(r.sol.levels, r.params, rule);
        r.report = monte_carlo_cost(r.profile, r.params, kSamples, kSeed);
        r.evaluated = true;
        g.check(std::fabs(r.report.total - 0.1713) <= 0.006,
                "stationary-profile total " + num(r.report.total) + " within 0.1713 +- 0.006");
        g.check(std::fabs(r.report.stage1 - 0.120) <= 0.006,
                "stage1 " + num(r.report.stage1) + " within 0.120 +- 0.006");
        g.check(std::fabs(r.report.stage2 - 0.051) <= 0.006,
                "stage2 " + num(r.report.stage2) + " within 0.051 +- 0.006");
    } else {
        g.check(false, "no solved levels available from the previous criterion");
    }

    const double dt = seconds_since(t0);
    g.check(dt < 120.0, "runtime " + num(dt) + " s < 2 min");
}

void criterion_5(Gate& g, Regime& r) {
    const QuadratureRule rule = hermite_rule(7);

    const AffineLaw law = affine_optimal(r.params);
    const double closed = detail::affine_closed_cost(law.nu, r.params.k, r.params.sigma_x);
    g.check(std::fabs(closed - 0.418500414352474) <= 1e-9,
            "best-affine closed-form total " + fmt17(closed) +
                ", required 0.418500414352474 +- 1e-9");

    r.sol = solve_levels(r.params, rule);
    r.solved = r.sol.converged;
    g.check(r.sol.converged, "converged from start '" + r.sol.start_tag + "', residual_inf " +
                                 num(r.sol.residual_inf));

    const std::vector<double> x0 = collocation_points(r.params, rule);
    double worst = 0.0;
    for (std::size_t l = 0; l < x0.size(); ++l)
        worst = std::max(worst, std::fabs(r.sol.levels.levels[l] - law.nu * x0[l]));
    g.check(worst <= 0.02, "levels within 0.02 of the affine ray through the collocation "
                           "points (max deviation " +
                               num(worst) + ")");

    r.profile = make_pbp_profile(r.sol.levels, r.params, rule);
    r.report = monte_carlo_cost(r.profile, r.params, kSamples, kSeed);
    r.evaluated = true;
    const CostReport aff_rep = monte_carlo_cost(affine_profile(law, r.params), r.params, kSamples,
                                                kSeed);
    const double paired = std::fabs(r.report.total - aff_rep.total);
    g.check(paired <= 5e-4, "stationary-profile MC total " + num(r.report.total) +
                                " within 5e-4 of the best-affine total under the same draws "
                                "(paired difference " +
                                num(paired) + ")");
    g.note("difference against the closed form itself: " +
           num(std::fabs(r.report.total - closed)) + " (MC noise " + num(r.report.se_total) +
           " per run)");

    g.check(std::fabs(r.report.stage1 - 0.1011) <= 3.0 * r.report.se_stage1,
            "stage1 " + num(r.report.stage1) + " within 3*SE (" +
                num(3.0 * r.report.se_stage1) + ") of 0.1011");
    g.check(std::fabs(r.report.stage2 - 0.3174) <= 3.0 * r.report.se_stage2,
            "stage2 " + num(r.report.stage2) + " within 3*SE (" +
                num(3.0 * r.report.se_stage2) + ") of 0.3174");
}

void criterion_6(Gate& g, Regime& r) {
    const QuadratureRule rule = hermite_rule(7);
    r.sol = solve_levels(r.params, rule);
    r.solved = r.sol.converged;
    g.check(r.sol.converged, "converged from start '" + r.sol.start_tag + "', residual_inf " +
                                 num(r.sol.residual_inf));

    std::vector<double> mags;
    for (double l : r.sol.levels.levels) mags.push_back(std::fabs(l));
    std::sort(mags.begin(), mags.end());
    const double scale = mags.empty() ? 1.0 : std::max(1.0, mags.back());
    int distinct = 0;
    double last = -1.0;
    for (double m : mags) {
        if (distinct == 0 || m - last > 1e-6 * scale) ++distinct;
        last = m;
    }
    g.check(distinct >= 4, "staircase has " + std::to_string(distinct) +
                               " distinct nonnegative plateau magnitudes (need >= 4)");

    r.profile = make_pbp_profile(r.sol.levels, r.params, rule);
    r.report = monte_carlo_cost(r.profile, r.params, kSamples, kSeed);
    r.evaluated = true;
    g.check(r.report.total < 0.41,
            "total " + num(r.report.total) + " < 0.41 (beats the two-point quantizer)");
    g.check(std::fabs(r.report.total - 0.1137) <= 0.2 * 0.1137,
            "total within 20% of 0.1137");
    g.check(bound_check(r.report, r.params), "total beats the min(1, k^2 sigma_x^2) = 1 bound");

    bool finite = std::isfinite(r.report.total) && std::isfinite(r.report.se_total) &&
                  std::isfinite(r.report.stage1) && std::isfinite(r.report.stage2);
    for (double l : r.sol.levels.levels) finite = finite && std::isfinite(l);
    for (double v : r.profile.curve_g1bar) finite = finite && std::isfinite(v);
    for (double y : {-4008.0, -1.0, 0.0, 2.5, 4008.0})
        finite = finite && std::isfinite(r.profile.gamma2(y));
    g.check(finite, "no overflow or underflow at sigma_x = 1000: levels, curve, decode map, "
                    "and cost report are all finite");
}

void criterion_7(Gate& g, Regime& r) {
    const QuadratureRule rule = hermite_rule(7);
    r.sol = solve_levels(r.params, rule);
    r.solved = r.sol.converged;
    g.check(r.sol.converged, "converged from start '" + r.sol.start_tag + "', residual_inf " +
                                 num(r.sol.residual_inf));

    r.profile = make_pbp_profile(r.sol.levels, r.params, rule);
    r.report = monte_carlo_cost(r.profile, r.params, kSamples, kSeed);
    r.evaluated = true;
    g.check(r.report.total < 0.003233, "stationary-profile total " + num(r.report.total) +
                                           " < 0.003233 (the two-point quantizer cost)");

    const AffineLaw law = affine_optimal(r.params);
    const double closed = detail::affine_closed_cost(law.nu, r.params.k, r.params.sigma_x);
    g.check(std::fabs(closed - 0.007986277332674) <= 1e-9,
            "best-affine closed-form total " + fmt17(closed) +
                ", required 0.007986277332674 +- 1e-9");

    const BansalBasarLaw bb{5.0, 0.01006};
    const CostReport on_control = monte_carlo_cost(
        bansal_basar_profile(bb, r.params, rule, false), r.params, kSamples, kSeed);
    const CostReport on_state = monte_carlo_cost(
        bansal_basar_profile(bb, r.params, rule, true), r.params, kSamples, kSeed);
    g.check(std::isfinite(on_control.total) && std::isfinite(on_state.total),
            "signal-plus-linear profile records finite cost under both decode conditionings (" +
                num(on_control.total) + " on the control, " + num(on_state.total) +
                " on the state)");
}

void criterion_8(Gate& g, const std::vector<const Regime*>& regimes) {
    for (const Regime* r : regimes) {
        if (!r->solved || !r->evaluated) {
            g.check(false, r->tag + ": no solved profile available");
            continue;
        }
        const StrategyProfile& p = r->profile;
        double scale = 1.0;
        for (double v : p.curve_g1bar) scale = std::max(scale, std::fabs(v));

        double worst_odd = 0.0;
        const double span = 4.0 * r->params.sigma_x;
        for (int i = 0; i <= 1000; ++i) {
            const double y = span * i / 1000.0;
            worst_odd = std::max(worst_odd, std::fabs(p.g1bar(y) + p.g1bar(-y)));
        }
        g.check(worst_odd <= 1e-6 * scale, r->tag + ": odd symmetry, max |g(x)+g(-x)| = " +
                                               num(worst_odd) + " <= " + num(1e-6 * scale));

        double worst_drop = 0.0;
        for (std::size_t i = 1; i < p.curve_g1bar.size(); ++i)
            worst_drop = std::max(worst_drop, p.curve_g1bar[i - 1] - p.curve_g1bar[i]);
        g.check(worst_drop <= 1e-8,
                r->tag + ": nondecreasing, largest drop " + num(worst_drop) + " <= 1e-08");

        const auto [lo_it, hi_it] =
            std::minmax_element(r->sol.levels.levels.begin(), r->sol.levels.levels.end());
        const double lo = *lo_it, hi = *hi_it;
        const double tol = 1e-9 * scale;
        const double yspan = 8.0 * r->params.sigma + std::max(std::fabs(lo), std::fabs(hi));
        bool inside = true;
        double worst_g2 = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double y = -yspan + 2.0 * yspan * i / 1000.0;
            const double v = p.gamma2(y);
            inside = inside && v >= lo - tol && v <= hi + tol;
            worst_g2 = std::max(worst_g2, std::max(lo - v, v - hi));
        }
        g.check(inside, r->tag + ": decode map stays inside the level range [" + num(lo) + ", " +
                            num(hi) + "] (worst excursion " + num(worst_g2) + ")");

        g.check(bound_check(r->report, r->params),
                r->tag + ": total " + num(r->report.total) + " < min(1, k^2 sigma_x^2) = " +
                    num(std::min(1.0, r->params.k * r->params.k * r->params.sigma_x *
                                          r->params.sigma_x)));
    }
}

void criterion_9(Gate& g, const Regime& r) {
    if (!r.evaluated) {
        g.check(false, "no evaluated profile available from the k=0.2 regime");
        return;
    }
    const CostReport again = monte_carlo_cost(r.profile, r.params, kSamples, kSeed);
    const bool identical = again.total == r.report.total && again.stage1 == r.report.stage1 &&
                           again.stage2 == r.report.stage2 &&
                           again.se_total == r.report.se_total;
    g.check(identical, "same seed: stage1/stage2/total and standard errors are bit-identical");

    const CostReport moved = monte_carlo_cost(r.profile, r.params, kSamples, kSeed + 1);
    const double diff = std::fabs(moved.total - r.report.total);
    const double bound = 3.0 * std::hypot(moved.se_total, r.report.se_total);
    g.check(diff > 0.0 && diff < bound, "changed seed: total moves by " + num(diff) +
                                            ", nonzero and below 3*SE of the difference (" +
                                            num(bound) + ")");
}

} // namespace

int main() {
    std::vector<Gate> gates;
    Regime r4{"k=0.2, sigma=1, sigma_x=5", ProblemParams(0.2, 1.0, 5.0), {}, {}, {}, false, false};
    Regime r5{"k=1, sigma=1, sigma_x=1", ProblemParams(1.0, 1.0, 1.0), {}, {}, {}, false, false};
    Regime r6{"k=0.001, sigma=1, sigma_x=1000",
              ProblemParams(0.001, 1.0, 1000.0), {}, {}, {}, false, false};
    Regime r7{"k=0.01, sigma=1, sigma_x=sqrt(80)",
              ProblemParams(0.01, 1.0, std::sqrt(80.0)), {}, {}, {}, false, false};

    const auto run = [&gates](const std::string& title, auto&& body) {
        Gate g;
        g.title = title;
        try {
            body(g);
        } catch (const std::exception& e) {
            g.check(false, std::string("unexpected exception: ") + e.what());
        }
        print_gate(g);
        gates.push_back(std::move(g));
    };

    run("criterion 1: quadrature exactness, 7-point rule, monomial degrees 0..13",
        [&](Gate& g) { criterion_1(g); });
    run("criterion 2: residual norms at reference levels (k=0.2, sigma=1, sigma_x=5)",
        [&](Gate& g) { criterion_2(g); });
    run("criterion 3: level recovery at k=0.2, sigma=1, sigma_x=5",
        [&](Gate& g) { criterion_3(g, r4); });
    run("criterion 4: costs at k=0.2, sigma=1, sigma_x=5 (600000 samples)",
        [&](Gate& g) { criterion_4(g, r4); });
    run("criterion 5: near-affine regime k=1, sigma=1, sigma_x=1",
        [&](Gate& g) { criterion_5(g, r5); });
    run("criterion 6: weak-control regime k=0.001, sigma=1, sigma_x=1000",
        [&](Gate& g) { criterion_6(g, r6); });
    run("criterion 7: cheap-control regime k=0.01, sigma=1, sigma_x=sqrt(80)",
        [&](Gate& g) { criterion_7(g, r7); });
    run("criterion 8: structural properties of every solved profile",
        [&](Gate& g) { criterion_8(g, {&r4, &r5, &r6, &r7}); });
    run("criterion 9: determinism of the cost estimate (k=0.2, sigma=1, sigma_x=5)",
        [&](Gate& g) { criterion_9(g, r4); });

    int failed = 0;
    for (const Gate& g : gates)
        if (!g.pass()) ++failed;
    std::printf("%d of %zu criteria passed\n", static_cast<int>(gates.size()) - failed,
                gates.size());
    return failed;
}
