// Solves the k=0.2, sigma_x=5 benchmark, prints the signaling levels, and
// compares the Monte Carlo cost of the solved strategy against the affine
// and sign baselines.
#include <cstdio>

#include <witsolve/witsolve.hpp>

int main() {
    using namespace witsolve;

    const ProblemParams params(0.2, 1.0, 5.0);
    const QuadratureRule rule = hermite_rule(7);

    const SolveResult solved = solve_levels(params, rule);
    std::printf("converged=%d start=%s iterations=%d residual_inf=%.3e\n", solved.converged,
                solved.start_tag.c_str(), solved.iterations, solved.residual_inf);
    for (double s : solved.levels.levels) std::printf("  level % .6f\n", s);
    if (!solved.converged) return 1;

    const StrategyProfile pbp = make_pbp_profile(solved.levels, params, rule);
    const StrategyProfile affine = affine_profile(affine_optimal(params), params);
    const StrategyProfile sign = witsenhausen_sign(params);

    for (const StrategyProfile* p : {&pbp, &affine, &sign}) {
        const CostReport r = monte_carlo_cost(*p, params, 600000, 20140501);
        std::printf("%-8s stage1=%.6f stage2=%.6f total=%.6f (se %.1e)\n", r.family.c_str(),
                    r.stage1, r.stage2, r.total, r.se_total);
    }
    return 0;
}
