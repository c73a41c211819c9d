#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <witsolve/witsolve.hpp>

namespace {

using nlohmann::json;
using namespace witsolve;

json maybe_config(const std::string& path) {
    return path.empty() ? json::object() : load_json_file(path);
}

// Config-file values apply only where the flag was not given on the line.
template <typename T>
void cfg_merge(const json& j, const CLI::App* cmd, const char* flag, T& var) {
    const std::string key = std::string(flag).substr(2);
    if (!j.contains(key) || cmd->count(flag) > 0) return;
    var = j.at(key).get<T>();
}

struct ParamFlags {
    double k = 0.2;
    double sigma = 1.0;
    double sigma_x = 5.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--k", k, "stage-1 cost weight k > 0");
        cmd->add_option("--sigma", sigma, "observation noise std dev");
        cmd->add_option("--sigma-x", sigma_x, "initial state std dev");
    }
    void merge(const json& j, const CLI::App* cmd) {
        cfg_merge(j, cmd, "--k", k);
        cfg_merge(j, cmd, "--sigma", sigma);
        cfg_merge(j, cmd, "--sigma-x", sigma_x);
    }
    ProblemParams build() const { return ProblemParams(k, sigma, sigma_x); }
};

struct SolverFlags {
    double tol = SolverConfig{}.tol_residual;
    int max_iter = SolverConfig{}.max_iterations;
    double damping = SolverConfig{}.damping;
    double jacobian_step = SolverConfig{}.jacobian_step;
    std::vector<std::string> starts = SolverConfig{}.starts;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "residual infinity-norm tolerance");
        cmd->add_option("--max-iter", max_iter, "Newton iteration cap");
        cmd->add_option("--damping", damping, "line-search backtracking factor");
        cmd->add_option("--jacobian-step", jacobian_step, "relative FD step");
        cmd->add_option("--starts", starts, "start tags (identity|sign|affine)")->delimiter(',');
    }
    void merge(const json& j, const CLI::App* cmd) {
        cfg_merge(j, cmd, "--tol", tol);
        cfg_merge(j, cmd, "--max-iter", max_iter);
        cfg_merge(j, cmd, "--damping", damping);
        cfg_merge(j, cmd, "--jacobian-step", jacobian_step);
        cfg_merge(j, cmd, "--starts", starts);
    }
    SolverConfig build() const {
        SolverConfig c;
        c.tol_residual = tol;
        c.max_iterations = max_iter;
        c.damping = damping;
        c.jacobian_step = jacobian_step;
        c.starts = starts;
        return c;
    }
};

struct GridFlags {
    int points = GridSpec{}.points;
    double half_width = GridSpec{}.half_width_sigmas;
    bool no_refine = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--grid-points", points, "curve tabulation points");
        cmd->add_option("--half-width", half_width, "grid half width in sigma_x units");
        cmd->add_flag("--no-refine", no_refine, "skip plateau-jump refinement");
    }
    void merge(const json& j, const CLI::App* cmd) {
        cfg_merge(j, cmd, "--grid-points", points);
        cfg_merge(j, cmd, "--half-width", half_width);
        cfg_merge(j, cmd, "--no-refine", no_refine);
    }
    GridSpec build() const { return GridSpec{points, half_width, !no_refine}; }
};

std::unique_ptr<std::ofstream> open_output(const std::string& path, std::ostream*& os) {
    if (path.empty()) {
        os = &std::cout;
        return nullptr;
    }
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw std::invalid_argument("cannot open output file: " + path);
    os = f.get();
    return f;
}

void write_sidecar(const std::string& csv_path, const json& sidecar) {
    const std::string path = csv_path + ".gamma2.json";
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open sidecar file: " + path);
    f << sidecar.dump(2) << '\n';
}

ProblemParams params_from_tag(const std::string& tag) {
    if (tag == "k0.001-sx1000") return ProblemParams(0.001, 1.0, 1000.0);
    if (tag == "k1-sx1") return ProblemParams(1.0, 1.0, 1.0);
    if (tag == "k0.01-sx-root80") return ProblemParams(0.01, 1.0, std::sqrt(80.0));
    if (tag == "k0.2-sx5") return ProblemParams(0.2, 1.0, 5.0);
    throw std::invalid_argument("unknown --params-set '" + tag +
                                "' (known: k0.001-sx1000, k1-sx1, k0.01-sx-root80, k0.2-sx5)");
}

StrategyProfile load_csv_profile(const std::string& path, const ProblemParams& params) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open profile CSV: " + path);
    auto [xs, gs] = read_profile_csv(f);
    const json sidecar = load_json_file(path + ".gamma2.json");
    StrategyProfile p;
    p.curve_x = std::move(xs);
    p.curve_g1bar = std::move(gs);
    p.gamma2 = gamma2_from_sidecar(sidecar, params);
    p.provenance = sidecar.value("provenance", "csv");
    return p;
}

struct BaselineFlags {
    std::string family = "affine";
    double bb_epsilon = 5.0;
    double bb_lambda = 0.01006;
    std::string bb_conditioning = "control";

    void attach(CLI::App* cmd, bool with_family) {
        if (with_family)
            cmd->add_option("--family", family, "affine | sign | bansal-basar")->required();
        cmd->add_option("--bb-epsilon", bb_epsilon, "Bansal-Basar epsilon");
        cmd->add_option("--bb-lambda", bb_lambda, "Bansal-Basar lambda");
        cmd->add_option("--bb-conditioning", bb_conditioning,
                        "posterior conditions on: control | state")
            ->check(CLI::IsMember({"control", "state"}));
    }
    void merge(const json& j, const CLI::App* cmd) {
        cfg_merge(j, cmd, "--family", family);
        cfg_merge(j, cmd, "--bb-epsilon", bb_epsilon);
        cfg_merge(j, cmd, "--bb-lambda", bb_lambda);
        cfg_merge(j, cmd, "--bb-conditioning", bb_conditioning);
    }
};

StrategyProfile build_baseline(const std::string& family, const ProblemParams& params,
                               const QuadratureRule& rule, const BaselineFlags& bb,
                               const GridSpec& grid, AffineLaw* law_out) {
    if (family == "affine") {
        const AffineLaw law = affine_optimal(params);
        if (law_out) *law_out = law;
        return affine_profile(law, params, grid);
    }
    if (family == "sign") return witsenhausen_sign(params, grid);
    if (family == "bansal-basar")
        return bansal_basar_profile(BansalBasarLaw{bb.bb_epsilon, bb.bb_lambda}, params, rule,
                                    bb.bb_conditioning == "state", grid);
    throw std::invalid_argument("unknown baseline family '" + family + "'");
}

json law_json(const AffineLaw& law) {
    json j;
    j["nu"] = law.nu;
    j["mu"] = law.mu;
    j["t"] = law.t_root;
    j["all_real_roots"] = law.all_real_roots;
    return j;
}

int cmd_rule(int order, const std::string& output) {
    const QuadratureRule rule = hermite_rule(order);
    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    write_rule_csv(*os, rule);
    return 0;
}

int cmd_solve(const ProblemParams& params, int order, const SolverConfig& config,
              const std::string& output) {
    const QuadratureRule rule = hermite_rule(order);
    const SolveResult r = solve_levels(params, rule, config);
    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    *os << solve_result_json(r, params).dump(2) << '\n';
    if (!r.converged) {
        std::cerr << "solve: no start converged (best residual " << r.residual_inf << ")\n";
        return 3;
    }
    return 0;
}

int cmd_curve(const ProblemParams& params, int order, const SolverConfig& config,
              const GridSpec& grid, const std::string& output) {
    const QuadratureRule rule = hermite_rule(order);
    const SolveResult r = solve_levels(params, rule, config);
    if (!r.converged) {
        std::cerr << "curve: no start converged (best residual " << r.residual_inf << ")\n";
        return 3;
    }
    const StrategyProfile profile = make_pbp_profile(r.levels, params, rule, config, grid);
    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    write_curve_csv(*os, profile);
    if (!output.empty())
        write_sidecar(output, gamma2_sidecar(profile, params, &r.levels, nullptr));
    else
        std::cerr << "curve: no --output given, gamma2 sidecar not written\n";
    return 0;
}

struct EvalFlags {
    std::string profile = "pbp";
    std::int64_t samples = kDefaultSamples;
    std::uint64_t seed = kDefaultSeed;
    bool exact_curve = false;
};

StrategyProfile build_eval_profile(const EvalFlags& ev, const ProblemParams& params, int order,
                                   const SolverConfig& config, const GridSpec& grid,
                                   const BaselineFlags& bb) {
    if (ev.profile == "pbp") {
        const QuadratureRule rule = hermite_rule(order);
        const SolveResult r = solve_levels(params, rule, config);
        if (!r.converged)
            throw solve_error("eval: pbp solve did not converge (best residual " +
                              fmt17(r.residual_inf) + ")");
        StrategyProfile p = make_pbp_profile(r.levels, params, rule, config, grid);
        if (ev.exact_curve) {
            auto solver = std::make_shared<detail::ScalarCurveSolver>(r.levels, params, rule, config);
            p.g1bar_exact = [solver](double x0) { return solver->solve_at(x0); };
        }
        return p;
    }
    if (ev.profile == "affine" || ev.profile == "sign" || ev.profile == "bansal-basar")
        return build_baseline(ev.profile, params, hermite_rule(order), bb, grid, nullptr);
    return load_csv_profile(ev.profile, params);
}

int cmd_eval(const EvalFlags& ev, const ProblemParams& params, int order,
             const SolverConfig& config, const GridSpec& grid, const BaselineFlags& bb,
             const std::string& output) {
    const StrategyProfile profile = build_eval_profile(ev, params, order, config, grid, bb);
    const CostReport report = monte_carlo_cost(profile, params, ev.samples, ev.seed);
    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    *os << cost_report_json(report).dump(2) << '\n';
    return 0;
}

int cmd_baseline(const std::string& family, const ProblemParams& params, int order,
                 const BaselineFlags& bb, const GridSpec& grid, const std::string& output) {
    AffineLaw law;
    const StrategyProfile profile =
        build_baseline(family, params, hermite_rule(order), bb, grid, &law);
    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    *os << "x0,gamma1bar\n";
    for (std::size_t i = 0; i < profile.curve_x.size(); ++i)
        *os << fmt17(profile.curve_x[i]) << ',' << fmt17(profile.curve_g1bar[i]) << '\n';
    if (!output.empty()) {
        write_sidecar(output, gamma2_sidecar(profile, params, nullptr, &law));
        if (family == "affine") std::cout << law_json(law).dump(2) << '\n';
    } else if (family == "affine") {
        std::cerr << law_json(law).dump(2) << '\n';
    }
    return 0;
}

int cmd_compare(const std::string& params_set, const ParamFlags& pf, bool params_set_given,
                const std::vector<std::string>& families, int order, const SolverConfig& config,
                const GridSpec& grid, const BaselineFlags& bb, std::int64_t samples,
                std::uint64_t seed, const std::string& output) {
    const ProblemParams params = params_set_given ? params_from_tag(params_set) : pf.build();
    const QuadratureRule rule = hermite_rule(order);
    std::vector<CostReport> reports;
    for (const std::string& family : families) {
        StrategyProfile profile;
        if (family == "pbp") {
            const SolveResult r = solve_levels(params, rule, config);
            if (!r.converged)
                throw solve_error("compare: pbp solve did not converge (best residual " +
                                  fmt17(r.residual_inf) + ")");
            profile = make_pbp_profile(r.levels, params, rule, config, grid);
        } else {
            profile = build_baseline(family, params, rule, bb, grid, nullptr);
        }
        reports.push_back(monte_carlo_cost(profile, params, samples, seed));
    }
    const std::vector<ComparisonRow> rows = compare(reports, ComparisonConstants::defaults());
    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    write_comparison_csv(*os, rows);
    write_comparison_text(std::cerr, rows);
    return 0;
}

struct SweepPoint {
    double k = 0.0, sigma = 0.0, sigma_x = 0.0;
    int order = 7;
};

SweepPoint parse_point(const std::string& s, int default_order) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(cur);
    if (cells.size() != 3 && cells.size() != 4)
        throw std::invalid_argument("sweep --point expects k,sigma,sigma_x[,order]: '" + s + "'");
    SweepPoint p;
    p.k = detail::parse_double(cells[0], "sweep point k");
    p.sigma = detail::parse_double(cells[1], "sweep point sigma");
    p.sigma_x = detail::parse_double(cells[2], "sweep point sigma_x");
    p.order = cells.size() == 4
                  ? static_cast<int>(detail::parse_double(cells[3], "sweep point order"))
                  : default_order;
    return p;
}

int cmd_sweep(const std::vector<std::string>& points, int default_order,
              const SolverConfig& config, const GridSpec& grid, std::int64_t samples,
              std::uint64_t seed, const std::string& output) {
    std::vector<SweepPoint> grid_points;
    for (const std::string& s : points) grid_points.push_back(parse_point(s, default_order));

    std::ostream* os = nullptr;
    auto file = open_output(output, os);
    *os << "k,sigma,sigma_x,order,status,levels,residual_inf,stage1,stage2,total,bound,bound_ok\n";
    for (const SweepPoint& pt : grid_points) {
        std::ostringstream row;
        row << fmt17(pt.k) << ',' << fmt17(pt.sigma) << ',' << fmt17(pt.sigma_x) << ','
            << pt.order << ',';
        std::string status = "ok";
        std::string levels_cell, residual_cell, s1, s2, tot, bound_cell, bound_ok_cell;
        try {
            const ProblemParams params(pt.k, pt.sigma, pt.sigma_x);
            const QuadratureRule rule = hermite_rule(pt.order);
            const SolveResult r = solve_levels(params, rule, config);
            if (!r.converged) {
                status = "solve-error";
            } else {
                std::ostringstream lv;
                for (std::size_t i = 0; i < r.levels.levels.size(); ++i) {
                    if (i) lv << ';';
                    lv << fmt17(r.levels.levels[i]);
                }
                levels_cell = lv.str();
                residual_cell = fmt17(r.residual_inf);
                const StrategyProfile profile = make_pbp_profile(r.levels, params, rule, config, grid);
                const CostReport rep = monte_carlo_cost(profile, params, samples, seed);
                s1 = fmt17(rep.stage1);
                s2 = fmt17(rep.stage2);
                tot = fmt17(rep.total);
                const double bound = std::min(1.0, pt.k * pt.k * pt.sigma_x * pt.sigma_x);
                bound_cell = fmt17(bound);
                bound_ok_cell = bound_check(rep, params) ? "1" : "0";
            }
        } catch (const std::invalid_argument&) {
            status = "validation-error";
        } catch (const std::out_of_range&) {
            status = "validation-error";
        } catch (const solve_error&) {
            status = "solve-error";
        } catch (const evaluation_error&) {
            status = "eval-error";
        }
        row << status << ',' << levels_cell << ',' << residual_cell << ',' << s1 << ',' << s2
            << ',' << tot << ',' << bound_cell << ',' << bound_ok_cell;
        *os << row.str() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized two-stage control solver: person-by-person optimal strategies, "
                 "baselines, and seeded Monte Carlo cost evaluation"};
    app.require_subcommand(1);

    std::string config_path, output;
    int order = 7;

    // rule
    auto* rule_cmd = app.add_subcommand("rule", "print Gauss-Hermite nodes and weights as CSV");
    int rule_order = 7;
    std::string rule_output;
    rule_cmd->add_option("--order", rule_order, "number of quadrature nodes (1..64)");
    rule_cmd->add_option("--output", rule_output, "output path (default stdout)");
    rule_cmd->add_option("--config", config_path, "flat JSON config file");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve the signaling-level system");
    ParamFlags solve_params;
    SolverFlags solve_solver;
    solve_params.attach(solve_cmd);
    solve_solver.attach(solve_cmd);
    solve_cmd->add_option("--order", order, "quadrature order");
    solve_cmd->add_option("--output", output, "output path (default stdout)");
    solve_cmd->add_option("--config", config_path, "flat JSON config file");

    // curve
    auto* curve_cmd = app.add_subcommand("curve", "export the solved strategy curve as CSV");
    ParamFlags curve_params;
    SolverFlags curve_solver;
    GridFlags curve_grid;
    curve_params.attach(curve_cmd);
    curve_solver.attach(curve_cmd);
    curve_grid.attach(curve_cmd);
    curve_cmd->add_option("--order", order, "quadrature order");
    curve_cmd->add_option("--output", output, "output CSV path (sidecar <path>.gamma2.json)");
    curve_cmd->add_option("--config", config_path, "flat JSON config file");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Monte Carlo cost of a profile");
    ParamFlags eval_params;
    SolverFlags eval_solver;
    GridFlags eval_grid;
    BaselineFlags eval_bb;
    EvalFlags ev;
    eval_params.attach(eval_cmd);
    eval_solver.attach(eval_cmd);
    eval_grid.attach(eval_cmd);
    eval_bb.attach(eval_cmd, false);
    eval_cmd->add_option("--profile", ev.profile,
                         "builtin (pbp|affine|sign|bansal-basar) or profile CSV path");
    eval_cmd->add_option("--samples", ev.samples, "Monte Carlo sample count");
    eval_cmd->add_option("--seed", ev.seed, "Monte Carlo seed");
    eval_cmd->add_flag("--exact-curve", ev.exact_curve,
                       "per-sample scalar solves instead of curve interpolation (pbp only)");
    eval_cmd->add_option("--order", order, "quadrature order");
    eval_cmd->add_option("--output", output, "output path (default stdout)");
    eval_cmd->add_option("--config", config_path, "flat JSON config file");

    // baseline
    auto* base_cmd = app.add_subcommand("baseline", "export a baseline strategy profile");
    ParamFlags base_params;
    GridFlags base_grid;
    BaselineFlags base_bb;
    base_params.attach(base_cmd);
    base_grid.attach(base_cmd);
    base_bb.attach(base_cmd, true);
    base_cmd->add_option("--order", order, "quadrature order");
    base_cmd->add_option("--output", output, "output CSV path (sidecar <path>.gamma2.json)");
    base_cmd->add_option("--config", config_path, "flat JSON config file");

    // compare
    auto* comp_cmd = app.add_subcommand("compare", "cost table: measured families vs literature");
    ParamFlags comp_params;
    SolverFlags comp_solver;
    GridFlags comp_grid;
    BaselineFlags comp_bb;
    std::string params_set;
    std::vector<std::string> families = {"pbp", "affine", "sign"};
    std::int64_t comp_samples = kDefaultSamples;
    std::uint64_t comp_seed = kDefaultSeed;
    comp_params.attach(comp_cmd);
    comp_solver.attach(comp_cmd);
    comp_grid.attach(comp_cmd);
    comp_bb.attach(comp_cmd, false);
    comp_cmd->add_option("--params-set", params_set,
                         "named parameter set (k0.001-sx1000|k1-sx1|k0.01-sx-root80|k0.2-sx5)");
    comp_cmd->add_option("--families", families, "profiles to measure")->delimiter(',');
    comp_cmd->add_option("--samples", comp_samples, "Monte Carlo sample count");
    comp_cmd->add_option("--seed", comp_seed, "Monte Carlo seed");
    comp_cmd->add_option("--order", order, "quadrature order");
    comp_cmd->add_option("--output", output, "output path (default stdout)");
    comp_cmd->add_option("--config", config_path, "flat JSON config file");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "solve+eval over a list of parameter points");
    SolverFlags sweep_solver;
    GridFlags sweep_grid;
    std::vector<std::string> sweep_points;
    std::int64_t sweep_samples = kDefaultSamples;
    std::uint64_t sweep_seed = kDefaultSeed;
    sweep_solver.attach(sweep_cmd);
    sweep_grid.attach(sweep_cmd);
    sweep_cmd->add_option("--point", sweep_points, "grid point k,sigma,sigma_x[,order]; repeatable");
    sweep_cmd->add_option("--samples", sweep_samples, "Monte Carlo sample count");
    sweep_cmd->add_option("--seed", sweep_seed, "Monte Carlo seed");
    sweep_cmd->add_option("--order", order, "default quadrature order");
    sweep_cmd->add_option("--output", output, "output CSV path (default stdout)");
    sweep_cmd->add_option("--config", config_path, "flat JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const json cfg = maybe_config(config_path);

        if (app.got_subcommand(rule_cmd)) {
            cfg_merge(cfg, rule_cmd, "--order", rule_order);
            cfg_merge(cfg, rule_cmd, "--output", rule_output);
            return cmd_rule(rule_order, rule_output);
        }
        if (app.got_subcommand(solve_cmd)) {
            solve_params.merge(cfg, solve_cmd);
            solve_solver.merge(cfg, solve_cmd);
            cfg_merge(cfg, solve_cmd, "--order", order);
            cfg_merge(cfg, solve_cmd, "--output", output);
            return cmd_solve(solve_params.build(), order, solve_solver.build(), output);
        }
        if (app.got_subcommand(curve_cmd)) {
            curve_params.merge(cfg, curve_cmd);
            curve_solver.merge(cfg, curve_cmd);
            curve_grid.merge(cfg, curve_cmd);
            cfg_merge(cfg, curve_cmd, "--order", order);
            cfg_merge(cfg, curve_cmd, "--output", output);
            return cmd_curve(curve_params.build(), order, curve_solver.build(), curve_grid.build(),
                             output);
        }
        if (app.got_subcommand(eval_cmd)) {
            eval_params.merge(cfg, eval_cmd);
            eval_solver.merge(cfg, eval_cmd);
            eval_grid.merge(cfg, eval_cmd);
            eval_bb.merge(cfg, eval_cmd);
            cfg_merge(cfg, eval_cmd, "--profile", ev.profile);
            cfg_merge(cfg, eval_cmd, "--samples", ev.samples);
            cfg_merge(cfg, eval_cmd, "--seed", ev.seed);
            cfg_merge(cfg, eval_cmd, "--exact-curve", ev.exact_curve);
            cfg_merge(cfg, eval_cmd, "--order", order);
            cfg_merge(cfg, eval_cmd, "--output", output);
            return cmd_eval(ev, eval_params.build(), order, eval_solver.build(), eval_grid.build(),
                            eval_bb, output);
        }
        if (app.got_subcommand(base_cmd)) {
            base_params.merge(cfg, base_cmd);
            base_grid.merge(cfg, base_cmd);
            base_bb.merge(cfg, base_cmd);
            cfg_merge(cfg, base_cmd, "--order", order);
            cfg_merge(cfg, base_cmd, "--output", output);
            return cmd_baseline(base_bb.family, base_params.build(), order, base_bb,
                                base_grid.build(), output);
        }
        if (app.got_subcommand(comp_cmd)) {
            comp_params.merge(cfg, comp_cmd);
            comp_solver.merge(cfg, comp_cmd);
            comp_grid.merge(cfg, comp_cmd);
            comp_bb.merge(cfg, comp_cmd);
            cfg_merge(cfg, comp_cmd, "--params-set", params_set);
            cfg_merge(cfg, comp_cmd, "--families", families);
            cfg_merge(cfg, comp_cmd, "--samples", comp_samples);
            cfg_merge(cfg, comp_cmd, "--seed", comp_seed);
            cfg_merge(cfg, comp_cmd, "--order", order);
            cfg_merge(cfg, comp_cmd, "--output", output);
            const bool tag_given = !params_set.empty();
            return cmd_compare(params_set, comp_params, tag_given, families, order,
                               comp_solver.build(), comp_grid.build(), comp_bb, comp_samples,
                               comp_seed, output);
        }
        if (app.got_subcommand(sweep_cmd)) {
            sweep_solver.merge(cfg, sweep_cmd);
            sweep_grid.merge(cfg, sweep_cmd);
            cfg_merge(cfg, sweep_cmd, "--point", sweep_points);
            cfg_merge(cfg, sweep_cmd, "--samples", sweep_samples);
            cfg_merge(cfg, sweep_cmd, "--seed", sweep_seed);
            cfg_merge(cfg, sweep_cmd, "--order", order);
            cfg_merge(cfg, sweep_cmd, "--output", output);
            return cmd_sweep(sweep_points, order, sweep_solver.build(), sweep_grid.build(),
                             sweep_samples, sweep_seed, output);
        }
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const solve_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const evaluation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
