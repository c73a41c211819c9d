#ifndef WITSOLVE_IO_HPP
#define WITSOLVE_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "baselines.hpp"
#include "evaluation.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "solver.hpp"

namespace witsolve {

// 17 significant digits round-trip any double exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_rule_csv(std::ostream& os, const QuadratureRule& rule) {
    os << "index,node,weight\n";
    for (int i = 0; i < rule.order; ++i)
        os << (i + 1) << ',' << fmt17(rule.nodes[i]) << ',' << fmt17(rule.weights[i]) << '\n';
}

// Full curve export: post-control map, the control itself, and the
// second-stage response to the noiseless observation.
inline void write_curve_csv(std::ostream& os, const StrategyProfile& profile) {
    os << "x0,gamma1bar,gamma1,gamma2_at_g1bar\n";
    for (std::size_t i = 0; i < profile.curve_x.size(); ++i) {
        const double x = profile.curve_x[i];
        const double g = profile.curve_g1bar[i];
        os << fmt17(x) << ',' << fmt17(g) << ',' << fmt17(g - x) << ','
           << fmt17(profile.gamma2 ? profile.gamma2(g) : std::numeric_limits<double>::quiet_NaN())
           << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not a number: '" + s + "'");
    }
}

inline double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    if (ys[lo] == ys[hi]) return ys[lo];
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

} // namespace detail

// Reads any CSV with x0 and gamma1bar columns (extra columns ignored),
// so curve exports re-ingest directly.
inline std::pair<std::vector<double>, std::vector<double>> read_profile_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("profile CSV: empty input");
    const std::vector<std::string> header = detail::split_csv_line(line);
    int xcol = -1, gcol = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "x0") xcol = static_cast<int>(i);
        if (header[i] == "gamma1bar") gcol = static_cast<int>(i);
    }
    if (xcol < 0 || gcol < 0)
        throw std::invalid_argument("profile CSV: header must contain x0 and gamma1bar columns");
    std::vector<double> xs, gs;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() <= static_cast<std::size_t>(std::max(xcol, gcol)))
            throw std::invalid_argument("profile CSV: short row at line " + std::to_string(lineno));
        xs.push_back(detail::parse_double(cells[xcol], "profile CSV x0"));
        gs.push_back(detail::parse_double(cells[gcol], "profile CSV gamma1bar"));
    }
    if (xs.size() < 2) throw std::invalid_argument("profile CSV: need at least two rows");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("profile CSV: x0 column must be strictly increasing");
    return {std::move(xs), std::move(gs)};
}

// Sidecar descriptor for the second stage attached to a profile CSV.
// Families: mixture-from-levels | affine | tanh | tabulated.
inline nlohmann::json gamma2_sidecar(const StrategyProfile& profile, const ProblemParams& params,
                                     const SignalingLevels* levels, const AffineLaw* law) {
    nlohmann::json j;
    j["provenance"] = profile.provenance;
    if (profile.provenance == "pbp" && levels) {
        j["family"] = "mixture-from-levels";
        j["levels"] = levels->levels;
        j["order"] = levels->rule_order;
        j["sigma"] = params.sigma;
    } else if (profile.provenance == "affine" && law) {
        j["family"] = "affine";
        j["mu"] = law->mu;
    } else if (profile.provenance == "sign") {
        j["family"] = "tanh";
        j["scale"] = params.sigma_x;
    } else {
        const double span = 8.0 * params.sigma +
            std::max(std::fabs(profile.curve_g1bar.front()), std::fabs(profile.curve_g1bar.back()));
        const int m = 4001;
        std::vector<double> ys(m), g2(m);
        for (int i = 0; i < m; ++i) {
            ys[i] = -span + 2.0 * span * (static_cast<double>(i) / (m - 1));
            g2[i] = profile.gamma2(ys[i]);
        }
        j["family"] = "tabulated";
        j["y1"] = ys;
        j["gamma2"] = g2;
    }
    return j;
}

inline std::function<double(double)> gamma2_from_sidecar(const nlohmann::json& j,
                                                         const ProblemParams& params) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "mixture-from-levels") {
        SignalingLevels levels;
        levels.levels = j.at("levels").get<std::vector<double>>();
        levels.rule_order = j.at("order").get<int>();
        const double sigma = j.value("sigma", params.sigma);
        const QuadratureRule rule = hermite_rule(levels.rule_order);
        ProblemParams p(params.k, sigma, params.sigma_x);
        return make_mixture_gamma2(levels, rule, p);
    }
    if (family == "affine") {
        const double mu = j.at("mu").get<double>();
        return [mu](double y) { return mu * y; };
    }
    if (family == "tanh") {
        const double scale = j.at("scale").get<double>();
        return [scale](double y) { return scale * std::tanh(scale * y); };
    }
    if (family == "tabulated") {
        auto ys = j.at("y1").get<std::vector<double>>();
        auto g2 = j.at("gamma2").get<std::vector<double>>();
        if (ys.size() != g2.size() || ys.size() < 2)
            throw std::invalid_argument("gamma2 sidecar: tabulated arrays must match, length >= 2");
        return [ys = std::move(ys), g2 = std::move(g2)](double y) {
            return detail::interp_clamped(ys, g2, y);
        };
    }
    throw std::invalid_argument("gamma2 sidecar: unknown family '" + family + "'");
}

inline nlohmann::json solve_result_json(const SolveResult& r, const ProblemParams& params) {
    nlohmann::json j;
    j["k"] = params.k;
    j["sigma"] = params.sigma;
    j["sigma_x"] = params.sigma_x;
    j["order"] = r.levels.rule_order;
    j["levels"] = r.levels.levels;
    j["residual_inf"] = r.residual_inf;
    j["residual_two"] = r.residual_two;
    j["iterations"] = r.iterations;
    j["start"] = r.start_tag;
    j["converged"] = r.converged;
    return j;
}

inline nlohmann::json cost_report_json(const CostReport& r) {
    nlohmann::json j;
    j["family"] = r.family;
    j["stage1"] = r.stage1;
    j["stage2"] = r.stage2;
    j["total"] = r.total;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["se_stage1"] = r.se_stage1;
    j["se_stage2"] = r.se_stage2;
    j["se_total"] = r.se_total;
    j["k"] = r.params.k;
    j["sigma"] = r.params.sigma;
    j["sigma_x"] = r.params.sigma_x;
    return j;
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "label,stage1,stage2,total,computed,seed,se_total\n";
    for (const ComparisonRow& r : rows) {
        os << r.label << ',' << (std::isnan(r.stage1) ? "" : fmt17(r.stage1)) << ','
           << (std::isnan(r.stage2) ? "" : fmt17(r.stage2)) << ',' << fmt17(r.total) << ','
           << (r.computed ? "1" : "0") << ',' << (r.computed ? std::to_string(r.seed) : "") << ','
           << (r.computed && !std::isnan(r.se_total) ? fmt17(r.se_total) : "") << '\n';
    }
}

inline void write_comparison_text(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-28s %14s %14s %16s %10s\n", "label", "stage1", "stage2",
                  "total", "se_total");
    os << buf;
    for (const ComparisonRow& r : rows) {
        auto cell = [](double v) {
            if (std::isnan(v)) return std::string("-");
            char b[32];
            std::snprintf(b, sizeof(b), "%.9g", v);
            return std::string(b);
        };
        std::snprintf(buf, sizeof(buf), "%-28s %14s %14s %16s %10s\n", r.label.c_str(),
                      cell(r.stage1).c_str(), cell(r.stage2).c_str(), cell(r.total).c_str(),
                      r.computed ? cell(r.se_total).c_str() : "-");
        os << buf;
    }
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

} // namespace witsolve

#endif
