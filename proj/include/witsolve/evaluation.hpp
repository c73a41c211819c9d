#ifndef WITSOLVE_EVALUATION_HPP
#define WITSOLVE_EVALUATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace witsolve {

struct CostReport {
    double stage1 = 0.0;
    double stage2 = 0.0;
    double total = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    double se_stage1 = 0.0;
    double se_stage2 = 0.0;
    double se_total = 0.0;
    std::string family;
    ProblemParams params{1.0, 1.0, 1.0};
};

constexpr std::int64_t kDefaultSamples = 600000;
constexpr std::uint64_t kDefaultSeed = 20140501;

namespace detail {

inline int thread_count() {
    if (const char* env = std::getenv("WITSOLVE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Accumulators: sum s1, sum s2, sum s1^2, sum s2^2, sum (s1+s2)^2.
using ChunkSums = std::array<double, 5>;

constexpr std::int64_t kChunkSamples = 4096;

// Combines per-chunk sums by a fixed-shape binary tree so the grand totals
// are independent of how chunks were distributed over threads.
inline ChunkSums pairwise_reduce(std::vector<ChunkSums> v) {
    if (v.empty()) return ChunkSums{0.0, 0.0, 0.0, 0.0, 0.0};
    std::size_t n = v.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i)
            for (std::size_t c = 0; c < v[i].size(); ++c)
                v[i][c] = v[2 * i][c] + v[2 * i + 1][c];
        if (n % 2 == 1) v[half] = v[n - 1];
        n = half + n % 2;
    }
    return v[0];
}

} // namespace detail

// Seeded two-stage cost estimate. Sample i draws x0 from stream 0 and the
// observation noise from stream 1 of a counter-based generator, so the result
// is bit-identical for a given (profile, params, n_samples, seed) regardless
// of thread count.
inline CostReport monte_carlo_cost(const StrategyProfile& profile, const ProblemParams& params,
                                   std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("monte_carlo_cost: n_samples must be >= 1");
    if (profile.curve_x.empty() || profile.curve_x.size() != profile.curve_g1bar.size())
        throw std::invalid_argument("monte_carlo_cost: profile curve is empty or ragged");
    if (!profile.gamma2) throw std::invalid_argument("monte_carlo_cost: profile has no second stage");

    const std::int64_t n_chunks = (n_samples + detail::kChunkSamples - 1) / detail::kChunkSamples;
    std::vector<detail::ChunkSums> sums(static_cast<std::size_t>(n_chunks),
                                        detail::ChunkSums{0.0, 0.0, 0.0, 0.0, 0.0});
    std::vector<std::string> chunk_error(static_cast<std::size_t>(n_chunks));

    const double k2 = params.k * params.k;
    auto run_chunk = [&](std::int64_t chunk) {
        const std::int64_t begin = chunk * detail::kChunkSamples;
        const std::int64_t end = std::min(n_samples, begin + detail::kChunkSamples);
        detail::ChunkSums s{0.0, 0.0, 0.0, 0.0, 0.0};
        for (std::int64_t i = begin; i < end; ++i) {
            const std::uint64_t idx = static_cast<std::uint64_t>(i);
            const double x0 = normal_draw(seed, 0, idx, params.sigma_x);
            const double v = normal_draw(seed, 1, idx, params.sigma);
            const double g = profile.g1bar(x0);
            const double y1 = g + v;
            const double g2 = profile.gamma2(y1);
            if (!std::isfinite(g) || !std::isfinite(g2)) {
                std::ostringstream os;
                os << "monte_carlo_cost: non-finite strategy value at sample " << i
                   << " (x0 = " << x0 << ", y1 = " << y1 << ")";
                chunk_error[static_cast<std::size_t>(chunk)] = os.str();
                return;
            }
            const double u1 = g - x0;
            const double s1 = k2 * u1 * u1;
            const double d2 = g - g2;
            const double s2 = d2 * d2;
            s[0] += s1;
            s[1] += s2;
            s[2] += s1 * s1;
            s[3] += s2 * s2;
            s[4] += (s1 + s2) * (s1 + s2);
        }
        sums[static_cast<std::size_t>(chunk)] = s;
    };

    const int workers = std::min<std::int64_t>(detail::thread_count(), n_chunks);
    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::int64_t c = w; c < n_chunks; c += workers) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }
    for (const std::string& msg : chunk_error)
        if (!msg.empty()) throw evaluation_error(msg);

    const detail::ChunkSums s = detail::pairwise_reduce(std::move(sums));
    const double n = static_cast<double>(n_samples);
    CostReport r;
    r.stage1 = s[0] / n;
    r.stage2 = s[1] / n;
    r.total = r.stage1 + r.stage2;
    r.n_samples = n_samples;
    r.seed = seed;
    auto se = [&](double sumsq, double mean) {
        const double var = std::max(0.0, sumsq / n - mean * mean);
        return std::sqrt(var / n);
    };
    r.se_stage1 = se(s[2], r.stage1);
    r.se_stage2 = se(s[3], r.stage2);
    r.se_total = se(s[4], r.total);
    r.family = profile.provenance;
    r.params = params;
    return r;
}

// True iff the estimated total beats min(1, k^2 sigma_x^2) strictly.
inline bool bound_check(const CostReport& report, const ProblemParams& params) {
    return report.total < std::min(1.0, params.k * params.k * params.sigma_x * params.sigma_x);
}

struct ComparisonConstant {
    std::string tag;    // parameter-set tag, e.g. "k0.2-sx5"
    std::string label;
    double stage1 = std::numeric_limits<double>::quiet_NaN();
    double stage2 = std::numeric_limits<double>::quiet_NaN();
    double total = 0.0;
};

struct ComparisonConstants {
    std::vector<ComparisonConstant> entries;

    static ComparisonConstants defaults() {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        ComparisonConstants c;
        c.entries = {
            {"k0.01-sx-root80", "bansal-basar-reported", nan, nan, 0.3309},
            {"k0.2-sx5", "neural-reported", nan, nan, 0.1735},
            {"k0.2-sx5", "local-search-reported", 0.131884081844, 0.035429123524, 0.167313205368},
            {"k0.2-sx5", "pbp-reported-star", nan, nan, 0.166926978333592},
            {"k0.2-sx5", "pbp-reported-star-star", nan, nan, 0.171268523376388},
        };
        return c;
    }
};

struct ComparisonRow {
    std::string label;
    double stage1 = std::numeric_limits<double>::quiet_NaN();
    double stage2 = std::numeric_limits<double>::quiet_NaN();
    double total = 0.0;
    bool computed = false;
    std::uint64_t seed = 0;
    double se_total = std::numeric_limits<double>::quiet_NaN();
};

// Matches a parameter set to the tag used by the comparison constants.
inline std::string params_tag(const ProblemParams& p) {
    auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); };
    if (near(p.sigma, 1.0)) {
        if (near(p.k, 0.001) && near(p.sigma_x, 1000.0)) return "k0.001-sx1000";
        if (near(p.k, 1.0) && near(p.sigma_x, 1.0)) return "k1-sx1";
        if (near(p.k, 0.01) && near(p.sigma_x, std::sqrt(80.0))) return "k0.01-sx-root80";
        if (near(p.k, 0.2) && near(p.sigma_x, 5.0)) return "k0.2-sx5";
    }
    std::ostringstream os;
    os << "k" << p.k << "-sx" << p.sigma_x;
    if (!near(p.sigma, 1.0)) os << "-s" << p.sigma;
    return os.str();
}

// Merges measured reports with literature rows for the same parameter set,
// sorted by total cost. Reports with differing parameters are rejected.
inline std::vector<ComparisonRow> compare(const std::vector<CostReport>& reports,
                                          const ComparisonConstants& constants) {
    if (reports.empty()) throw std::invalid_argument("compare: no reports given");
    const ProblemParams& p0 = reports.front().params;
    for (const CostReport& r : reports)
        if (r.params.k != p0.k || r.params.sigma != p0.sigma || r.params.sigma_x != p0.sigma_x)
            throw std::invalid_argument("compare: reports mix parameter sets");

    std::vector<ComparisonRow> rows;
    for (const CostReport& r : reports) {
        ComparisonRow row;
        row.label = r.family.empty() ? "measured" : r.family;
        row.stage1 = r.stage1;
        row.stage2 = r.stage2;
        row.total = r.total;
        row.computed = true;
        row.seed = r.seed;
        row.se_total = r.se_total;
        rows.push_back(row);
    }
    const std::string tag = params_tag(p0);
    for (const ComparisonConstant& c : constants.entries) {
        if (c.tag != tag) continue;
        ComparisonRow row;
        row.label = c.label;
        row.stage1 = c.stage1;
        row.stage2 = c.stage2;
        row.total = c.total;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) { return a.total < b.total; });
    return rows;
}

} // namespace witsolve

#endif
