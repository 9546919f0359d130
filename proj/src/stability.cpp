#include "ledgerlens/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace ledgerlens {

SpearmanMode parse_spearman_mode(std::string_view s) {
    if (s == "intersection") return SpearmanMode::intersection;
    if (s == "penalized") return SpearmanMode::penalized;
    throw std::invalid_argument(fmt::format("unknown spearman mode '{}'", s));
}

StabilityMetric parse_stability_metric(std::string_view s) {
    if (s == "spearman") return StabilityMetric::spearman;
    if (s == "retention") return StabilityMetric::retention;
    throw std::invalid_argument(fmt::format("unknown stability metric '{}'", s));
}

std::string_view to_string(StabilityMetric m) {
    return m == StabilityMetric::spearman ? "spearman" : "retention";
}

std::vector<double> average_ranks(const Ranking& ranking) {
    const auto& e = ranking.entries;
    std::vector<double> ranks(e.size());
    std::size_t i = 0;
    while (i < e.size()) {
        std::size_t j = i;
        while (j + 1 < e.size() && e[j + 1].balance == e[i].balance) ++j;
        // positions i..j (0-based) share rank mean(i+1 .. j+1)
        double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[k] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 && syy == 0) return x == y ? std::optional<double>(1.0) : std::nullopt;
    if (sxx == 0 || syy == 0) return std::nullopt;
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace

std::optional<double> spearman(const Ranking& a, const Ranking& b, SpearmanMode mode) {
    if (a.empty() || b.empty()) return std::nullopt;
    auto ra = average_ranks(a);
    auto rb = average_ranks(b);
    std::unordered_map<AddrId, double> rank_b;
    rank_b.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rank_b.emplace(b.entries[i].addr, rb[i]);

    std::vector<double> x, y;
    if (mode == SpearmanMode::intersection) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (auto it = rank_b.find(a.entries[i].addr); it != rank_b.end()) {
                x.push_back(ra[i]);
                y.push_back(it->second);
            }
    } else {
        const double miss_a = static_cast<double>(a.size()) + 1.0;
        const double miss_b = static_cast<double>(b.size()) + 1.0;
        std::unordered_set<AddrId> in_a;
        for (std::size_t i = 0; i < a.size(); ++i) {
            in_a.insert(a.entries[i].addr);
            auto it = rank_b.find(a.entries[i].addr);
            x.push_back(ra[i]);
            y.push_back(it == rank_b.end() ? miss_b : it->second);
        }
        for (std::size_t i = 0; i < b.size(); ++i)
            if (!in_a.contains(b.entries[i].addr)) {
                x.push_back(miss_a);
                y.push_back(rb[i]);
            }
    }
    return pearson(x, y);
}

double retention(const Ranking& a, const Ranking& b, std::size_t n) {
    if (n == 0) throw std::invalid_argument("retention requires n >= 1");
    std::size_t na = std::min(n, a.size());
    std::size_t nb = std::min(n, b.size());
    std::size_t denom = std::max(na, nb);
    if (denom == 0) return 1.0;
    std::unordered_set<AddrId> members;
    members.reserve(na);
    for (std::size_t i = 0; i < na; ++i) members.insert(a.entries[i].addr);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < nb; ++i) kept += members.contains(b.entries[i].addr);
    return static_cast<double>(kept) / static_cast<double>(denom);
}

std::vector<double> StabilitySeries::defined_values() const {
    std::vector<double> out;
    for (const auto& [day, v] : values)
        if (v) out.push_back(*v);
    return out;
}

StabilitySeries stability_series(const std::vector<Ranking>& rankings, std::size_t n, std::size_t interval,
                                 StabilityMetric metric, SpearmanMode mode) {
    if (interval == 0) throw std::invalid_argument("interval must be >= 1");
    StabilitySeries s{metric, n, interval, {}};
    for (std::size_t d = 0; d + interval < rankings.size(); ++d) {
        const auto& a = rankings[d];
        const auto& b = rankings[d + interval];
        if (a.empty() || b.empty()) continue;
        auto ta = a.truncated(n);
        auto tb = b.truncated(n);
        auto day = static_cast<std::int32_t>(d);
        if (metric == StabilityMetric::spearman)
            s.values[day] = spearman(ta, tb, mode);
        else
            s.values[day] = retention(ta, tb, n);
    }
    return s;
}

double quantile_linear(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DistributionSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize an empty series");
    std::sort(values.begin(), values.end());
    DistributionSummary s;
    s.count = values.size();
    const auto n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / n);
    s.min = values.front();
    s.max = values.back();
    if (s.min == s.max) {
        s.mean = s.min;
        s.sd = 0;
    }
    s.q1 = quantile_linear(values, 0.25);
    s.median = quantile_linear(values, 0.5);
    s.q3 = quantile_linear(values, 0.75);
    s.iqr = s.q3 - s.q1;
    double lo_fence = s.q1 - 1.5 * s.iqr, hi_fence = s.q3 + 1.5 * s.iqr;
    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            ++s.outliers;
            continue;
        }
        s.whisker_low = std::min(s.whisker_low, v);
        s.whisker_high = std::max(s.whisker_high, v);
    }
    return s;
}

DistributionSummary summarize(const StabilitySeries& series) {
    return summarize(series.defined_values());
}

}  // namespace ledgerlens
