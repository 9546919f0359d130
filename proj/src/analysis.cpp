#include "ledgerlens/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ledgerlens/lorenz.hpp"

namespace ledgerlens {

unsigned default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(n, 1u << 16))));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    workers.clear();
    if (error) std::rethrow_exception(error);
}

DailyRankings compute_daily_rankings(const Ledger& ledger, std::size_t depth, std::size_t focus_size) {
    DailyRankings out;
    out.depth = std::max(depth, focus_size);
    out.focus_size = focus_size;
    const auto days = ledger.day_count();
    out.rankings.reserve(days);
    for_each_day(ledger, [&](const BalanceState& s) {
        auto r = top_n(s, out.depth, ledger.addresses());
        std::vector<AddrId> focus;
        for (std::size_t i = 0; i < std::min(focus_size, r.size()); ++i) focus.push_back(r.entries[i].addr);
        out.holdings.push_back(summarize_holdings(s.balances(), s.total_supply(), focus));
        out.funded.push_back(static_cast<std::size_t>(
            std::count_if(s.balances().begin(), s.balances().end(), [](Amount b) { return b > 0; })));
        out.supply.push_back(s.total_supply());
        out.fees.push_back(s.cumulative_fees());
        out.rankings.push_back(std::move(r));
    });
    return out;
}

std::vector<ProportionRow> proportion_table(const DailyRankings& daily, const std::vector<std::size_t>& ns) {
    std::vector<ProportionRow> rows;
    for (std::size_t d = 0; d < daily.days(); ++d) {
        if (daily.supply[d] <= 0) continue;
        ProportionRow row{static_cast<std::int32_t>(d), {}};
        for (auto n : ns) row.values.push_back(proportion(daily.rankings[d], n, daily.supply[d]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ProportionRow> proportion_diff_table(const DailyRankings& daily, std::size_t step, std::size_t max) {
    std::vector<ProportionRow> rows;
    for (std::size_t d = 0; d < daily.days(); ++d) {
        if (daily.supply[d] <= 0) continue;
        rows.push_back({static_cast<std::int32_t>(d), proportion_diffs(daily.rankings[d], daily.supply[d], step, max)});
    }
    return rows;
}

std::vector<DStaticPoint> d_static_series(const DailyRankings& daily, std::size_t n, int scale, unsigned jobs) {
    std::vector<std::optional<double>> slot(daily.days());
    parallel_for(daily.days(), jobs, [&](std::size_t d) {
        const auto& r = daily.rankings[d];
        if (r.empty()) return;
        slot[d] = d_static(cumulative_curve(r.truncated(n), n), scale);
    });
    std::vector<DStaticPoint> out;
    for (std::size_t d = 0; d < slot.size(); ++d)
        if (slot[d]) out.push_back({static_cast<std::int32_t>(d), *slot[d]});
    return out;
}

std::vector<DispersionRow> dispersion_series(const Ledger& ledger, const DailyRankings& daily,
                                             const DispersionOptions& opts, unsigned jobs,
                                             std::vector<NodeMetricRow>* node_dump) {
    const std::size_t days = std::min(ledger.day_count(), daily.days());
    std::vector<DispersionRow> rows(days > 0 ? days - 1 : 0);
    std::vector<std::vector<NodeMetricRow>> dumps(rows.size());
    parallel_for(rows.size(), jobs, [&](std::size_t k) {
        const std::size_t day = k + 1;
        FocusSet focus;
        const auto& prev = daily.rankings[day - 1];
        for (std::size_t i = 0; i < std::min(opts.focus_size, prev.size()); ++i) focus.insert(prev.entries[i].addr);
        auto g = build_day_graph(ledger, day, focus);
        DispersionRow row{static_cast<std::int32_t>(day), g.node_count(), g.edge_count(), std::nullopt, std::nullopt};
        if (!g.empty() && focus.size() >= 2) {
            auto deg = degree_centrality(g);
            auto pr = pagerank(g, opts.pagerank);
            row.degree = dispersion(focus_values(g, deg, focus));
            row.pagerank = dispersion(focus_values(g, pr, focus));
            if (node_dump)
                for (std::uint32_t i = 0; i < g.node_count(); ++i)
                    dumps[k].push_back({row.day, g.address(i), deg.values[i], pr.values[i]});
        }
        rows[k] = row;
    });
    if (node_dump)
        for (auto& d : dumps) node_dump->insert(node_dump->end(), d.begin(), d.end());
    return rows;
}

std::vector<HHISeries> hhi_all(const Ledger& ledger, const DailyRankings& daily,
                               const std::vector<ClusterScheme>& schemes, const ClusterOptions& opts) {
    std::vector<HHISeries> out;
    for (auto s : schemes) out.push_back({s, {}});
    const bool need_graph = std::any_of(schemes.begin(), schemes.end(), [](auto s) { return s != ClusterScheme::a1; });
    std::vector<bool> tracked(ledger.addresses().size(), false);
    for (const auto& r : daily.rankings)
        for (std::size_t i = 0; i < std::min(opts.focus_size, r.size()); ++i) tracked[r.entries[i].addr] = true;
    CumulativeGraph graph(std::move(tracked));
    const std::size_t days = std::min(ledger.day_count(), daily.days());
    for (std::size_t d = 0; d < days; ++d) {
        if (need_graph) graph.add_day(ledger, d);
        if (daily.supply[d] <= 0) continue;
        for (auto& series : out) {
            auto c = cluster(daily.rankings[d], graph, series.scheme, opts);
            series.points.push_back({static_cast<std::int32_t>(d), clustering_hhi(c, daily.holdings[d])});
        }
    }
    return out;
}

}  // namespace ledgerlens
