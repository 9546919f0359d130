#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ledgerlens/balance.hpp"
#include "ledgerlens/market.hpp"
#include "ledgerlens/stability.hpp"
#include "ledgerlens/txgraph.hpp"

namespace ledgerlens {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index is visited exactly once;
/// callers write results into pre-sized slots so output order never depends on scheduling.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);
unsigned default_jobs();

/// Per-day rankings and holdings aggregates from one sequential balance pass.
struct DailyRankings {
    std::size_t depth = 0;                   // ranking depth kept per day
    std::size_t focus_size = 0;
    std::vector<Ranking> rankings;           // rankings[d] holds the top `depth`
    std::vector<Amount> supply;              // minted supply at end of day d
    std::vector<Amount> fees;                // cumulative fees at end of day d
    std::vector<std::size_t> funded;         // funded address count
    std::vector<HoldingsSummary> holdings;   // keyed on the day's top `focus_size`

    std::size_t days() const noexcept { return rankings.size(); }
};

DailyRankings compute_daily_rankings(const Ledger& ledger, std::size_t depth, std::size_t focus_size = 100);

struct ProportionRow {
    std::int32_t day;
    std::vector<double> values;
};

/// proportion(top-n) for each requested n, one row per day with positive supply.
std::vector<ProportionRow> proportion_table(const DailyRankings& daily, const std::vector<std::size_t>& ns);
/// proportion(x + step) - proportion(x), x = 0, step, ..., max - step.
std::vector<ProportionRow> proportion_diff_table(const DailyRankings& daily, std::size_t step, std::size_t max);

struct DStaticPoint {
    std::int32_t day;
    double value;
};
std::vector<DStaticPoint> d_static_series(const DailyRankings& daily, std::size_t n, int scale = 2,
                                          unsigned jobs = 1);

struct DispersionOptions {
    std::size_t focus_size = 100;
    PageRankOptions pagerank;
};

/// One row per day whose focus graph has edges. Focus = previous day's top members.
struct DispersionRow {
    std::int32_t day;
    std::size_t nodes;
    std::size_t edges;
    std::optional<double> degree;
    std::optional<double> pagerank;
};

struct NodeMetricRow {
    std::int32_t day;
    AddrId addr;
    double degree;
    double pagerank;
};

std::vector<DispersionRow> dispersion_series(const Ledger& ledger, const DailyRankings& daily,
                                             const DispersionOptions& opts = {}, unsigned jobs = 1,
                                             std::vector<NodeMetricRow>* node_dump = nullptr);

/// HHI per day under each requested scheme, sharing one cumulative graph pass.
std::vector<HHISeries> hhi_all(const Ledger& ledger, const DailyRankings& daily,
                               const std::vector<ClusterScheme>& schemes, const ClusterOptions& opts = {});

}  // namespace ledgerlens
