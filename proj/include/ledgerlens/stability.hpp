#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "ledgerlens/balance.hpp"

namespace ledgerlens {

/// How addresses present in only one of the two lists are handled.
enum class SpearmanMode {
    intersection,  // correlate shared members only, with within-list ranks
    penalized,     // union of members; a member missing from a list gets rank size + 1
};

enum class StabilityMetric { spearman, retention };

SpearmanMode parse_spearman_mode(std::string_view s);
StabilityMetric parse_stability_metric(std::string_view s);
std::string_view to_string(StabilityMetric m);

/// 1-based ranks by descending balance; tied balances share the average of their positions.
std::vector<double> average_ranks(const Ranking& ranking);

/// Pearson correlation of average ranks. Empty optional when fewer than two members are
/// compared or one side has no rank variance while the other does.
std::optional<double> spearman(const Ranking& a, const Ranking& b, SpearmanMode mode = SpearmanMode::intersection);

/// |members(a) ∩ members(b)| / n, where n is the larger list length capped at the requested size.
double retention(const Ranking& a, const Ranking& b, std::size_t n);

struct StabilitySeries {
    StabilityMetric metric = StabilityMetric::spearman;
    std::size_t top_n = 0;
    std::size_t interval = 1;
    /// day -> value; an empty optional marks an undefined Spearman coefficient.
    std::map<std::int32_t, std::optional<double>> values;

    std::vector<double> defined_values() const;
};

/// `rankings[d]` is the ranking on day d, holding at least the top n. Days with empty
/// rankings are treated as having no ranking.
StabilitySeries stability_series(const std::vector<Ranking>& rankings, std::size_t n, std::size_t interval,
                                 StabilityMetric metric, SpearmanMode mode = SpearmanMode::intersection);

/// Quartiles use linear interpolation between closest ranks: the p-quantile of sorted
/// x[0..m) sits at position p * (m - 1). Standard deviation is the population form.
/// Whiskers extend to the most extreme data inside 1.5 * IQR of the box.
struct DistributionSummary {
    std::size_t count = 0;
    double mean = 0;
    double sd = 0;
    double median = 0;
    double q1 = 0;
    double q3 = 0;
    double iqr = 0;
    double min = 0;
    double max = 0;
    double whisker_low = 0;
    double whisker_high = 0;
    std::size_t outliers = 0;
};

double quantile_linear(const std::vector<double>& sorted, double p);
/// Throws std::invalid_argument on an empty input.
DistributionSummary summarize(std::vector<double> values);
DistributionSummary summarize(const StabilitySeries& series);

}  // namespace ledgerlens
