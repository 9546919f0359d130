#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ledgerlens/balance.hpp"
#include "ledgerlens/community.hpp"
#include "ledgerlens/ledger.hpp"

namespace ledgerlens {

/// Herfindahl-Hirschman index: sum of 10000 * (h_i / C)^2. Exact for integer holdings whose
/// result is an integer. Throws std::invalid_argument when C <= 0 or a holding is negative.
double hhi(std::span<const Amount> holdings, Amount total);
/// Same, from a precomputed sum of squared holdings.
double hhi_from_squares(unsigned __int128 sum_squares, Amount total);

enum class MarketClass { competitive, moderately_concentrated, highly_concentrated };
/// < 1500 competitive, [1500, 2500) moderate, >= 2500 highly concentrated.
MarketClass classify(double hhi_value);
std::string_view to_string(MarketClass c);

enum class ClusterScheme { a1, a2, a3 };
ClusterScheme parse_scheme(std::string_view s);
std::string_view to_string(ClusterScheme s);

struct ClusterOptions {
    std::size_t focus_size = 100;
    CommunityAlgorithm algorithm = CommunityAlgorithm::label_propagation;
    std::uint64_t seed = 0;
};

/// Partition of the funded addresses into firms. Only multi-member or special groupings are
/// listed; every other funded address is its own firm (A1, A2) or part of V_o (A3).
struct EntityClustering {
    std::int32_t day = 0;
    ClusterScheme scheme = ClusterScheme::a1;
    std::vector<AddrId> focus;                 // top-N on `day`, rank order
    std::vector<std::vector<AddrId>> firms;    // explicit firms over focus members
    bool has_coinbase_entity = false;          // V_c, holds nothing
    bool has_rest_entity = false;              // V_o, every non-focus address

    /// Entity label of an address: "firm:<k>", "V_c", "V_o" or the address itself.
    std::string entity_of(AddrId addr, const AddressTable& addrs) const;
};

/// Undirected cumulative transaction counts between address pairs, recorded only for pairs
/// touching `tracked` (all pairs when tracked is empty).
class CumulativeGraph {
public:
    explicit CumulativeGraph(std::vector<bool> tracked = {}) : tracked_(std::move(tracked)) {}
    void add_transaction(const Transaction& tx);
    void add_day(const Ledger& ledger, std::size_t day);
    const std::unordered_map<AddrId, std::uint64_t>& neighbours(AddrId a) const;

private:
    bool tracked(AddrId a) const { return tracked_.empty() || (a < tracked_.size() && tracked_[a]); }
    void bump(AddrId a, AddrId b);
    std::vector<bool> tracked_;
    std::unordered_map<AddrId, std::unordered_map<AddrId, std::uint64_t>> adj_;
};

/// Clusters given the day's focus ranking and the cumulative graph through that day.
EntityClustering cluster(const Ranking& focus, const CumulativeGraph& graph, ClusterScheme scheme,
                         const ClusterOptions& opts = {});
/// Convenience form that replays the ledger through `day`.
EntityClustering cluster(const Ledger& ledger, std::size_t day, ClusterScheme scheme, const ClusterOptions& opts = {});

/// Day-level aggregates needed to price any clustering without the full balance vector.
struct HoldingsSummary {
    Amount supply = 0;
    Amount held = 0;
    unsigned __int128 sum_squares = 0;  // over every funded address
    std::unordered_map<AddrId, Amount> focus_balances;
};
HoldingsSummary summarize_holdings(std::span<const Amount> balances, Amount supply, const std::vector<AddrId>& focus);

/// HHI of a clustering against total minted supply.
double clustering_hhi(const EntityClustering& c, const HoldingsSummary& h);
/// Per-entity holdings, listed firms first, then V_o / V_c, then other funded singletons.
std::vector<Amount> entity_holdings(const EntityClustering& c, std::span<const Amount> balances);

struct HHIPoint {
    std::int32_t day;
    double value;
};

struct HHISeries {
    ClusterScheme scheme = ClusterScheme::a1;
    std::vector<HHIPoint> points;
};

HHISeries hhi_series(const Ledger& ledger, ClusterScheme scheme, const ClusterOptions& opts = {});

/// 1 - (v - min) / (max - min) over the whole series; a constant series maps to all ones.
std::vector<double> d_hhi(std::span<const double> series);
std::vector<double> d_hhi(const HHISeries& series);

}  // namespace ledgerlens
