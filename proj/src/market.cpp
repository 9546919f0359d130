#include "ledgerlens/market.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace ledgerlens {

namespace {
using u128 = unsigned __int128;

u128 square(Amount v) { return static_cast<u128>(v) * static_cast<u128>(v); }
}  // namespace

double hhi_from_squares(u128 sum_squares, Amount total) {
    if (total <= 0) throw std::invalid_argument("HHI needs a positive total supply");
    // 10000 * sum / C^2 split into an exact integer part and a remainder fraction.
    const u128 c2 = square(total);
    const u128 scaled = sum_squares * 10000u;
    const u128 whole = scaled / c2;
    const u128 rem = scaled % c2;
    return static_cast<double>(whole) + static_cast<double>(static_cast<long double>(rem) / static_cast<long double>(c2));
}

double hhi(std::span<const Amount> holdings, Amount total) {
    u128 s = 0;
    for (Amount h : holdings) {
        if (h < 0) throw std::invalid_argument("HHI holdings must be non-negative");
        s += square(h);
    }
    return hhi_from_squares(s, total);
}

MarketClass classify(double v) {
    if (v < 1500.0) return MarketClass::competitive;
    if (v < 2500.0) return MarketClass::moderately_concentrated;
    return MarketClass::highly_concentrated;
}

std::string_view to_string(MarketClass c) {
    switch (c) {
        case MarketClass::competitive: return "competitive";
        case MarketClass::moderately_concentrated: return "moderately_concentrated";
        case MarketClass::highly_concentrated: return "highly_concentrated";
    }
    return "?";
}

ClusterScheme parse_scheme(std::string_view s) {
    if (s == "a1" || s == "A1") return ClusterScheme::a1;
    if (s == "a2" || s == "A2") return ClusterScheme::a2;
    if (s == "a3" || s == "A3") return ClusterScheme::a3;
    throw std::invalid_argument(fmt::format("unknown clustering scheme '{}'", s));
}

std::string_view to_string(ClusterScheme s) {
    switch (s) {
        case ClusterScheme::a1: return "a1";
        case ClusterScheme::a2: return "a2";
        case ClusterScheme::a3: return "a3";
    }
    return "?";
}

std::string EntityClustering::entity_of(AddrId addr, const AddressTable& addrs) const {
    if (addr == kCoinbase && has_coinbase_entity) return "V_c";
    for (std::size_t k = 0; k < firms.size(); ++k)
        if (std::find(firms[k].begin(), firms[k].end(), addr) != firms[k].end()) return fmt::format("firm:{}", k);
    if (has_rest_entity && std::find(focus.begin(), focus.end(), addr) == focus.end()) return "V_o";
    return std::string(addrs.name(addr));
}

void CumulativeGraph::bump(AddrId a, AddrId b) {
    ++adj_[a][b];
    ++adj_[b][a];
}

void CumulativeGraph::add_transaction(const Transaction& tx) {
    for (const auto& e : expand_edges(tx)) {
        if (e.from == e.to) continue;
        if (!tracked(e.from) && !tracked(e.to)) continue;
        bump(e.from, e.to);
    }
}

void CumulativeGraph::add_day(const Ledger& ledger, std::size_t day) {
    for (const auto& tx : ledger.day_transactions(day)) add_transaction(tx);
}

const std::unordered_map<AddrId, std::uint64_t>& CumulativeGraph::neighbours(AddrId a) const {
    static const std::unordered_map<AddrId, std::uint64_t> none;
    auto it = adj_.find(a);
    return it == adj_.end() ? none : it->second;
}

EntityClustering cluster(const Ranking& focus_ranking, const CumulativeGraph& graph, ClusterScheme scheme,
                         const ClusterOptions& opts) {
    EntityClustering c;
    c.day = focus_ranking.day;
    c.scheme = scheme;
    for (std::size_t i = 0; i < std::min(opts.focus_size, focus_ranking.size()); ++i)
        c.focus.push_back(focus_ranking.entries[i].addr);
    if (scheme == ClusterScheme::a1) return c;

    const auto nf = static_cast<std::uint32_t>(c.focus.size());
    std::unordered_map<AddrId, std::uint32_t> index;
    for (std::uint32_t i = 0; i < nf; ++i) index.emplace(c.focus[i], i);
    const std::uint32_t vc = nf, vo = nf + 1;
    const bool contracted = scheme == ClusterScheme::a3;
    WeightedGraph g(contracted ? nf + 2 : nf);

    for (std::uint32_t i = 0; i < nf; ++i) {
        // Sort neighbours so floating-point sums do not depend on hash order.
        std::vector<std::pair<AddrId, std::uint64_t>> nbrs(graph.neighbours(c.focus[i]).begin(),
                                                            graph.neighbours(c.focus[i]).end());
        std::sort(nbrs.begin(), nbrs.end());
        double to_vc = 0, to_vo = 0;
        for (const auto& [v, count] : nbrs) {
            if (auto it = index.find(v); it != index.end()) {
                if (it->second > i) g.add_edge(i, it->second, static_cast<double>(count));
            } else if (contracted) {
                (v == kCoinbase ? to_vc : to_vo) += static_cast<double>(count);
            }
        }
        if (contracted) {
            g.add_edge(i, vc, to_vc);
            g.add_edge(i, vo, to_vo);
        }
    }

    auto labels = detect_communities(g, opts.algorithm, opts.seed);
    std::size_t ncomm = labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
    std::vector<std::vector<AddrId>> groups(ncomm);
    std::vector<bool> dissolved(ncomm, false);
    if (contracted) {
        // Addresses grouped only through coinbase or the outside world are not coordinated.
        dissolved[labels[vc]] = true;
        dissolved[labels[vo]] = true;
        c.has_coinbase_entity = true;
        c.has_rest_entity = true;
    }
    for (std::uint32_t i = 0; i < nf; ++i) groups[labels[i]].push_back(c.focus[i]);
    for (std::size_t k = 0; k < ncomm; ++k)
        if (!dissolved[k] && groups[k].size() >= 2) c.firms.push_back(std::move(groups[k]));
    return c;
}

EntityClustering cluster(const Ledger& ledger, std::size_t day, ClusterScheme scheme, const ClusterOptions& opts) {
    if (day >= ledger.day_count()) throw std::out_of_range(fmt::format("no day {} in ledger", day));
    BalanceState state(ledger);
    state.apply_through(day);
    auto focus = top_n(state, opts.focus_size, ledger.addresses());
    std::vector<bool> tracked(ledger.addresses().size(), false);
    for (const auto& e : focus.entries) tracked[e.addr] = true;
    CumulativeGraph graph(std::move(tracked));
    for (std::size_t d = 0; d <= day; ++d) graph.add_day(ledger, d);
    return cluster(focus, graph, scheme, opts);
}

HoldingsSummary summarize_holdings(std::span<const Amount> balances, Amount supply, const std::vector<AddrId>& focus) {
    HoldingsSummary h;
    h.supply = supply;
    for (Amount b : balances) {
        h.held += b;
        h.sum_squares += square(b);
    }
    for (AddrId a : focus) h.focus_balances[a] = a < balances.size() ? balances[a] : 0;
    return h;
}

double clustering_hhi(const EntityClustering& c, const HoldingsSummary& h) {
    auto bal = [&](AddrId a) {
        auto it = h.focus_balances.find(a);
        if (it == h.focus_balances.end()) throw std::logic_error("holdings summary lacks a focus member");
        return it->second;
    };
    u128 s = 0;
    if (c.scheme == ClusterScheme::a3) {
        Amount focus_total = 0;
        for (AddrId a : c.focus) {
            focus_total += bal(a);
            s += square(bal(a));
        }
        for (const auto& firm : c.firms) {
            Amount f = 0;
            for (AddrId a : firm) {
                f += bal(a);
                s -= square(bal(a));
            }
            s += square(f);
        }
        s += square(h.held - focus_total);
        return hhi_from_squares(s, h.supply);
    }
    s = h.sum_squares;
    for (const auto& firm : c.firms) {
        Amount f = 0;
        for (AddrId a : firm) {
            f += bal(a);
            s -= square(bal(a));
        }
        s += square(f);
    }
    return hhi_from_squares(s, h.supply);
}

std::vector<Amount> entity_holdings(const EntityClustering& c, std::span<const Amount> balances) {
    auto bal = [&](AddrId a) { return a < balances.size() ? balances[a] : Amount{0}; };
    std::vector<bool> in_firm(balances.size(), false), in_focus(balances.size(), false);
    std::vector<Amount> out;
    for (const auto& firm : c.firms) {
        Amount f = 0;
        for (AddrId a : firm) {
            f += bal(a);
            if (a < in_firm.size()) in_firm[a] = true;
        }
        out.push_back(f);
    }
    for (AddrId a : c.focus)
        if (a < in_focus.size()) in_focus[a] = true;
    if (c.has_rest_entity) {
        Amount rest = 0;
        for (AddrId a = 0; a < balances.size(); ++a)
            if (!in_focus[a]) rest += balances[a];
        out.push_back(rest);
    }
    if (c.has_coinbase_entity) out.push_back(0);
    for (AddrId a = 0; a < balances.size(); ++a) {
        if (balances[a] <= 0 || in_firm[a]) continue;
        if (c.has_rest_entity && !in_focus[a]) continue;
        out.push_back(balances[a]);
    }
    return out;
}

HHISeries hhi_series(const Ledger& ledger, ClusterScheme scheme, const ClusterOptions& opts) {
    HHISeries series{scheme, {}};
    std::vector<Ranking> rankings;
    std::vector<HoldingsSummary> summaries;
    std::vector<bool> tracked(ledger.addresses().size(), false);
    for_each_day(ledger, [&](const BalanceState& s) {
        auto r = top_n(s, opts.focus_size, ledger.addresses());
        std::vector<AddrId> members;
        for (const auto& e : r.entries) {
            members.push_back(e.addr);
            tracked[e.addr] = true;
        }
        summaries.push_back(summarize_holdings(s.balances(), s.total_supply(), members));
        rankings.push_back(std::move(r));
    });
    CumulativeGraph graph(scheme == ClusterScheme::a1 ? std::vector<bool>{} : std::move(tracked));
    for (std::size_t d = 0; d < ledger.day_count(); ++d) {
        if (scheme != ClusterScheme::a1) graph.add_day(ledger, d);
        if (summaries[d].supply <= 0) continue;
        auto c = cluster(rankings[d], graph, scheme, opts);
        series.points.push_back({static_cast<std::int32_t>(d), clustering_hhi(c, summaries[d])});
    }
    return series;
}

std::vector<double> d_hhi(std::span<const double> series) {
    if (series.empty()) return {};
    auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    std::vector<double> out;
    out.reserve(series.size());
    const double span = *hi - *lo;
    for (double v : series) out.push_back(span == 0 ? 1.0 : 1.0 - (v - *lo) / span);
    return out;
}

std::vector<double> d_hhi(const HHISeries& series) {
    std::vector<double> v;
    v.reserve(series.points.size());
    for (const auto& p : series.points) v.push_back(p.value);
    return d_hhi(v);
}

}  // namespace ledgerlens
