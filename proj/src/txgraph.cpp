#include "ledgerlens/txgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace ledgerlens {

std::int64_t TransactionGraph::node_of(AddrId addr) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), addr);
    if (it == nodes_.end() || *it != addr) return -1;
    return it - nodes_.begin();
}

namespace {

// Collapses a raw (from, to, value) list into sorted unique edges over ascending node ids.
void assemble(std::vector<std::pair<AddrId, AddrId>> pairs, const std::vector<double>& values,
              std::vector<AddrId>& nodes, std::vector<GraphEdge>& edges) {
    nodes.clear();
    edges.clear();
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pairs[a] != pairs[b] ? pairs[a] < pairs[b] : a < b;
    });
    for (const auto& [f, t] : pairs) {
        nodes.push_back(f);
        nodes.push_back(t);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    auto local = [&](AddrId a) {
        return static_cast<std::uint32_t>(std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
    };
    for (std::size_t k : order) {
        auto [f, t] = pairs[k];
        double v = values.empty() ? 0.0 : values[k];
        auto lf = local(f), lt = local(t);
        if (!edges.empty() && edges.back().from == lf && edges.back().to == lt) {
            edges.back().count += 1;
            edges.back().value += v;
        } else {
            edges.push_back({lf, lt, 1, v});
        }
    }
}

}  // namespace

TransactionGraph TransactionGraph::from_edges(std::vector<std::pair<AddrId, AddrId>> pairs,
                                              std::vector<double> values) {
    std::vector<double> kept_values;
    std::vector<std::pair<AddrId, AddrId>> kept;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].first == pairs[i].second) continue;
        kept.push_back(pairs[i]);
        if (!values.empty()) kept_values.push_back(values[i]);
    }
    TransactionGraph g;
    assemble(std::move(kept), kept_values, g.nodes_, g.edges_);
    return g;
}

void GraphBuilder::add_transaction(const Transaction& tx) {
    const Amount in_total = tx.input_total();
    for (const auto& e : expand_edges(tx)) {
        if (e.from == e.to) continue;
        if (!focus_.contains(e.from) && !focus_.contains(e.to)) continue;
        double out_value = 0, in_share = 1;
        for (const auto& io : tx.outputs)
            if (io.addr == e.to) out_value = static_cast<double>(io.value);
        if (!tx.is_coinbase())
            for (const auto& io : tx.inputs)
                if (io.addr == e.from) in_share = static_cast<double>(io.value) / static_cast<double>(in_total);
        raw_.push_back({e.from, e.to, out_value * in_share});
    }
}

TransactionGraph GraphBuilder::build(std::int32_t first_day, std::int32_t last_day) const {
    std::vector<std::pair<AddrId, AddrId>> pairs;
    std::vector<double> values;
    pairs.reserve(raw_.size());
    values.reserve(raw_.size());
    for (const auto& r : raw_) {
        pairs.emplace_back(r.from, r.to);
        values.push_back(r.value);
    }
    TransactionGraph g;
    assemble(std::move(pairs), values, g.nodes_, g.edges_);
    g.first_day = first_day;
    g.last_day = last_day;
    g.focus = focus_;
    return g;
}

TransactionGraph build_day_graph(const Ledger& ledger, std::size_t day, const FocusSet& focus) {
    GraphBuilder b(focus);
    if (day < ledger.day_count())
        for (const auto& tx : ledger.day_transactions(day)) b.add_transaction(tx);
    auto d = static_cast<std::int32_t>(day);
    return b.build(d, d);
}

std::string_view to_string(MetricKind k) { return k == MetricKind::degree ? "degree" : "pagerank"; }

MetricKind parse_metric_kind(std::string_view s) {
    if (s == "degree") return MetricKind::degree;
    if (s == "pagerank") return MetricKind::pagerank;
    throw std::invalid_argument(fmt::format("unknown graph metric '{}'", s));
}

MetricVector degree_centrality(const TransactionGraph& g) {
    if (g.empty()) throw std::invalid_argument("degree centrality of an empty graph");
    MetricVector m{MetricKind::degree, std::vector<double>(g.node_count(), 0.0)};
    for (const auto& e : g.edges()) {
        m.values[e.from] += static_cast<double>(e.count);
        m.values[e.to] += static_cast<double>(e.count);
    }
    return m;
}

MetricVector pagerank(const TransactionGraph& g, const PageRankOptions& opts) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("pagerank of an empty graph");
    const double d = opts.damping;
    const double inv_n = 1.0 / static_cast<double>(n);
    auto weight = [&](const GraphEdge& e) {
        return opts.value_weighted ? e.value : static_cast<double>(e.count);
    };
    std::vector<double> out_weight(n, 0.0);
    for (const auto& e : g.edges()) out_weight[e.from] += weight(e);

    std::vector<double> x(n, inv_n), next(n);
    double residual = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        double dangling = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (out_weight[i] <= 0) dangling += x[i];
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        std::fill(next.begin(), next.end(), base);
        for (const auto& e : g.edges())
            if (out_weight[e.from] > 0) next[e.to] += d * x[e.from] * weight(e) / out_weight[e.from];
        double sum = std::accumulate(next.begin(), next.end(), 0.0);
        residual = 0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= sum;
            residual += std::abs(next[i] - x[i]);
        }
        x.swap(next);
        if (residual < opts.tol) return MetricVector{MetricKind::pagerank, std::move(x)};
    }
    throw ConvergenceError(
        fmt::format("pagerank did not converge in {} iterations (residual {:.3e})", opts.max_iter, residual),
        residual);
}

double dispersion(const std::vector<double>& values) {
    if (values.size() < 2) throw std::invalid_argument("dispersion needs at least two values");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double avg = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (*hi == *lo) return 1.0;
    return (*hi - *lo) / (avg - *lo);
}

double dispersion(const MetricVector& m) { return dispersion(m.values); }

std::vector<double> focus_values(const TransactionGraph& g, const MetricVector& m, const FocusSet& focus) {
    std::vector<AddrId> members(focus.begin(), focus.end());
    std::sort(members.begin(), members.end());
    std::vector<double> out;
    out.reserve(members.size());
    for (AddrId a : members) {
        auto node = g.node_of(a);
        out.push_back(node < 0 ? 0.0 : m.values[static_cast<std::size_t>(node)]);
    }
    return out;
}

}  // namespace ledgerlens
