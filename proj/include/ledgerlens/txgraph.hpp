#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ledgerlens/ledger.hpp"

namespace ledgerlens {

using FocusSet = std::unordered_set<AddrId>;

struct GraphEdge {
    std::uint32_t from;  // local node index
    std::uint32_t to;
    std::uint64_t count;  // multiplicity
    double value;         // attributed transfer value, base units
    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Directed multigraph over a dense local node set, edges sorted by (from, to).
/// Every edge touches the focus set; self-loops are dropped at build time.
class TransactionGraph {
public:
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    AddrId address(std::uint32_t node) const { return nodes_[node]; }
    const std::vector<AddrId>& nodes() const noexcept { return nodes_; }
    const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
    /// -1 when the address is not a node.
    std::int64_t node_of(AddrId addr) const;

    std::int32_t first_day = 0;
    std::int32_t last_day = 0;
    FocusSet focus;

    /// Builds from an arbitrary edge multiset (node order = ascending AddrId).
    static TransactionGraph from_edges(std::vector<std::pair<AddrId, AddrId>> edges,
                                       std::vector<double> values = {});

private:
    friend class GraphBuilder;
    std::vector<AddrId> nodes_;
    std::vector<GraphEdge> edges_;
};

/// Accumulates expanded edges of transactions touching the focus set.
class GraphBuilder {
public:
    explicit GraphBuilder(FocusSet focus) : focus_(std::move(focus)) {}
    void add_transaction(const Transaction& tx);
    TransactionGraph build(std::int32_t first_day, std::int32_t last_day) const;

private:
    struct Raw {
        AddrId from, to;
        double value;
    };
    FocusSet focus_;
    std::vector<Raw> raw_;
};

/// Graph of `day`'s transactions restricted to edges touching `focus`.
TransactionGraph build_day_graph(const Ledger& ledger, std::size_t day, const FocusSet& focus);

enum class MetricKind { degree, pagerank };
std::string_view to_string(MetricKind k);
MetricKind parse_metric_kind(std::string_view s);

struct MetricVector {
    MetricKind kind = MetricKind::degree;
    std::vector<double> values;  // indexed by local node
};

/// In-degree + out-degree counting multiplicity. Throws std::invalid_argument on an empty graph.
MetricVector degree_centrality(const TransactionGraph& g);

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 200;
    bool value_weighted = false;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Power iteration; dangling mass is spread uniformly. Stops when the L1 change < tol.
MetricVector pagerank(const TransactionGraph& g, const PageRankOptions& opts = {});

/// (H - L) / (AVG - L). A constant vector has dispersion 1. Needs at least two values.
double dispersion(const std::vector<double>& values);
double dispersion(const MetricVector& m);

/// Metric values of the focus members, in ascending address order; members absent from the
/// graph contribute 0.
std::vector<double> focus_values(const TransactionGraph& g, const MetricVector& m, const FocusSet& focus);

}  // namespace ledgerlens
