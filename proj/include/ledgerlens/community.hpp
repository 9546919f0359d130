#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace ledgerlens {

/// Undirected weighted graph over nodes 0..n-1. Parallel edges are summed by the algorithms.
struct WeightedGraph {
    explicit WeightedGraph(std::size_t n = 0) : adj(n) {}
    std::size_t size() const noexcept { return adj.size(); }
    void add_edge(std::uint32_t u, std::uint32_t v, double w);

    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
};

enum class CommunityAlgorithm { label_propagation, louvain };
CommunityAlgorithm parse_community_algorithm(std::string_view s);
std::string_view to_string(CommunityAlgorithm a);

/// Asynchronous label propagation. Nodes update in index order (a seed-keyed permutation when
/// seed != 0); a node keeps its label when it is among the heaviest, otherwise it takes the
/// smallest heaviest label. Returns labels renumbered 0..k-1 by first appearance.
std::vector<std::uint32_t> label_propagation(const WeightedGraph& g, std::uint64_t seed = 0, int max_iter = 100);

/// Multi-level modularity optimisation with a fixed node visiting order.
std::vector<std::uint32_t> louvain(const WeightedGraph& g, int max_levels = 32);

std::vector<std::uint32_t> detect_communities(const WeightedGraph& g, CommunityAlgorithm algo,
                                              std::uint64_t seed = 0);

double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& labels);

}  // namespace ledgerlens
