#include "ledgerlens/community.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "ledgerlens/rng.hpp"

namespace ledgerlens {

void WeightedGraph::add_edge(std::uint32_t u, std::uint32_t v, double w) {
    if (u == v || w <= 0) return;
    adj[u].emplace_back(v, w);
    adj[v].emplace_back(u, w);
}

CommunityAlgorithm parse_community_algorithm(std::string_view s) {
    if (s == "lpa" || s == "label_propagation") return CommunityAlgorithm::label_propagation;
    if (s == "louvain" || s == "modularity") return CommunityAlgorithm::louvain;
    throw std::invalid_argument(fmt::format("unknown community algorithm '{}'", s));
}

std::string_view to_string(CommunityAlgorithm a) {
    return a == CommunityAlgorithm::label_propagation ? "lpa" : "louvain";
}

namespace {

std::vector<std::uint32_t> renumber(const std::vector<std::uint32_t>& labels) {
    std::vector<std::uint32_t> map(labels.size(), UINT32_MAX), out(labels.size());
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto& m = map[labels[i]];
        if (m == UINT32_MAX) m = next++;
        out[i] = m;
    }
    return out;
}

// Sums weights by key; clear() resets only the touched keys.
struct WeightAccumulator {
    explicit WeightAccumulator(std::size_t n) : weight(n, 0.0), seen(n, false) {}
    void add(std::uint32_t key, double w) {
        if (!seen[key]) {
            seen[key] = true;
            keys.push_back(key);
        }
        weight[key] += w;
    }
    void clear() {
        for (auto k : keys) {
            weight[k] = 0;
            seen[k] = false;
        }
        keys.clear();
    }
    std::vector<double> weight;
    std::vector<bool> seen;
    std::vector<std::uint32_t> keys;
};

}  // namespace

std::vector<std::uint32_t> label_propagation(const WeightedGraph& g, std::uint64_t seed, int max_iter) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> labels(n);
    std::iota(labels.begin(), labels.end(), 0u);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    if (seed != 0) {
        CounterRng rng(seed);
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    }
    WeightAccumulator acc(n);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (auto u : order) {
            if (g.adj[u].empty()) continue;
            for (const auto& [v, w] : g.adj[u]) acc.add(labels[v], w);
            double best = -1;
            for (auto k : acc.keys) best = std::max(best, acc.weight[k]);
            std::uint32_t choice = UINT32_MAX;
            bool keep = acc.seen[labels[u]] && acc.weight[labels[u]] == best;
            if (keep) {
                choice = labels[u];
            } else {
                for (auto k : acc.keys)
                    if (acc.weight[k] == best) choice = std::min(choice, k);
            }
            acc.clear();
            if (choice != labels[u]) {
                labels[u] = choice;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return renumber(labels);
}

namespace {

// Symmetric adjacency with self-loop weights; loops hold twice the internal edge weight.
struct Level {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> loop;
};

Level merge_parallel(const WeightedGraph& g) {
    Level lv{std::vector<std::vector<std::pair<std::uint32_t, double>>>(g.size()), std::vector<double>(g.size(), 0)};
    WeightAccumulator acc(g.size());
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        for (const auto& [v, w] : g.adj[u]) acc.add(v, w);
        std::sort(acc.keys.begin(), acc.keys.end());
        for (auto k : acc.keys) lv.adj[u].emplace_back(k, acc.weight[k]);
        acc.clear();
    }
    return lv;
}

}  // namespace

std::vector<std::uint32_t> louvain(const WeightedGraph& g, int max_levels) {
    const std::size_t n0 = g.size();
    std::vector<std::uint32_t> membership(n0);
    std::iota(membership.begin(), membership.end(), 0u);
    if (n0 == 0) return membership;

    Level lv = merge_parallel(g);
    for (int level = 0; level < max_levels; ++level) {
        const std::size_t n = lv.adj.size();
        std::vector<double> k(n, 0.0);
        double m2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = lv.loop[i];
            for (const auto& [j, w] : lv.adj[i]) k[i] += w;
            m2 += k[i];
        }
        if (m2 <= 0) break;
        std::vector<std::uint32_t> comm(n);
        std::iota(comm.begin(), comm.end(), 0u);
        std::vector<double> tot = k;
        WeightAccumulator acc(n);
        bool moved_any = false;
        bool moved = true;
        for (int pass = 0; moved && pass < 1000; ++pass) {
            moved = false;
            for (std::uint32_t i = 0; i < n; ++i) {
                const auto own = comm[i];
                tot[own] -= k[i];
                acc.add(own, 0.0);
                for (const auto& [j, w] : lv.adj[i]) acc.add(comm[j], w);
                auto gain = [&](std::uint32_t c) { return acc.weight[c] - tot[c] * k[i] / m2; };
                std::uint32_t best = own;
                double best_gain = gain(own);
                for (auto c : acc.keys) {
                    double gc = gain(c);
                    if (gc > best_gain + 1e-12 || (gc >= best_gain - 1e-12 && c < best && best != own)) {
                        best = c;
                        best_gain = gc;
                    }
                }
                acc.clear();
                tot[best] += k[i];
                if (best != own) {
                    comm[i] = best;
                    moved = true;
                    moved_any = true;
                }
            }
        }
        if (!moved_any) break;

        auto dense = renumber(comm);
        std::size_t nc = 1 + *std::max_element(dense.begin(), dense.end());
        for (auto& m : membership) m = dense[m];

        Level next{std::vector<std::vector<std::pair<std::uint32_t, double>>>(nc), std::vector<double>(nc, 0.0)};
        std::vector<std::vector<std::uint32_t>> members(nc);
        for (std::uint32_t i = 0; i < n; ++i) members[dense[i]].push_back(i);
        WeightAccumulator cacc(nc);
        for (std::uint32_t c = 0; c < nc; ++c) {
            for (auto i : members[c]) {
                next.loop[c] += lv.loop[i];
                for (const auto& [j, w] : lv.adj[i]) {
                    if (dense[j] == c)
                        next.loop[c] += w;
                    else
                        cacc.add(dense[j], w);
                }
            }
            std::sort(cacc.keys.begin(), cacc.keys.end());
            for (auto d : cacc.keys) next.adj[c].emplace_back(d, cacc.weight[d]);
            cacc.clear();
        }
        lv = std::move(next);
    }
    return renumber(membership);
}

std::vector<std::uint32_t> detect_communities(const WeightedGraph& g, CommunityAlgorithm algo, std::uint64_t seed) {
    return algo == CommunityAlgorithm::label_propagation ? label_propagation(g, seed) : louvain(g);
}

double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& labels) {
    double m2 = 0;
    std::size_t nc = labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
    std::vector<double> in(nc, 0.0), tot(nc, 0.0);
    for (std::uint32_t u = 0; u < g.size(); ++u)
        for (const auto& [v, w] : g.adj[u]) {
            m2 += w;
            tot[labels[u]] += w;
            if (labels[u] == labels[v]) in[labels[u]] += w;
        }
    if (m2 == 0) return 0;
    double q = 0;
    for (std::size_t c = 0; c < nc; ++c) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
    return q;
}

}  // namespace ledgerlens
