#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "ledgerlens/analysis.hpp"
#include "ledgerlens/synth.hpp"
#include "ledgerlens/txgraph.hpp"

using namespace ledgerlens;
using namespace fixtures;

TEST_CASE("day graphs are filtered to the focus set") {
    auto l = parse_ledger_string(coinbase("c0", at(0), "A", 10) + coinbase("c1", at(0, 10), "X", 10) +
                                 pay("t1", at(1), "A", 10, "B", 10) + pay("t2", at(1, 10), "X", 10, "Y", 10));
    const auto& t = l.addresses();
    FocusSet focus{t.find("A")};
    auto g = build_day_graph(l, 1, focus);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.address(g.edges()[0].from) == t.find("A"));
    CHECK(g.address(g.edges()[0].to) == t.find("B"));
    CHECK(g.node_of(t.find("X")) < 0);

    auto quiet = parse_ledger_string(coinbase("c0", at(0), "A", 10) + coinbase("c1", at(2), "B", 10));
    CHECK(build_day_graph(quiet, 1, FocusSet{quiet.addresses().find("A")}).empty());
}

TEST_CASE("filter agrees with an unfiltered brute-force build") {
    auto l = generate(SynthConfig{.seed = 3, .days = 5, .txs_per_day = 60});
    auto daily = compute_daily_rankings(l, 10, 10);
    FocusSet focus;
    for (const auto& e : daily.rankings[2].entries) focus.insert(e.addr);
    auto g = build_day_graph(l, 3, focus);
    std::map<std::pair<AddrId, AddrId>, std::uint64_t> want;
    auto range = l.day(3);
    for (std::size_t i = range.begin; i < range.end; ++i)
        for (const auto& e : expand_edges(l.tx(i), i))
            if (e.from != e.to && (focus.count(e.from) || focus.count(e.to))) ++want[{e.from, e.to}];
    std::map<std::pair<AddrId, AddrId>, std::uint64_t> got;
    for (const auto& e : g.edges()) got[{g.address(e.from), g.address(e.to)}] += e.count;
    CHECK(got == want);
    CHECK(build_day_graph(l, 3, focus).edges() == g.edges());
}

TEST_CASE("self loops are dropped") {
    auto g = TransactionGraph::from_edges({{1, 1}, {1, 2}});
    CHECK(g.edge_count() == 1);
}

TEST_CASE("degree centrality") {
    auto one = degree_centrality(TransactionGraph::from_edges({{1, 2}}));
    CHECK(one.values == std::vector<double>{1, 1});
    auto cycle = degree_centrality(TransactionGraph::from_edges({{1, 2}, {2, 3}, {3, 1}}));
    CHECK(cycle.values == std::vector<double>{2, 2, 2});
    auto star = TransactionGraph::from_edges({{2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}});
    auto d = degree_centrality(star);
    CHECK(d.values[static_cast<std::size_t>(star.node_of(1))] == 5);
    for (AddrId s = 2; s <= 6; ++s) CHECK(d.values[static_cast<std::size_t>(star.node_of(s))] == 1);
    CHECK_THROWS(degree_centrality(TransactionGraph{}));
}

TEST_CASE("pagerank symmetric cases") {
    auto two = pagerank(TransactionGraph::from_edges({{1, 2}, {2, 1}}));
    CHECK(two.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    auto three = pagerank(TransactionGraph::from_edges({{1, 2}, {2, 3}, {3, 1}}));
    for (double v : three.values) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("pagerank with dangling nodes sums to one and is positive") {
    auto pr = pagerank(TransactionGraph::from_edges({{1, 2}, {1, 3}, {3, 4}}));
    CHECK(std::accumulate(pr.values.begin(), pr.values.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : pr.values) CHECK(v > 0);
}

TEST_CASE("pagerank is invariant to relabeling") {
    std::mt19937_64 rng(12);
    std::vector<std::pair<AddrId, AddrId>> edges;
    for (int i = 0; i < 40; ++i) {
        AddrId a = static_cast<AddrId>(rng() % 15 + 1), b = static_cast<AddrId>(rng() % 15 + 1);
        if (a != b) edges.emplace_back(a, b);
    }
    std::vector<AddrId> perm(16);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    auto relabeled = edges;
    for (auto& [a, b] : relabeled) {
        a = perm[a] + 100;
        b = perm[b] + 100;
    }
    auto g1 = TransactionGraph::from_edges(edges), g2 = TransactionGraph::from_edges(relabeled);
    auto p1 = pagerank(g1), p2 = pagerank(g2);
    for (AddrId a = 1; a <= 15; ++a) {
        auto n1 = g1.node_of(a), n2 = g2.node_of(perm[a] + 100);
        if (n1 < 0) continue;
        CHECK(p1.values[static_cast<std::size_t>(n1)] ==
              doctest::Approx(p2.values[static_cast<std::size_t>(n2)]).epsilon(1e-12));
    }
}

TEST_CASE("pagerank reports non-convergence") {
    PageRankOptions o;
    o.max_iter = 1;
    o.tol = 1e-300;
    try {
        pagerank(TransactionGraph::from_edges({{1, 2}, {2, 3}, {3, 3}, {1, 3}}), o);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual() > 0);
    }
}

TEST_CASE("value-weighted pagerank follows the money") {
    auto g = TransactionGraph::from_edges({{1, 2}, {1, 3}}, {9.0, 1.0});
    PageRankOptions o;
    o.value_weighted = true;
    auto w = pagerank(g, o);
    CHECK(w.values[static_cast<std::size_t>(g.node_of(2))] > w.values[static_cast<std::size_t>(g.node_of(3))]);
    auto u = pagerank(g);
    CHECK(u.values[static_cast<std::size_t>(g.node_of(2))] ==
          doctest::Approx(u.values[static_cast<std::size_t>(g.node_of(3))]));
}

TEST_CASE("dispersion") {
    std::vector<double> one(100, 0), two(100, 0);
    one[0] = 1;
    two[0] = two[1] = 1;
    CHECK(dispersion(one) == 100);
    CHECK(dispersion(two) == 50);
    CHECK(dispersion(std::vector<double>(7, 3.5)) == 1);
    CHECK_THROWS(dispersion(std::vector<double>{1}));
    std::vector<double> v{3, 9, 1, 4}, scaled, shifted;
    for (double x : v) {
        scaled.push_back(x * 17);
        shifted.push_back(x + 5);
    }
    CHECK(dispersion(scaled) == doctest::Approx(dispersion(v)));
    CHECK(dispersion(shifted) == doctest::Approx(dispersion(v)));
    CHECK(dispersion(v) >= 1);
}

TEST_CASE("focus values count absent members as zero") {
    auto g = TransactionGraph::from_edges({{1, 2}});
    auto d = degree_centrality(g);
    auto v = focus_values(g, d, FocusSet{2, 7, 1});
    CHECK(v == std::vector<double>{1, 1, 0});
}

TEST_CASE("dispersion series uses the previous day's focus") {
    auto l = generate(SynthConfig{.seed = 8, .days = 6, .txs_per_day = 50, .initial_addresses = 40});
    auto daily = compute_daily_rankings(l, 10, 10);
    std::vector<NodeMetricRow> nodes;
    DispersionOptions o;
    o.focus_size = 10;
    auto rows = dispersion_series(l, daily, o, 2, &nodes);
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().day == 1);
    for (const auto& r : rows) {
        FocusSet focus;
        for (const auto& e : daily.rankings[static_cast<std::size_t>(r.day - 1)].entries) focus.insert(e.addr);
        auto g = build_day_graph(l, static_cast<std::size_t>(r.day), focus);
        CHECK(r.edges == g.edge_count());
        if (r.degree) CHECK(*r.degree == doctest::Approx(dispersion(focus_values(g, degree_centrality(g), focus))));
    }
    CHECK(!nodes.empty());
    auto again = dispersion_series(l, daily, o, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].pagerank == again[i].pagerank);
}
