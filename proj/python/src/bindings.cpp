#include <fstream>
#include <map>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ledgerlens/analysis.hpp"
#include "ledgerlens/cli.hpp"
#include "ledgerlens/lorenz.hpp"
#include "ledgerlens/market.hpp"
#include "ledgerlens/stability.hpp"
#include "ledgerlens/store.hpp"
#include "ledgerlens/synth.hpp"
#include "ledgerlens/txgraph.hpp"

namespace py = pybind11;
using namespace ledgerlens;

namespace {

// Rankings over anonymous holders: position i in the list is address "h<i>".
std::pair<AddressTable, std::vector<Amount>> holders(const std::vector<Amount>& values) {
    AddressTable t;
    for (std::size_t i = 0; i < values.size(); ++i) t.intern("h" + std::to_string(i));
    t.freeze();
    std::vector<Amount> bal(t.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw std::invalid_argument("balances must be >= 0");
        bal[t.find("h" + std::to_string(i))] = values[i];
    }
    return {std::move(t), std::move(bal)};
}

std::vector<std::pair<std::string, Amount>> named(const Ranking& r, const AddressTable& t) {
    std::vector<std::pair<std::string, Amount>> out;
    for (const auto& e : r.entries) out.emplace_back(std::string(t.name(e.addr)), e.balance);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decentralization metrics over transaction ledgers";
    m.attr("__version__") = LEDGERLENS_VERSION;

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Ledger>(m, "Ledger")
        .def_static("from_jsonl", [](const std::string& text) { return parse_ledger_string(text); }, py::arg("text"))
        .def_static(
            "read", [](const std::filesystem::path& p) {
                std::ifstream in(p);
                if (!in) throw DataError("cannot read " + p.string());
                return parse_ledger(in);
            },
            py::arg("path"))
        .def_static("load", [](const std::filesystem::path& dir) { return store::load(dir); }, py::arg("store"))
        .def(
            "save", [](const Ledger& l, const std::filesystem::path& dir, std::size_t k) { store::save(dir, l, k); },
            py::arg("store"), py::arg("snapshot_interval") = 32)
        .def("to_jsonl",
             [](const Ledger& l) {
                 std::ostringstream out;
                 serialize_ledger(out, l);
                 return out.str();
             })
        .def_property_readonly("transactions", [](const Ledger& l) { return l.transactions().size(); })
        .def_property_readonly("days", &Ledger::day_count)
        .def_property_readonly("addresses", [](const Ledger& l) { return l.addresses().size() - 1; })
        .def_property_readonly("total_minted", &Ledger::total_minted)
        .def_property_readonly("minted_by_day", &Ledger::minted_by_day)
        .def("__len__", [](const Ledger& l) { return l.transactions().size(); })
        .def("__repr__", [](const Ledger& l) {
            return "<Ledger " + std::to_string(l.transactions().size()) + " transactions, " +
                   std::to_string(l.day_count()) + " days>";
        });

    m.def(
        "synth",
        [](std::uint64_t seed, std::size_t days, std::size_t txs_per_day, std::size_t addresses, std::size_t growth,
           const std::string& regime, double alpha, std::size_t hubs, double churn, std::size_t halving_days) {
            SynthConfig c;
            c.seed = seed;
            c.days = days;
            c.txs_per_day = txs_per_day;
            c.initial_addresses = addresses;
            c.address_growth = growth;
            c.regime = parse_regime(regime);
            c.alpha = alpha;
            c.hubs = hubs;
            c.churn = churn;
            c.halving_days = halving_days;
            py::gil_scoped_release release;
            return generate(c);
        },
        py::arg("seed") = 1, py::arg("days") = 30, py::arg("txs_per_day") = 100, py::arg("addresses") = 100,
        py::arg("growth") = 5, py::arg("regime") = "uniform", py::arg("alpha") = 1.0, py::arg("hubs") = 5,
        py::arg("churn") = 0.1, py::arg("halving_days") = 0);

    m.def(
        "top_n",
        [](const Ledger& l, std::size_t day, std::size_t n) {
            auto daily = compute_daily_rankings(l, n, 0);
            return named(daily.rankings.at(day), l.addresses());
        },
        py::arg("ledger"), py::arg("day"), py::arg("n"));

    m.def(
        "proportions",
        [](const Ledger& l, std::size_t n) {
            auto daily = compute_daily_rankings(l, n, 0);
            std::vector<double> out;
            for (const auto& r : proportion_table(daily, {n})) out.push_back(r.values[0]);
            return out;
        },
        py::arg("ledger"), py::arg("n") = 2000, "Top-n share of minted supply for each day.");

    m.def(
        "stability",
        [](const Ledger& l, std::size_t n, std::size_t interval, const std::string& metric, const std::string& mode) {
            auto daily = compute_daily_rankings(l, n, 0);
            return stability_series(daily.rankings, n, interval, parse_stability_metric(metric),
                                    parse_spearman_mode(mode))
                .values;
        },
        py::arg("ledger"), py::arg("n") = 100, py::arg("interval") = 1, py::arg("metric") = "spearman",
        py::arg("mode") = "intersection");

    m.def(
        "d_static_series",
        [](const Ledger& l, std::size_t n, int scale) {
            auto daily = compute_daily_rankings(l, n, 0);
            std::vector<double> out;
            for (const auto& p : d_static_series(daily, n, scale, default_jobs())) out.push_back(p.value);
            return out;
        },
        py::arg("ledger"), py::arg("n") = 2000, py::arg("scale") = 2);

    m.def(
        "dispersion_series",
        [](const Ledger& l, std::size_t focus, double damping) {
            auto daily = compute_daily_rankings(l, focus, 0);
            DispersionOptions o;
            o.focus_size = focus;
            o.pagerank.damping = damping;
            py::list out;
            for (const auto& r : dispersion_series(l, daily, o, default_jobs())) {
                py::dict d;
                d["day"] = r.day;
                d["nodes"] = r.nodes;
                d["edges"] = r.edges;
                d["degree"] = r.degree;
                d["pagerank"] = r.pagerank;
                out.append(d);
            }
            return out;
        },
        py::arg("ledger"), py::arg("focus") = 100, py::arg("damping") = 0.85);

    m.def(
        "hhi_series",
        [](const Ledger& l, const std::string& scheme, std::size_t focus, const std::string& algorithm,
           std::uint64_t seed) {
            ClusterOptions o{focus, parse_community_algorithm(algorithm), seed};
            auto daily = compute_daily_rankings(l, focus, focus);
            std::vector<double> out;
            for (const auto& p : hhi_all(l, daily, {parse_scheme(scheme)}, o).front().points) out.push_back(p.value);
            return out;
        },
        py::arg("ledger"), py::arg("scheme") = "a1", py::arg("focus") = 100, py::arg("algorithm") = "lpa",
        py::arg("seed") = 0);

    m.def(
        "spearman",
        [](const std::vector<Amount>& a, const std::vector<Amount>& b, const std::string& mode) {
            if (a.size() != b.size()) throw std::invalid_argument("balance lists differ in length");
            auto [t, x] = holders(a);
            auto [u, y] = holders(b);
            return spearman(top_n(x, 0, a.size(), t), top_n(y, 1, b.size(), t), parse_spearman_mode(mode));
        },
        py::arg("a"), py::arg("b"), py::arg("mode") = "intersection",
        "Rank correlation of two balance lists indexed by holder; zero balances are unranked.");
    m.def(
        "retention",
        [](const std::vector<Amount>& a, const std::vector<Amount>& b, std::size_t n) {
            auto [t, x] = holders(a);
            auto [u, y] = holders(b);
            return retention(top_n(x, 0, n, t), top_n(y, 1, n, t), n);
        },
        py::arg("a"), py::arg("b"), py::arg("n"));
    m.def(
        "d_static",
        [](const std::vector<Amount>& balances, int scale) {
            auto [t, x] = holders(balances);
            return d_static(cumulative_curve(top_n(x, 0, balances.size(), t), balances.size()), scale);
        },
        py::arg("balances"), py::arg("scale") = 2);
    m.def(
        "pagerank",
        [](const std::vector<std::pair<AddrId, AddrId>>& edges, double damping, double tol, int max_iter) {
            auto g = TransactionGraph::from_edges(edges);
            PageRankOptions o;
            o.damping = damping;
            o.tol = tol;
            o.max_iter = max_iter;
            auto pr = pagerank(g, o);
            std::map<AddrId, double> out;
            for (std::uint32_t i = 0; i < g.node_count(); ++i) out[g.address(i)] = pr.values[i];
            return out;
        },
        py::arg("edges"), py::arg("damping") = 0.85, py::arg("tol") = 1e-10, py::arg("max_iter") = 200);
    m.def("dispersion", py::overload_cast<const std::vector<double>&>(&dispersion), py::arg("values"));
    m.def(
        "hhi",
        [](const std::vector<Amount>& holdings) {
            Amount total = 0;
            for (Amount h : holdings) total += h;
            return hhi(holdings, total);
        },
        py::arg("holdings"));
    m.def("classify", [](double v) { return std::string(to_string(classify(v))); }, py::arg("hhi"));
    m.def("d_hhi", [](const std::vector<double>& s) { return d_hhi(std::span<const double>(s)); }, py::arg("series"));

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command-line invocation; returns (exit_code, stdout, stderr).");
}
