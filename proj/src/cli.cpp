#include "ledgerlens/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "ledgerlens/analysis.hpp"
#include "ledgerlens/lorenz.hpp"
#include "ledgerlens/report.hpp"
#include "ledgerlens/store.hpp"

namespace ledgerlens::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void validate(const RunConfig& c) {
    for (auto n : c.tops)
        if (n < 1 || n > 1'000'000) throw std::invalid_argument(fmt::format("top-N {} outside [1, 1000000]", n));
    for (auto i : c.intervals)
        if (i < 1) throw std::invalid_argument("intervals must be >= 1");
    if (c.dstatic_scale != 1 && c.dstatic_scale != 2) throw std::invalid_argument("--scale must be 1 or 2");
    if (c.from_day && c.to_day && *c.from_day > *c.to_day) throw std::invalid_argument("--from is after --to");
    if (c.format != "csv" && c.format != "json" && c.format != "svg")
        throw std::invalid_argument(fmt::format("unknown format '{}'", c.format));
}

namespace {

// Per-subcommand extras that do not belong in RunConfig.
struct Extras {
    SynthConfig synth;
    std::string regime = "uniform";
    std::size_t snapshot_interval = 32;
    std::optional<std::int64_t> epoch;
    std::optional<std::int32_t> day;
    bool wide = false;
    bool diff = false;
    std::size_t step = 100;
    std::size_t max = 2000;
    std::string graph_metric = "both";
    double damping = 0.85;
    bool value_weighted = false;
    std::string nodes_path;
    std::string community = "lpa";
    std::uint64_t seed = 0;
    std::size_t focus = 100;
    bool dhhi = false;
    std::optional<std::int32_t> curve_day;
};

class Output {
public:
    explicit Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw DataError(fmt::format("cannot write {}", path));
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

bool in_range(const RunConfig& c, std::int32_t day) {
    return (!c.from_day || day >= *c.from_day) && (!c.to_day || day <= *c.to_day);
}

std::string join(const std::vector<std::size_t>& v) { return fmt::format("{}", fmt::join(v, ",")); }

std::string ledger_fingerprint(const Ledger& l) {
    return fmt::format("txs={};addrs={};days={};minted={};epoch={}", l.transactions().size(), l.addresses().size(),
                       l.day_count(), l.total_minted(), l.epoch());
}

std::string canonical(const RunConfig& c, const Extras& x, const Ledger& l) {
    std::vector<std::string> schemes;
    for (auto s : c.schemes) schemes.emplace_back(to_string(s));
    return fmt::format(
        "cmd={};from={};to={};tops={};intervals={};metric={};mode={};scale={};schemes={};format={};day={};wide={};"
        "diff={};step={};max={};graph_metric={};damping={};value_weighted={};community={};seed={};focus={};dhhi={};"
        "curve_day={};{}",
        c.command, c.from_day ? std::to_string(*c.from_day) : "", c.to_day ? std::to_string(*c.to_day) : "",
        join(c.tops), join(c.intervals), to_string(c.stability_metric),
        c.spearman_mode == SpearmanMode::intersection ? "intersection" : "penalized", c.dstatic_scale,
        fmt::join(schemes, ","), c.format, x.day ? std::to_string(*x.day) : "", x.wide, x.diff, x.step, x.max,
        x.graph_metric, x.damping, x.value_weighted, x.community, x.seed, x.focus, x.dhhi,
        x.curve_day ? std::to_string(*x.curve_day) : "", ledger_fingerprint(l));
}

ordered_json meta_json(std::string_view command, std::string_view hash) {
    ordered_json m;
    m["tool"] = "ledgerlens";
    m["version"] = LEDGERLENS_VERSION;
    m["format"] = report::kOutputFormatVersion;
    m["config"] = hash;
    m["command"] = command;
    return m;
}

ordered_json summary_json(const DistributionSummary& s) {
    ordered_json j;
    j["count"] = s.count;
    j["mean"] = s.mean;
    j["sd"] = s.sd;
    j["median"] = s.median;
    j["q1"] = s.q1;
    j["q3"] = s.q3;
    j["iqr"] = s.iqr;
    j["min"] = s.min;
    j["max"] = s.max;
    j["whisker_low"] = s.whisker_low;
    j["whisker_high"] = s.whisker_high;
    j["outliers"] = s.outliers;
    return j;
}

Ledger load_ledger(const RunConfig& c) {
    if (!c.store.empty()) return store::load(c.store);
    if (c.input == "-") return parse_ledger(std::cin);
    std::ifstream in(c.input);
    if (!in) throw DataError(fmt::format("cannot read {}", c.input));
    return parse_ledger(in);
}

unsigned jobs_of(const RunConfig& c) { return c.jobs ? c.jobs : default_jobs(); }

std::size_t max_of(const std::vector<std::size_t>& v, std::size_t fallback) {
    return v.empty() ? fallback : *std::max_element(v.begin(), v.end());
}

// ---- subcommands ---------------------------------------------------------------------------

int cmd_synth(const RunConfig& c, Extras& x, std::ostream& out) {
    x.synth.regime = parse_regime(x.regime);
    auto ledger = generate(x.synth);
    Output o(c.output, out);
    serialize_ledger(*o, ledger);
    return kExitOk;
}

int cmd_ingest(const RunConfig& c, const Extras& x, std::ostream& out, std::ostream& err) {
    if (c.out_dir.empty()) throw std::invalid_argument("ingest needs --out DIR (or LEDGERLENS_STORE)");
    Ledger ledger;
    ParseOptions po{x.epoch};
    if (c.input == "-") {
        ledger = parse_ledger(std::cin, po);
    } else {
        std::ifstream in(c.input);
        if (!in) throw DataError(fmt::format("cannot read {}", c.input));
        ledger = parse_ledger(in, po);
    }
    store::save(c.out_dir, ledger, x.snapshot_interval);
    if (ledger.stats.out_of_order)
        err << fmt::format("warning: {} records were out of timestamp order and were re-sorted\n",
                           ledger.stats.out_of_order);
    out << fmt::format("ingested {} transactions over {} days, {} addresses, {} minted\n",
                       ledger.transactions().size(), ledger.day_count(), ledger.addresses().size() - 1,
                       ledger.total_minted());
    return kExitOk;
}

int cmd_snapshot(const RunConfig& c, const Extras& x, std::ostream& out) {
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    Output o(c.output, out);
    if (x.day) {
        auto snaps = c.store.empty() ? SnapshotStore::build(ledger) : store::load_snapshots(c.store);
        auto snap = snaps.at(static_cast<std::size_t>(*x.day));
        auto r = top_n(snap, c.tops.empty() ? 10 : c.tops.front(), ledger.addresses());
        report::CsvWriter w(*o, c.command, hash, {"rank", "address", "balance"});
        for (std::size_t i = 0; i < r.size(); ++i)
            w.row({std::to_string(i + 1), std::string(ledger.addresses().name(r.entries[i].addr)),
                   std::to_string(r.entries[i].balance)});
        return kExitOk;
    }
    report::CsvWriter w(*o, c.command, hash, {"day", "total_supply", "cumulative_fees", "held", "funded_addresses"});
    for_each_day(ledger, [&](const BalanceState& s) {
        if (!in_range(c, s.day())) return;
        Amount held = 0;
        std::size_t funded = 0;
        for (Amount b : s.balances()) {
            held += b;
            funded += b > 0;
        }
        w.row({std::to_string(s.day()), std::to_string(s.total_supply()), std::to_string(s.cumulative_fees()),
               std::to_string(held), std::to_string(funded)});
    });
    return kExitOk;
}

int cmd_proportions(const RunConfig& c, const Extras& x, std::ostream& out) {
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    Output o(c.output, out);
    if (x.wide || x.diff) {
        if (x.step == 0 || x.max % x.step != 0) throw std::invalid_argument("--step must divide --max");
        auto daily = compute_daily_rankings(ledger, x.max, 0);
        std::vector<std::string> cols{"day"};
        std::vector<std::size_t> ns;
        for (std::size_t v = x.step; v <= x.max; v += x.step) ns.push_back(v);
        if (x.diff) {
            for (std::size_t v = 0; v < x.max; v += x.step) cols.push_back(fmt::format("x{}", v));
        } else {
            for (auto n : ns) cols.push_back(fmt::format("p{}", n));
        }
        report::CsvWriter w(*o, c.command, hash, cols);
        auto rows = x.diff ? proportion_diff_table(daily, x.step, x.max) : proportion_table(daily, ns);
        for (const auto& r : rows) {
            if (!in_range(c, r.day)) continue;
            std::vector<std::string> cells{std::to_string(r.day)};
            for (double v : r.values) cells.push_back(report::number(v));
            w.row(cells);
        }
        return kExitOk;
    }
    auto tops = c.tops.empty() ? std::vector<std::size_t>{100, 2000} : c.tops;
    auto daily = compute_daily_rankings(ledger, max_of(tops, 2000), 0);
    report::CsvWriter w(*o, c.command, hash, {"day", "n", "proportion"});
    for (const auto& r : proportion_table(daily, tops)) {
        if (!in_range(c, r.day)) continue;
        for (std::size_t k = 0; k < tops.size(); ++k)
            w.row({std::to_string(r.day), std::to_string(tops[k]), report::number(r.values[k])});
    }
    return kExitOk;
}

int cmd_stability(const RunConfig& c, const Extras& x, std::ostream& out, unsigned jobs) {
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    auto tops = c.tops.empty() ? std::vector<std::size_t>{100} : c.tops;
    auto intervals = c.intervals.empty() ? std::vector<std::size_t>{1} : c.intervals;
    auto daily = compute_daily_rankings(ledger, max_of(tops, 100), 0);

    struct Job {
        std::size_t top, interval;
        StabilitySeries series;
    };
    std::vector<Job> work;
    for (auto t : tops)
        for (auto i : intervals) work.push_back({t, i, {}});
    parallel_for(work.size(), jobs, [&](std::size_t k) {
        work[k].series = stability_series(daily.rankings, work[k].top, work[k].interval, c.stability_metric,
                                          c.spearman_mode);
    });
    auto filtered = [&](const StabilitySeries& s) {
        std::vector<double> v;
        for (const auto& [day, val] : s.values)
            if (in_range(c, day) && val) v.push_back(*val);
        return v;
    };

    Output o(c.output, out);
    if (c.format == "json") {
        ordered_json j;
        j["meta"] = meta_json(c.command, hash);
        j["metric"] = to_string(c.stability_metric);
        ordered_json arr = ordered_json::array();
        for (const auto& job : work) {
            ordered_json e;
            e["top"] = job.top;
            e["interval"] = job.interval;
            auto vals = filtered(job.series);
            e["summary"] = vals.empty() ? ordered_json(nullptr) : summary_json(summarize(vals));
            arr.push_back(e);
        }
        j["series"] = arr;
        *o << j.dump(2) << '\n';
        return kExitOk;
    }
    if (work.size() == 1) {
        report::CsvWriter w(*o, c.command, hash, {"day", "value"});
        for (const auto& [day, val] : work[0].series.values)
            if (in_range(c, day)) w.row({std::to_string(day), report::number(val)});
        return kExitOk;
    }
    report::CsvWriter w(*o, c.command, hash, {"day", "metric", "top", "interval", "value"});
    for (const auto& job : work)
        for (const auto& [day, val] : job.series.values)
            if (in_range(c, day))
                w.row({std::to_string(day), std::string(to_string(c.stability_metric)), std::to_string(job.top),
                       std::to_string(job.interval), report::number(val)});
    return kExitOk;
}

int cmd_dstatic(const RunConfig& c, const Extras& x, std::ostream& out, unsigned jobs) {
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    const std::size_t n = c.tops.empty() ? 2000 : c.tops.front();
    auto daily = compute_daily_rankings(ledger, n, 0);
    Output o(c.output, out);
    auto meta = report::meta_comment(c.command, hash);
    if (x.curve_day) {
        auto d = static_cast<std::size_t>(*x.curve_day);
        if (d >= daily.days()) throw std::invalid_argument(fmt::format("no day {} in ledger", d));
        auto curve = cumulative_curve(daily.rankings[d].truncated(n), n);
        if (c.format == "svg") {
            report::Series real{"C_r (real)", {}, {}}, equal{"C_e (equal)", {}, {}};
            for (std::size_t k = 1; k <= n; ++k) {
                real.x.push_back(static_cast<double>(k));
                real.y.push_back(curve.real(k));
                equal.x.push_back(static_cast<double>(k));
                equal.y.push_back(curve.equal(k));
            }
            *o << report::line_chart({real, equal},
                                     {fmt::format("Top-x cumulative share, day {}", d), "x", "share", 0.0, 1.0}, meta);
            return kExitOk;
        }
        report::CsvWriter w(*o, c.command, hash, {"x", "c_real", "c_equal"});
        for (std::size_t k = 1; k <= n; ++k)
            w.row({std::to_string(k), report::number(curve.real(k)), report::number(curve.equal(k))});
        return kExitOk;
    }
    auto series = d_static_series(daily, n, c.dstatic_scale, jobs);
    if (c.format == "svg") {
        report::Series s{fmt::format("D_static top-{}", n), {}, {}};
        for (const auto& p : series)
            if (in_range(c, p.day)) {
                s.x.push_back(p.day);
                s.y.push_back(p.value);
            }
        *o << report::line_chart({s}, {"Static decentralization degree", "day", "D_static", 0.0, 1.0}, meta);
        return kExitOk;
    }
    report::CsvWriter w(*o, c.command, hash, {"day", "d_static"});
    for (const auto& p : series)
        if (in_range(c, p.day)) w.row({std::to_string(p.day), report::number(p.value)});
    return kExitOk;
}

int cmd_dispersion(const RunConfig& c, const Extras& x, std::ostream& out, unsigned jobs) {
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    const bool want_degree = x.graph_metric == "degree" || x.graph_metric == "both";
    const bool want_pr = x.graph_metric == "pagerank" || x.graph_metric == "both";
    if (!want_degree && !want_pr) throw std::invalid_argument(fmt::format("unknown metric '{}'", x.graph_metric));
    DispersionOptions opts;
    opts.focus_size = x.focus;
    opts.pagerank.damping = x.damping;
    opts.pagerank.value_weighted = x.value_weighted;
    auto daily = compute_daily_rankings(ledger, x.focus, 0);
    std::vector<NodeMetricRow> nodes;
    auto rows = dispersion_series(ledger, daily, opts, jobs, x.nodes_path.empty() ? nullptr : &nodes);
    Output o(c.output, out);
    report::CsvWriter w(*o, c.command, hash, {"day", "metric", "dispersion"});
    for (const auto& r : rows) {
        if (!in_range(c, r.day)) continue;
        if (want_degree) w.row({std::to_string(r.day), "degree", report::number(r.degree)});
        if (want_pr) w.row({std::to_string(r.day), "pagerank", report::number(r.pagerank)});
    }
    if (!x.nodes_path.empty()) {
        Output n(x.nodes_path, out);
        report::CsvWriter nw(*n, c.command, hash, {"day", "address", "degree", "pagerank"});
        for (const auto& r : nodes)
            if (in_range(c, r.day))
                nw.row({std::to_string(r.day), std::string(ledger.addresses().name(r.addr)), report::number(r.degree),
                        report::number(r.pagerank)});
    }
    return kExitOk;
}

ordered_json partition_json(const EntityClustering& cl, const Ledger& ledger, std::string_view hash,
                            std::string_view command) {
    ordered_json j;
    j["meta"] = meta_json(command, hash);
    j["day"] = cl.day;
    j["scheme"] = to_string(cl.scheme);
    j["anchor"] = "top members of the evaluation day";
    ordered_json focus = ordered_json::array();
    for (auto a : cl.focus) focus.push_back(std::string(ledger.addresses().name(a)));
    j["focus"] = focus;
    ordered_json firms = ordered_json::array();
    for (const auto& f : cl.firms) {
        ordered_json members = ordered_json::array();
        for (auto a : f) members.push_back(std::string(ledger.addresses().name(a)));
        firms.push_back(members);
    }
    j["firms"] = firms;
    ordered_json special = ordered_json::array();
    if (cl.has_coinbase_entity) special.push_back("V_c");
    if (cl.has_rest_entity) special.push_back("V_o");
    j["special_entities"] = special;
    return j;
}

int cmd_hhi(const RunConfig& c, const Extras& x, std::ostream& out) {
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    ClusterOptions opts{x.focus, parse_community_algorithm(x.community), x.seed};
    auto schemes = c.schemes.empty() ? std::vector<ClusterScheme>{ClusterScheme::a1} : c.schemes;
    Output o(c.output, out);
    if (x.day) {
        auto cl = cluster(ledger, static_cast<std::size_t>(*x.day), schemes.front(), opts);
        *o << partition_json(cl, ledger, hash, c.command).dump(2) << '\n';
        return kExitOk;
    }
    auto daily = compute_daily_rankings(ledger, x.focus, x.focus);
    if (x.dhhi) {
        auto series = hhi_all(ledger, daily, {ClusterScheme::a3}, opts).front();
        auto d = d_hhi(series);
        report::CsvWriter w(*o, c.command, hash, {"day", "d_hhi"});
        for (std::size_t i = 0; i < d.size(); ++i)
            if (in_range(c, series.points[i].day))
                w.row({std::to_string(series.points[i].day), report::number(d[i])});
        return kExitOk;
    }
    auto all = hhi_all(ledger, daily, schemes, opts);
    report::CsvWriter w(*o, c.command, hash, {"day", "scheme", "hhi", "class"});
    const std::size_t points = all.front().points.size();
    for (std::size_t i = 0; i < points; ++i)
        for (const auto& s : all) {
            const auto& p = s.points[i];
            if (!in_range(c, p.day)) continue;
            w.row({std::to_string(p.day), std::string(to_string(s.scheme)), report::number(p.value),
                   std::string(to_string(classify(p.value)))});
        }
    return kExitOk;
}

// ---- report --------------------------------------------------------------------------------

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write {}", p.string()));
    out << text;
}

int cmd_report(const RunConfig& c, const Extras& x, std::ostream& out, unsigned jobs) {
    if (c.out_dir.empty()) throw std::invalid_argument("report needs --out-dir DIR");
    auto ledger = load_ledger(c);
    auto hash = report::config_hash(canonical(c, x, ledger));
    auto meta = report::meta_comment(c.command, hash);
    const fs::path dir = c.out_dir;
    fs::create_directories(dir);

    auto tops = c.tops.empty() ? std::vector<std::size_t>{100, 300, 500, 900, 1500} : c.tops;
    auto intervals = c.intervals.empty() ? std::vector<std::size_t>{1, 5, 10, 50, 100} : c.intervals;
    const std::size_t max = x.max, step = x.step;
    if (step == 0 || max % step != 0) throw std::invalid_argument("--step must divide --max");
    std::vector<std::size_t> grid;
    for (std::size_t v = step; v <= max; v += step) grid.push_back(v);
    auto daily = compute_daily_rankings(ledger, std::max(max, max_of(tops, 0)), x.focus);
    auto day_ok = [&](std::int32_t d) { return in_range(c, d); };

    ordered_json bundle;
    bundle["meta"] = meta_json(c.command, hash);
    bundle["ledger"] = {{"transactions", ledger.transactions().size()},
                        {"addresses", ledger.addresses().size() - 1},
                        {"days", ledger.day_count()},
                        {"total_minted", ledger.total_minted()}};

    // proportions
    auto props = proportion_table(daily, grid);
    auto diffs = proportion_diff_table(daily, step, max);
    {
        std::ostringstream csv;
        std::vector<std::string> cols{"day"};
        for (auto n : grid) cols.push_back(fmt::format("p{}", n));
        report::CsvWriter w(csv, c.command, hash, cols);
        std::vector<report::Series> lines;
        for (std::size_t k = 0; k < grid.size(); k += std::max<std::size_t>(1, grid.size() / 5))
            lines.push_back({fmt::format("top-{}", grid[k]), {}, {}});
        if (lines.back().name != fmt::format("top-{}", grid.back())) lines.push_back({fmt::format("top-{}", grid.back()), {}, {}});
        ordered_json pj = ordered_json::array();
        for (const auto& r : props) {
            if (!day_ok(r.day)) continue;
            std::vector<std::string> cells{std::to_string(r.day)};
            for (double v : r.values) cells.push_back(report::number(v));
            w.row(cells);
            for (auto& l : lines) {
                auto n = std::stoul(l.name.substr(4));
                l.x.push_back(r.day);
                l.y.push_back(r.values[n / step - 1]);
            }
            pj.push_back({{"day", r.day}, {"values", r.values}});
        }
        write_text(dir / "proportions.csv", csv.str());
        write_text(dir / "fig2a_proportions.svg",
                   report::line_chart(lines, {"Top-x share of total supply", "day", "proportion", 0.0, 1.0}, meta));
        bundle["proportions"] = {{"tops", grid}, {"rows", pj}};
    }
    {
        std::ostringstream csv;
        std::vector<std::string> cols{"day"};
        for (std::size_t v = 0; v < max; v += step) cols.push_back(fmt::format("x{}", v));
        report::CsvWriter w(csv, c.command, hash, cols);
        std::vector<report::Series> lines;
        for (std::size_t k = 0; k < std::min<std::size_t>(5, max / step); ++k)
            lines.push_back({fmt::format("x={}", k * step), {}, {}});
        for (const auto& r : diffs) {
            if (!day_ok(r.day)) continue;
            std::vector<std::string> cells{std::to_string(r.day)};
            for (double v : r.values) cells.push_back(report::number(v));
            w.row(cells);
            for (std::size_t k = 0; k < lines.size(); ++k) {
                lines[k].x.push_back(r.day);
                lines[k].y.push_back(r.values[k]);
            }
        }
        write_text(dir / "proportion_diff.csv", csv.str());
        write_text(dir / "fig2b_proportion_diff.svg",
                   report::line_chart(lines, {fmt::format("Top-(x+{}) minus top-x share", step), "day", "difference", {}, {}},
                                      meta));
    }

    // stability
    ordered_json stab;
    for (auto metric : {StabilityMetric::spearman, StabilityMetric::retention}) {
        const std::string mname(to_string(metric));
        auto series_for = [&](std::size_t top, std::size_t interval) {
            return stability_series(daily.rankings, top, interval, metric, c.spearman_mode);
        };
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (auto i : intervals) pairs.emplace_back(tops.front(), i);
        for (auto t : tops)
            if (t != tops.front() || intervals.front() != 1) pairs.emplace_back(t, 1);
        for (auto t : grid) pairs.emplace_back(t, 1);
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        std::vector<StabilitySeries> results(pairs.size());
        parallel_for(pairs.size(), jobs, [&](std::size_t k) { results[k] = series_for(pairs[k].first, pairs[k].second); });
        auto find = [&](std::size_t t, std::size_t i) -> const StabilitySeries& {
            auto it = std::find(pairs.begin(), pairs.end(), std::make_pair(t, i));
            return results[static_cast<std::size_t>(it - pairs.begin())];
        };
        auto to_line = [&](const StabilitySeries& s, std::string name) {
            report::Series l{std::move(name), {}, {}};
            for (const auto& [day, v] : s.values)
                if (day_ok(day)) {
                    l.x.push_back(day);
                    l.y.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
                }
            return l;
        };
        auto defined = [&](const StabilitySeries& s) {
            std::vector<double> v;
            for (const auto& [day, val] : s.values)
                if (day_ok(day) && val) v.push_back(*val);
            return v;
        };

        std::ostringstream csv;
        report::CsvWriter w(csv, c.command, hash, {"day", "top", "interval", "value"});
        ordered_json mj = ordered_json::array();
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            for (const auto& [day, v] : results[k].values)
                if (day_ok(day))
                    w.row({std::to_string(day), std::to_string(pairs[k].first), std::to_string(pairs[k].second),
                           report::number(v)});
            auto vals = defined(results[k]);
            mj.push_back({{"top", pairs[k].first},
                          {"interval", pairs[k].second},
                          {"summary", vals.empty() ? ordered_json(nullptr) : summary_json(summarize(vals))}});
        }
        write_text(dir / fmt::format("{}.csv", mname), csv.str());
        stab[mname] = mj;

        const char* fig = metric == StabilityMetric::spearman ? "fig3" : "fig4";
        const std::string label = metric == StabilityMetric::spearman ? "Spearman coefficient" : "retention rate";
        std::vector<report::Series> by_interval, by_top;
        for (auto i : intervals)
            by_interval.push_back(to_line(find(tops.front(), i), fmt::format("interval={}", i)));
        for (auto t : tops) by_top.push_back(to_line(find(t, 1), fmt::format("top-{}", t)));
        write_text(dir / fmt::format("{}a_{}_intervals.svg", fig, mname),
                   report::line_chart(by_interval, {fmt::format("Top-{} {} by interval", tops.front(), label), "day", label, {}, {}},
                                      meta));
        write_text(dir / fmt::format("{}b_{}_tops.svg", fig, mname),
                   report::line_chart(by_top, {fmt::format("{} of top-x, interval 1", label), "day", label, {}, {}}, meta));

        std::vector<report::Box> boxes_top, boxes_interval;
        for (auto t : grid)
            if (auto v = defined(find(t, 1)); !v.empty()) boxes_top.push_back({std::to_string(t), summarize(v)});
        for (auto i : intervals)
            if (auto v = defined(find(tops.front(), i)); !v.empty())
                boxes_interval.push_back({std::to_string(i), summarize(v)});
        const char* a = metric == StabilityMetric::spearman ? "a" : "c";
        const char* b = metric == StabilityMetric::spearman ? "b" : "d";
        write_text(dir / fmt::format("fig5{}_{}_by_top.svg", a, mname),
                   report::box_plot(boxes_top, {fmt::format("{} by top-x", label), "top-x", label, {}, {}}, meta));
        write_text(dir / fmt::format("fig5{}_{}_by_interval.svg", b, mname),
                   report::box_plot(boxes_interval,
                                    {fmt::format("Top-{} {} by interval", tops.front(), label), "interval", label, {}, {}}, meta));
    }
    bundle["stability"] = stab;

    // static decentralization
    {
        auto series = d_static_series(daily, max, c.dstatic_scale, jobs);
        std::ostringstream csv;
        report::CsvWriter w(csv, c.command, hash, {"day", "d_static"});
        report::Series line{fmt::format("top-{}", max), {}, {}};
        ordered_json dj = ordered_json::array();
        for (const auto& p : series) {
            if (!day_ok(p.day)) continue;
            w.row({std::to_string(p.day), report::number(p.value)});
            line.x.push_back(p.day);
            line.y.push_back(p.value);
            dj.push_back({{"day", p.day}, {"value", p.value}});
        }
        write_text(dir / "d_static.csv", csv.str());
        write_text(dir / "fig6b_d_static.svg",
                   report::line_chart({line}, {"Static decentralization degree", "day", "D_static", 0.0, 1.0}, meta));
        bundle["d_static"] = {{"top", max}, {"scale", c.dstatic_scale}, {"series", dj}};

        std::int32_t last = -1;
        for (const auto& p : series)
            if (day_ok(p.day)) last = p.day;
        if (last >= 0) {
            auto curve = cumulative_curve(daily.rankings[static_cast<std::size_t>(last)].truncated(max), max);
            report::Series real{"C_r (real)", {}, {}}, equal{"C_e (equal)", {}, {}};
            for (std::size_t k = 1; k <= max; ++k) {
                real.x.push_back(static_cast<double>(k));
                real.y.push_back(curve.real(k));
                equal.x.push_back(static_cast<double>(k));
                equal.y.push_back(curve.equal(k));
            }
            write_text(dir / "fig6a_cumulative_curve.svg",
                       report::line_chart({real, equal},
                                          {fmt::format("Top-x cumulative share, day {}", last), "x", "share", 0.0, 1.0},
                                          meta));
        }
    }

    // dispersion
    {
        DispersionOptions opts;
        opts.focus_size = x.focus;
        opts.pagerank.damping = x.damping;
        opts.pagerank.value_weighted = x.value_weighted;
        auto rows = dispersion_series(ledger, daily, opts, jobs);
        std::ostringstream csv;
        report::CsvWriter w(csv, c.command, hash, {"day", "metric", "dispersion"});
        report::Series deg{"degree", {}, {}}, pr{"pagerank", {}, {}};
        ordered_json dj = ordered_json::array();
        for (const auto& r : rows) {
            if (!day_ok(r.day)) continue;
            w.row({std::to_string(r.day), "degree", report::number(r.degree)});
            w.row({std::to_string(r.day), "pagerank", report::number(r.pagerank)});
            deg.x.push_back(r.day);
            deg.y.push_back(r.degree.value_or(std::numeric_limits<double>::quiet_NaN()));
            pr.x.push_back(r.day);
            pr.y.push_back(r.pagerank.value_or(std::numeric_limits<double>::quiet_NaN()));
            dj.push_back({{"day", r.day},
                          {"degree", r.degree ? ordered_json(*r.degree) : ordered_json(nullptr)},
                          {"pagerank", r.pagerank ? ordered_json(*r.pagerank) : ordered_json(nullptr)}});
        }
        write_text(dir / "dispersion.csv", csv.str());
        write_text(dir / "fig7_dispersion.svg",
                   report::line_chart({deg, pr}, {fmt::format("Dispersion over top-{}", x.focus), "day", "d_m", {}, {}}, meta));
        bundle["dispersion"] = dj;
    }

    // HHI
    {
        ClusterOptions opts{x.focus, parse_community_algorithm(x.community), x.seed};
        auto all = hhi_all(ledger, daily, {ClusterScheme::a1, ClusterScheme::a2, ClusterScheme::a3}, opts);
        std::ostringstream csv;
        report::CsvWriter w(csv, c.command, hash, {"day", "scheme", "hhi", "class"});
        std::vector<report::Series> lines;
        ordered_json hj;
        for (const auto& s : all) {
            report::Series l{std::string(to_string(s.scheme)), {}, {}};
            ordered_json arr = ordered_json::array();
            for (const auto& p : s.points)
                if (day_ok(p.day)) {
                    l.x.push_back(p.day);
                    l.y.push_back(p.value);
                    arr.push_back({{"day", p.day}, {"hhi", p.value}, {"class", to_string(classify(p.value))}});
                }
            lines.push_back(std::move(l));
            hj[std::string(to_string(s.scheme))] = arr;
        }
        for (std::size_t i = 0; i < all.front().points.size(); ++i)
            for (const auto& s : all)
                if (day_ok(s.points[i].day))
                    w.row({std::to_string(s.points[i].day), std::string(to_string(s.scheme)),
                           report::number(s.points[i].value), std::string(to_string(classify(s.points[i].value)))});
        write_text(dir / "hhi.csv", csv.str());
        write_text(dir / "fig8a_hhi.svg", report::line_chart(lines, {"HHI by clustering scheme", "day", "HHI", {}, {}}, meta));
        bundle["hhi"] = hj;

        const auto& a3 = all.back();
        auto d = d_hhi(a3);
        std::ostringstream dcsv;
        report::CsvWriter dw(dcsv, c.command, hash, {"day", "d_hhi"});
        report::Series dl{"D_HHI", {}, {}};
        ordered_json dj = ordered_json::array();
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (!day_ok(a3.points[i].day)) continue;
            dw.row({std::to_string(a3.points[i].day), report::number(d[i])});
            dl.x.push_back(a3.points[i].day);
            dl.y.push_back(d[i]);
            dj.push_back({{"day", a3.points[i].day}, {"value", d[i]}});
        }
        write_text(dir / "d_hhi.csv", dcsv.str());
        write_text(dir / "fig8b_d_hhi.svg",
                   report::line_chart({dl}, {"HHI-based decentralization degree", "day", "D_HHI", 0.0, 1.0}, meta));
        bundle["d_hhi"] = dj;
        bundle["hhi_anchor"] = "top members of each evaluation day";
    }

    write_text(dir / "report.json", bundle.dump(2) + "\n");
    out << fmt::format("report written to {}\n", dir.string());
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ledgerlens: decentralization metrics over transaction ledgers", "ledgerlens"};
    app.require_subcommand(1);
    RunConfig cfg;
    Extras x;
    std::vector<std::string> scheme_names;
    std::string metric_name = "spearman", mode_name = "intersection";
    app.add_option("-j,--jobs", cfg.jobs, "worker threads (default: available cores)");

    auto add_store = [&](CLI::App* sub) {
        sub->add_option("--store", cfg.store, "store directory written by ingest")->envname("LEDGERLENS_STORE");
        sub->add_option("--in", cfg.input, "JSON-lines ledger to read instead of a store");
        sub->add_option("-o,--out", cfg.output, "output file (default: stdout)");
        sub->add_option("--from", cfg.from_day, "first day to emit");
        sub->add_option("--to", cfg.to_day, "last day to emit");
    };

    auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic ledger");
    synth->add_option("--seed", x.synth.seed);
    synth->add_option("--days", x.synth.days);
    synth->add_option("--txs-per-day", x.synth.txs_per_day);
    synth->add_option("--addresses", x.synth.initial_addresses, "initial address pool");
    synth->add_option("--growth", x.synth.address_growth, "new addresses per day");
    synth->add_option("--regime", x.regime, "uniform|preferential|hub|churn|equal");
    synth->add_option("--alpha", x.synth.alpha, "preferential attachment exponent");
    synth->add_option("--hubs", x.synth.hubs);
    synth->add_option("--churn", x.synth.churn);
    synth->add_option("--reward", x.synth.reward, "coinbase reward in base units");
    synth->add_option("--halving-days", x.synth.halving_days);
    synth->add_option("--blocks-per-day", x.synth.blocks_per_day);
    synth->add_option("--max-outputs", x.synth.max_outputs);
    synth->add_option("--genesis-time", x.synth.genesis_time);
    synth->add_option("-o,--out", cfg.output, "output file (default: stdout)");

    auto* ingest = app.add_subcommand("ingest", "parse JSON-lines records into a store directory");
    ingest->add_option("--in", cfg.input, "input file, - for stdin");
    ingest->add_option("-o,--out", cfg.out_dir, "store directory")->envname("LEDGERLENS_STORE");
    ingest->add_option("--snapshot-interval", x.snapshot_interval, "full snapshot every k days");
    ingest->add_option("--epoch", x.epoch, "day-0 anchor timestamp");

    auto* snapshot = app.add_subcommand("snapshot", "daily supply summary, or one day's ranking");
    add_store(snapshot);
    snapshot->add_option("--day", x.day);
    snapshot->add_option("--top", cfg.tops)->delimiter(',');

    auto* proportions = app.add_subcommand("proportions", "top-N share of total supply");
    add_store(proportions);
    proportions->add_option("--top", cfg.tops)->delimiter(',');
    proportions->add_flag("--wide", x.wide, "day,p<step>,...,p<max>");
    proportions->add_flag("--diff", x.diff, "proportion(x+step) - proportion(x)");
    proportions->add_option("--step", x.step);
    proportions->add_option("--max", x.max);

    auto* stability = app.add_subcommand("stability", "Spearman / retention ranking stability");
    add_store(stability);
    stability->add_option("--metric", metric_name, "spearman|retention");
    stability->add_option("--top", cfg.tops)->delimiter(',');
    stability->add_option("--interval", cfg.intervals)->delimiter(',');
    stability->add_option("--spearman-mode", mode_name, "intersection|penalized");
    stability->add_option("--format", cfg.format, "csv|json");

    auto* dstatic = app.add_subcommand("dstatic", "static decentralization degree");
    add_store(dstatic);
    dstatic->add_option("--top", cfg.tops)->delimiter(',');
    dstatic->add_option("--scale", cfg.dstatic_scale, "1 or 2");
    dstatic->add_option("--curve-day", x.curve_day, "emit the cumulative curve of one day");
    dstatic->add_option("--format", cfg.format, "csv|svg");

    auto* disp = app.add_subcommand("dispersion", "degree / PageRank dispersion of focus graphs");
    add_store(disp);
    disp->add_option("--focus", x.focus, "focus set size");
    disp->add_option("--metric", x.graph_metric, "degree|pagerank|both");
    disp->add_option("--damping", x.damping);
    disp->add_flag("--value-weighted", x.value_weighted);
    disp->add_option("--nodes", x.nodes_path, "per-node metric dump");

    auto* hhi_cmd = app.add_subcommand("hhi", "HHI under clustering schemes a1-a3");
    add_store(hhi_cmd);
    hhi_cmd->add_option("--scheme", scheme_names, "a1|a2|a3|all")->delimiter(',');
    hhi_cmd->add_option("--focus", x.focus);
    hhi_cmd->add_option("--community", x.community, "lpa|louvain");
    hhi_cmd->add_option("--seed", x.seed, "label propagation order seed");
    hhi_cmd->add_flag("--dhhi", x.dhhi, "emit day,d_hhi from scheme a3");
    hhi_cmd->add_option("--partition-day", x.day, "dump the clustering of one day as JSON");

    auto* rep = app.add_subcommand("report", "full pipeline: CSVs, report.json and SVG charts");
    add_store(rep);
    rep->add_option("--out-dir", cfg.out_dir);
    rep->add_option("--top", cfg.tops, "stability tops")->delimiter(',');
    rep->add_option("--interval", cfg.intervals)->delimiter(',');
    rep->add_option("--spearman-mode", mode_name);
    rep->add_option("--scale", cfg.dstatic_scale);
    rep->add_option("--step", x.step);
    rep->add_option("--max", x.max);
    rep->add_option("--focus", x.focus);
    rep->add_option("--community", x.community);
    rep->add_option("--seed", x.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        auto* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        cfg.stability_metric = parse_stability_metric(metric_name);
        cfg.spearman_mode = parse_spearman_mode(mode_name);
        for (const auto& s : scheme_names) {
            if (s == "all") {
                cfg.schemes = {ClusterScheme::a1, ClusterScheme::a2, ClusterScheme::a3};
                break;
            }
            cfg.schemes.push_back(parse_scheme(s));
        }
        if (sub == ingest && cfg.out_dir.empty()) cfg.out_dir = cfg.store;
        validate(cfg);
        const unsigned jobs = jobs_of(cfg);
        if (sub == synth) return cmd_synth(cfg, x, out);
        if (sub == ingest) return cmd_ingest(cfg, x, out, err);
        if (sub == snapshot) return cmd_snapshot(cfg, x, out);
        if (sub == proportions) return cmd_proportions(cfg, x, out);
        if (sub == stability) return cmd_stability(cfg, x, out, jobs);
        if (sub == dstatic) return cmd_dstatic(cfg, x, out, jobs);
        if (sub == disp) return cmd_dispersion(cfg, x, out, jobs);
        if (sub == hhi_cmd) return cmd_hhi(cfg, x, out);
        if (sub == rep) return cmd_report(cfg, x, out, jobs);
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ConvergenceError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ledgerlens");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ledgerlens::cli
