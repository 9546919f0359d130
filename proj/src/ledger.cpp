#include "ledgerlens/ledger.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ledgerlens {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void write_json_string(std::ostream& out, std::string_view s) {
    out << nlohmann::json(std::string(s)).dump();
}

}  // namespace

AddressTable::AddressTable() {
    names_.emplace_back(kCoinbaseName);
    index_.emplace(std::string(kCoinbaseName), kCoinbase);
}

AddrId AddressTable::intern(std::string_view name) {
    auto key = std::string(name);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    auto id = static_cast<AddrId>(names_.size());
    names_.push_back(key);
    index_.emplace(std::move(key), id);
    lexical_rank_.clear();
    return id;
}

bool AddressTable::contains(std::string_view name) const {
    return index_.contains(std::string(name));
}

AddrId AddressTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw std::out_of_range(fmt::format("unknown address '{}'", name));
    return it->second;
}

void AddressTable::freeze() {
    std::vector<AddrId> order(names_.size());
    std::iota(order.begin(), order.end(), AddrId{0});
    std::sort(order.begin(), order.end(),
              [this](AddrId a, AddrId b) { return names_[a] < names_[b]; });
    lexical_rank_.assign(names_.size(), 0);
    for (std::uint32_t r = 0; r < order.size(); ++r) lexical_rank_[order[r]] = r;
}

Amount Transaction::input_total() const noexcept {
    Amount s = 0;
    for (const auto& io : inputs) s += io.value;
    return s;
}

Amount Transaction::output_total() const noexcept {
    Amount s = 0;
    for (const auto& io : outputs) s += io.value;
    return s;
}

std::size_t merge_duplicates(std::vector<TxIo>& side) {
    std::size_t merged = 0;
    std::vector<TxIo> out;
    out.reserve(side.size());
    for (const auto& io : side) {
        auto it = std::find_if(out.begin(), out.end(), [&](const TxIo& o) { return o.addr == io.addr; });
        if (it == out.end()) {
            out.push_back(io);
        } else {
            it->value += io.value;
            ++merged;
        }
    }
    side = std::move(out);
    return merged;
}

Ledger::Ledger(AddressTable addresses, std::vector<Transaction> txs, std::optional<std::int64_t> epoch)
    : addresses_(std::move(addresses)), txs_(std::move(txs)) {
    std::stable_sort(txs_.begin(), txs_.end(), [](const Transaction& a, const Transaction& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.txid < b.txid;
    });
    addresses_.freeze();

    std::int64_t anchor = epoch ? *epoch : (txs_.empty() ? 0 : txs_.front().time);
    epoch_ = floor_div(anchor, kSecondsPerDay) * kSecondsPerDay;
    if (txs_.empty()) return;
    if (txs_.front().time < epoch_)
        throw DataError(fmt::format("transaction {} precedes the configured epoch", txs_.front().txid));

    auto last_day = static_cast<std::size_t>(day_of(txs_.back().time));
    days_.assign(last_day + 1, DayRange{});
    minted_.assign(last_day + 1, 0);
    std::size_t i = 0;
    Amount minted = 0;
    for (std::size_t d = 0; d <= last_day; ++d) {
        days_[d].begin = i;
        while (i < txs_.size() && static_cast<std::size_t>(day_of(txs_[i].time)) == d) {
            if (txs_[i].is_coinbase()) minted += txs_[i].output_total();
            ++i;
        }
        days_[d].end = i;
        minted_[d] = minted;
    }
}

std::span<const Transaction> Ledger::day_transactions(std::size_t d) const {
    auto r = days_.at(d);
    return std::span<const Transaction>(txs_).subspan(r.begin, r.size());
}

std::int32_t Ledger::day_of(std::int64_t time) const {
    return static_cast<std::int32_t>(floor_div(time - epoch_, kSecondsPerDay));
}

namespace {

std::vector<TxIo> parse_side(const nlohmann::json& arr, AddressTable& addrs, std::size_t line,
                             const char* key) {
    if (!arr.is_array()) throw DataError(fmt::format("line {}: \"{}\" must be an array", line, key), line);
    std::vector<TxIo> side;
    side.reserve(arr.size());
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_number_integer())
            throw DataError(fmt::format("line {}: \"{}\" entries must be [address, integer]", line, key), line);
        const auto& name = pair[0].get_ref<const std::string&>();
        if (name.empty()) throw DataError(fmt::format("line {}: empty address", line), line);
        if (name == kCoinbaseName)
            throw DataError(fmt::format("line {}: address '{}' is reserved", line, name), line);
        Amount value = 0;
        if (pair[1].is_number_unsigned()) {
            auto u = pair[1].get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(INT64_MAX))
                throw DataError(fmt::format("line {}: value out of range", line), line);
            value = static_cast<Amount>(u);
        } else {
            value = pair[1].get<std::int64_t>();
        }
        if (value < 0) throw DataError(fmt::format("line {}: negative value {}", line, value), line);
        if (value == 0) throw DataError(fmt::format("line {}: zero value", line), line);
        side.push_back({addrs.intern(name), value});
    }
    return side;
}

Amount checked_total(const std::vector<TxIo>& side, std::size_t line) {
    Amount s = 0;
    for (const auto& io : side)
        if (__builtin_add_overflow(s, io.value, &s))
            throw DataError(fmt::format("line {}: value sum overflows", line), line);
    return s;
}

}  // namespace

Ledger parse_ledger(std::istream& in, const ParseOptions& opts) {
    AddressTable addrs;
    std::vector<Transaction> txs;
    ParseStats stats;
    std::string text;
    std::size_t line = 0;
    std::int64_t prev_time = INT64_MIN;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(fmt::format("line {}: malformed JSON ({})", line, e.what()), line);
        }
        if (!rec.is_object() || !rec.contains("txid") || !rec.contains("time") || !rec.contains("in") ||
            !rec.contains("out"))
            throw DataError(fmt::format("line {}: record needs txid, time, in, out", line), line);
        if (!rec["txid"].is_string() || !rec["time"].is_number_integer())
            throw DataError(fmt::format("line {}: txid must be a string and time an integer", line), line);

        Transaction tx;
        tx.txid = rec["txid"].get<std::string>();
        tx.time = rec["time"].get<std::int64_t>();
        tx.inputs = parse_side(rec["in"], addrs, line, "in");
        tx.outputs = parse_side(rec["out"], addrs, line, "out");
        stats.merged_duplicates += merge_duplicates(tx.inputs);
        stats.merged_duplicates += merge_duplicates(tx.outputs);
        if (tx.inputs.empty() && tx.outputs.empty())
            throw DataError(fmt::format("line {}: transaction has neither inputs nor outputs", line), line);
        Amount in_total = checked_total(tx.inputs, line);
        Amount out_total = checked_total(tx.outputs, line);
        if (!tx.is_coinbase() && in_total < out_total)
            throw DataError(fmt::format("line {}: tx {} spends {} but outputs {}", line, tx.txid, in_total,
                                        out_total),
                            line);
        if (tx.time < prev_time) ++stats.out_of_order;
        prev_time = std::max(prev_time, tx.time);
        txs.push_back(std::move(tx));
        ++stats.records;
    }
    Ledger ledger(std::move(addrs), std::move(txs), opts.epoch);
    ledger.stats = stats;
    return ledger;
}

Ledger parse_ledger_string(std::string_view text, const ParseOptions& opts) {
    std::istringstream in{std::string(text)};
    return parse_ledger(in, opts);
}

void write_record(std::ostream& out, const Transaction& tx, const AddressTable& addrs) {
    out << "{\"txid\":";
    write_json_string(out, tx.txid);
    out << ",\"time\":" << tx.time << ",\"in\":[";
    auto side = [&](const std::vector<TxIo>& ios) {
        for (std::size_t i = 0; i < ios.size(); ++i) {
            if (i) out << ',';
            out << '[';
            write_json_string(out, addrs.name(ios[i].addr));
            out << ',' << ios[i].value << ']';
        }
    };
    side(tx.inputs);
    out << "],\"out\":[";
    side(tx.outputs);
    out << "]}\n";
}

void serialize_ledger(std::ostream& out, const Ledger& ledger) {
    for (const auto& tx : ledger.transactions()) write_record(out, tx, ledger.addresses());
}

std::vector<Edge> expand_edges(const Transaction& tx, std::size_t tx_index, std::int32_t day) {
    auto distinct = [](const std::vector<TxIo>& side) {
        std::vector<AddrId> ids;
        ids.reserve(side.size());
        for (const auto& io : side)
            if (std::find(ids.begin(), ids.end(), io.addr) == ids.end()) ids.push_back(io.addr);
        return ids;
    };
    std::vector<AddrId> from = tx.is_coinbase() ? std::vector<AddrId>{kCoinbase} : distinct(tx.inputs);
    std::vector<AddrId> to = distinct(tx.outputs);
    std::vector<Edge> edges;
    edges.reserve(from.size() * to.size());
    for (AddrId f : from)
        for (AddrId t : to) edges.push_back({f, t, tx_index, day});
    return edges;
}

}  // namespace ledgerlens
