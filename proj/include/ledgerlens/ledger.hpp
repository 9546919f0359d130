#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ledgerlens {

/// Value in base units (satoshi). Never floating point inside the ledger.
using Amount = std::int64_t;

/// Dense interned address handle. Id 0 is always the COINBASE pseudo-address.
using AddrId = std::uint32_t;

inline constexpr AddrId kCoinbase = 0;
inline constexpr std::string_view kCoinbaseName = "COINBASE";
inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Raised for malformed or inconsistent ledger data. `line` is 1-based, 0 if n/a.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Byte-exact string interning. Lexical ranks are available after freeze().
class AddressTable {
public:
    AddressTable();

    AddrId intern(std::string_view name);
    std::string_view name(AddrId id) const { return names_[id]; }
    std::size_t size() const noexcept { return names_.size(); }
    bool contains(std::string_view name) const;
    /// Throws std::out_of_range when unknown.
    AddrId find(std::string_view name) const;

    /// Computes the byte-order rank of every address; used for deterministic tie breaks.
    void freeze();
    std::uint32_t lexical_rank(AddrId id) const { return lexical_rank_[id]; }
    bool frozen() const noexcept { return lexical_rank_.size() == names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, AddrId> index_;
    std::vector<std::uint32_t> lexical_rank_;
};

struct TxIo {
    AddrId addr;
    Amount value;
    friend bool operator==(const TxIo&, const TxIo&) = default;
};

struct Transaction {
    std::string txid;
    std::int64_t time = 0;
    std::vector<TxIo> inputs;
    std::vector<TxIo> outputs;

    bool is_coinbase() const noexcept { return inputs.empty(); }
    Amount input_total() const noexcept;
    Amount output_total() const noexcept;
    /// Minted amount for coinbase, implied fee otherwise.
    Amount fee() const noexcept { return is_coinbase() ? 0 : input_total() - output_total(); }
};

/// Half-open transaction index range of one UTC day.
struct DayRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
    bool empty() const noexcept { return begin == end; }
    friend bool operator==(const DayRange&, const DayRange&) = default;
};

struct Edge {
    AddrId from;
    AddrId to;
    std::size_t tx;  // index into the ledger's transaction list
    std::int32_t day;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct ParseOptions {
    /// Day 0 starts at the UTC midnight at or before this instant. Unset: first transaction.
    std::optional<std::int64_t> epoch;
};

struct ParseStats {
    std::size_t records = 0;
    std::size_t out_of_order = 0;   // records whose timestamp went backwards
    std::size_t merged_duplicates = 0;
};

/// Immutable after construction. Transactions are ordered by (time, txid).
class Ledger {
public:
    Ledger() = default;
    Ledger(AddressTable addresses, std::vector<Transaction> txs, std::optional<std::int64_t> epoch = {});

    const AddressTable& addresses() const noexcept { return addresses_; }
    std::span<const Transaction> transactions() const noexcept { return txs_; }
    const Transaction& tx(std::size_t i) const { return txs_[i]; }

    std::size_t day_count() const noexcept { return days_.size(); }
    DayRange day(std::size_t d) const { return days_.at(d); }
    std::span<const Transaction> day_transactions(std::size_t d) const;
    std::int32_t day_of(std::int64_t time) const;
    /// UTC midnight timestamp of day 0.
    std::int64_t epoch() const noexcept { return epoch_; }
    std::int64_t genesis_time() const noexcept { return txs_.empty() ? epoch_ : txs_.front().time; }

    /// Cumulative minted supply at the end of each day.
    const std::vector<Amount>& minted_by_day() const noexcept { return minted_; }
    Amount total_minted() const noexcept { return minted_.empty() ? 0 : minted_.back(); }

    ParseStats stats;

private:
    AddressTable addresses_;
    std::vector<Transaction> txs_;
    std::vector<DayRange> days_;
    std::vector<Amount> minted_;
    std::int64_t epoch_ = 0;
};

/// Reads JSON-lines records; see README for the schema.
Ledger parse_ledger(std::istream& in, const ParseOptions& opts = {});
Ledger parse_ledger_string(std::string_view text, const ParseOptions& opts = {});

/// Canonical form: one record per line, keys in txid/time/in/out order, no spaces.
void write_record(std::ostream& out, const Transaction& tx, const AddressTable& addrs);
void serialize_ledger(std::ostream& out, const Ledger& ledger);

/// One edge per (distinct input address, distinct output address); coinbase edges start at COINBASE.
std::vector<Edge> expand_edges(const Transaction& tx, std::size_t tx_index = 0, std::int32_t day = 0);

/// Merges repeated addresses on one side, summing values. Keeps first-occurrence order.
std::size_t merge_duplicates(std::vector<TxIo>& side);

}  // namespace ledgerlens
