#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ledgerlens/ledger.hpp"

namespace ledgerlens {

/// End-of-day holdings. `balances` is indexed by AddrId and may be shorter than the
/// address table (addresses first seen later are implicitly zero).
struct BalanceSnapshot {
    std::int32_t day = 0;
    std::vector<Amount> balances;
    Amount total_supply = 0;     // cumulative minted
    Amount cumulative_fees = 0;  // implied fees to date, held by nobody

    Amount balance(AddrId id) const { return id < balances.size() ? balances[id] : 0; }
    Amount held() const;
    std::size_t funded_count() const;
};

/// Running balance state; apply_day() advances it by exactly one day.
class BalanceState {
public:
    explicit BalanceState(const Ledger& ledger);

    /// Throws DataError naming the offending txid if any balance ends the day negative.
    void apply_day(std::size_t day);
    void apply_through(std::size_t last_day);

    std::int32_t day() const noexcept { return day_; }
    std::span<const Amount> balances() const noexcept { return balances_; }
    Amount total_supply() const noexcept { return minted_; }
    Amount cumulative_fees() const noexcept { return fees_; }
    BalanceSnapshot snapshot() const;

private:
    const Ledger* ledger_;
    std::vector<Amount> balances_;
    std::vector<std::size_t> last_debit_;
    std::vector<AddrId> touched_;
    Amount minted_ = 0;
    Amount fees_ = 0;
    std::int32_t day_ = -1;
};

/// One snapshot per day, day 0 .. last day. Memory grows with days x addresses.
std::vector<BalanceSnapshot> compute_snapshots(const Ledger& ledger);

/// Streams each end-of-day state without materialising the history.
void for_each_day(const Ledger& ledger, const std::function<void(const BalanceState&)>& visit);

struct RankEntry {
    AddrId addr;
    Amount balance;
    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/// Descending balance, ties by ascending address string. Zero balances are never ranked.
struct Ranking {
    std::int32_t day = 0;
    std::size_t n = 0;
    std::vector<RankEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
    Amount sum(std::size_t k) const;
    /// First k entries as their own ranking.
    Ranking truncated(std::size_t k) const;
};

Ranking top_n(std::span<const Amount> balances, std::int32_t day, std::size_t n, const AddressTable& addrs);
Ranking top_n(const BalanceSnapshot& snap, std::size_t n, const AddressTable& addrs);
Ranking top_n(const BalanceState& state, std::size_t n, const AddressTable& addrs);

/// Fraction of total supply held by the first n entries. Throws DataError when supply is zero.
double proportion(const Ranking& ranking, std::size_t n, Amount total_supply);
double proportion(const BalanceSnapshot& snap, std::size_t n, const AddressTable& addrs);

/// Row for one day: proportion(x + step) - proportion(x) for x = 0, step, ..., max - step.
/// `ranking` must hold at least the top `max` (fewer only if fewer funded addresses exist).
std::vector<double> proportion_diffs(const Ranking& ranking, Amount total_supply, std::size_t step,
                                     std::size_t max);
std::vector<std::vector<double>> proportion_diff_series(const std::vector<BalanceSnapshot>& snaps,
                                                        const AddressTable& addrs, std::size_t step = 100,
                                                        std::size_t max = 2000);

/// Full snapshot every `interval` days plus sparse per-day deltas in between.
class SnapshotStore {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    explicit SnapshotStore(std::size_t interval = 32) : interval_(interval ? interval : 1) {}
    static SnapshotStore build(const Ledger& ledger, std::size_t interval = 32);

    std::size_t day_count() const noexcept { return supply_.size(); }
    std::size_t interval() const noexcept { return interval_; }
    BalanceSnapshot at(std::size_t day) const;

    void write(std::ostream& out) const;
    static SnapshotStore read(std::istream& in);

private:
    struct Delta {
        AddrId addr;
        Amount change;
    };
    std::size_t interval_;
    std::vector<std::vector<Amount>> keyframes_;
    std::vector<std::vector<Delta>> deltas_;  // deltas_[d]: changes from day d-1 to d
    std::vector<Amount> supply_;
    std::vector<Amount> fees_;
};

}  // namespace ledgerlens
