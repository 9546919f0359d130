#include "ledgerlens/balance.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace ledgerlens {

Amount BalanceSnapshot::held() const {
    Amount s = 0;
    for (Amount b : balances) s += b;
    return s;
}

std::size_t BalanceSnapshot::funded_count() const {
    return static_cast<std::size_t>(std::count_if(balances.begin(), balances.end(), [](Amount b) { return b > 0; }));
}

BalanceState::BalanceState(const Ledger& ledger)
    : ledger_(&ledger),
      balances_(ledger.addresses().size(), 0),
      last_debit_(ledger.addresses().size(), 0) {}

void BalanceState::apply_day(std::size_t day) {
    if (static_cast<std::int64_t>(day) != day_ + 1)
        throw std::logic_error(fmt::format("apply_day({}) after day {}", day, day_));
    auto range = ledger_->day(day);
    touched_.clear();
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const auto& tx = ledger_->tx(i);
        for (const auto& io : tx.inputs) {
            balances_[io.addr] -= io.value;
            last_debit_[io.addr] = i;
            touched_.push_back(io.addr);
        }
        for (const auto& io : tx.outputs) balances_[io.addr] += io.value;
        if (tx.is_coinbase())
            minted_ += tx.output_total();
        else
            fees_ += tx.fee();
    }
    // Only end-of-day state is observable; intra-day ordering is not checked.
    for (AddrId a : touched_)
        if (balances_[a] < 0)
            throw DataError(fmt::format("transaction {} drives address {} negative ({}) on day {}",
                                        ledger_->tx(last_debit_[a]).txid, ledger_->addresses().name(a),
                                        balances_[a], day));
    day_ = static_cast<std::int32_t>(day);
}

void BalanceState::apply_through(std::size_t last_day) {
    for (auto d = static_cast<std::size_t>(day_ + 1); d <= last_day; ++d) apply_day(d);
}

BalanceSnapshot BalanceState::snapshot() const {
    return BalanceSnapshot{day_, balances_, minted_, fees_};
}

std::vector<BalanceSnapshot> compute_snapshots(const Ledger& ledger) {
    std::vector<BalanceSnapshot> out;
    out.reserve(ledger.day_count());
    for_each_day(ledger, [&](const BalanceState& s) { out.push_back(s.snapshot()); });
    return out;
}

void for_each_day(const Ledger& ledger, const std::function<void(const BalanceState&)>& visit) {
    BalanceState state(ledger);
    for (std::size_t d = 0; d < ledger.day_count(); ++d) {
        state.apply_day(d);
        visit(state);
    }
}

Amount Ranking::sum(std::size_t k) const {
    Amount s = 0;
    for (std::size_t i = 0; i < std::min(k, entries.size()); ++i) s += entries[i].balance;
    return s;
}

Ranking Ranking::truncated(std::size_t k) const {
    Ranking r{day, k, {}};
    r.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(std::min(k, entries.size())));
    return r;
}

Ranking top_n(std::span<const Amount> balances, std::int32_t day, std::size_t n, const AddressTable& addrs) {
    if (n == 0) throw std::invalid_argument("top_n requires n >= 1");
    std::vector<RankEntry> funded;
    for (AddrId a = 0; a < balances.size(); ++a)
        if (balances[a] > 0) funded.push_back({a, balances[a]});
    auto before = [&addrs](const RankEntry& x, const RankEntry& y) {
        if (x.balance != y.balance) return x.balance > y.balance;
        return addrs.lexical_rank(x.addr) < addrs.lexical_rank(y.addr);
    };
    if (funded.size() > n) {
        std::nth_element(funded.begin(), funded.begin() + static_cast<std::ptrdiff_t>(n), funded.end(), before);
        funded.resize(n);
    }
    std::sort(funded.begin(), funded.end(), before);
    return Ranking{day, n, std::move(funded)};
}

Ranking top_n(const BalanceSnapshot& snap, std::size_t n, const AddressTable& addrs) {
    return top_n(snap.balances, snap.day, n, addrs);
}

Ranking top_n(const BalanceState& state, std::size_t n, const AddressTable& addrs) {
    return top_n(state.balances(), state.day(), n, addrs);
}

double proportion(const Ranking& ranking, std::size_t n, Amount total_supply) {
    if (total_supply <= 0)
        throw DataError(fmt::format("proportion undefined on day {}: no supply minted yet", ranking.day));
    return static_cast<double>(ranking.sum(n)) / static_cast<double>(total_supply);
}

double proportion(const BalanceSnapshot& snap, std::size_t n, const AddressTable& addrs) {
    return proportion(top_n(snap, n, addrs), n, snap.total_supply);
}

std::vector<double> proportion_diffs(const Ranking& ranking, Amount total_supply, std::size_t step,
                                     std::size_t max) {
    if (step == 0 || max % step != 0) throw std::invalid_argument("step must divide max");
    if (total_supply <= 0)
        throw DataError(fmt::format("proportion undefined on day {}: no supply minted yet", ranking.day));
    std::vector<double> row;
    row.reserve(max / step);
    const auto total = static_cast<double>(total_supply);
    for (std::size_t x = 0; x < max; x += step)
        row.push_back(static_cast<double>(ranking.sum(x + step) - ranking.sum(x)) / total);
    return row;
}

std::vector<std::vector<double>> proportion_diff_series(const std::vector<BalanceSnapshot>& snaps,
                                                        const AddressTable& addrs, std::size_t step,
                                                        std::size_t max) {
    std::vector<std::vector<double>> rows;
    rows.reserve(snaps.size());
    for (const auto& s : snaps) {
        if (s.total_supply <= 0) {
            rows.emplace_back();
            continue;
        }
        rows.push_back(proportion_diffs(top_n(s, max, addrs), s.total_supply, step, max));
    }
    return rows;
}

SnapshotStore SnapshotStore::build(const Ledger& ledger, std::size_t interval) {
    SnapshotStore store(interval);
    std::vector<Amount> prev(ledger.addresses().size(), 0);
    for_each_day(ledger, [&](const BalanceState& s) {
        auto day = static_cast<std::size_t>(s.day());
        auto cur = s.balances();
        if (day % store.interval_ == 0) store.keyframes_.emplace_back(cur.begin(), cur.end());
        std::vector<Delta> delta;
        auto range = ledger.day(day);
        std::vector<AddrId> touched;
        for (std::size_t i = range.begin; i < range.end; ++i) {
            for (const auto& io : ledger.tx(i).inputs) touched.push_back(io.addr);
            for (const auto& io : ledger.tx(i).outputs) touched.push_back(io.addr);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (AddrId a : touched)
            if (cur[a] != prev[a]) {
                delta.push_back({a, cur[a] - prev[a]});
                prev[a] = cur[a];
            }
        store.deltas_.push_back(std::move(delta));
        store.supply_.push_back(s.total_supply());
        store.fees_.push_back(s.cumulative_fees());
    });
    return store;
}

BalanceSnapshot SnapshotStore::at(std::size_t day) const {
    if (day >= day_count()) throw std::out_of_range(fmt::format("no snapshot for day {}", day));
    std::size_t key = day / interval_;
    BalanceSnapshot snap;
    snap.day = static_cast<std::int32_t>(day);
    snap.balances = keyframes_[key];
    for (std::size_t d = key * interval_ + 1; d <= day; ++d)
        for (const auto& [addr, change] : deltas_[d]) snap.balances[addr] += change;
    snap.total_supply = supply_[day];
    snap.cumulative_fees = fees_[day];
    return snap;
}

namespace {

constexpr char kMagic[8] = {'L', 'L', 'S', 'N', 'A', 'P', '\0', '\0'};

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("truncated snapshot store");
    return v;
}

}  // namespace

void SnapshotStore::write(std::ostream& out) const {
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kFormatVersion);
    put<std::uint64_t>(out, interval_);
    put<std::uint64_t>(out, day_count());
    for (std::size_t d = 0; d < day_count(); ++d) {
        put<std::int64_t>(out, supply_[d]);
        put<std::int64_t>(out, fees_[d]);
        put<std::uint64_t>(out, deltas_[d].size());
        for (const auto& [addr, change] : deltas_[d]) {
            put<std::uint32_t>(out, addr);
            put<std::int64_t>(out, change);
        }
    }
    put<std::uint64_t>(out, keyframes_.size());
    for (const auto& k : keyframes_) {
        put<std::uint64_t>(out, k.size());
        out.write(reinterpret_cast<const char*>(k.data()), static_cast<std::streamsize>(k.size() * sizeof(Amount)));
    }
}

SnapshotStore SnapshotStore::read(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw DataError("not a snapshot store");
    if (auto v = get<std::uint32_t>(in); v != kFormatVersion)
        throw DataError(fmt::format("unsupported snapshot store version {}", v));
    SnapshotStore s(get<std::uint64_t>(in));
    auto days = get<std::uint64_t>(in);
    for (std::uint64_t d = 0; d < days; ++d) {
        s.supply_.push_back(get<std::int64_t>(in));
        s.fees_.push_back(get<std::int64_t>(in));
        auto n = get<std::uint64_t>(in);
        std::vector<Delta> delta(n);
        for (auto& e : delta) {
            e.addr = get<std::uint32_t>(in);
            e.change = get<std::int64_t>(in);
        }
        s.deltas_.push_back(std::move(delta));
    }
    auto keys = get<std::uint64_t>(in);
    for (std::uint64_t k = 0; k < keys; ++k) {
        std::vector<Amount> frame(get<std::uint64_t>(in));
        if (!in.read(reinterpret_cast<char*>(frame.data()), static_cast<std::streamsize>(frame.size() * sizeof(Amount))))
            throw DataError("truncated snapshot store");
        s.keyframes_.push_back(std::move(frame));
    }
    return s;
}

}  // namespace ledgerlens
