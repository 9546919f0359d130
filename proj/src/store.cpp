#include "ledgerlens/store.hpp"

#include <cstring>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ledgerlens::store {

namespace {

constexpr char kMagic[8] = {'L', 'L', 'L', 'E', 'D', 'G', 'E', 'R'};

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ostream& out, std::string_view s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <class T>
T get(std::istream& in) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("truncated ledger store");
    return v;
}

std::string get_string(std::istream& in) {
    std::string s(get<std::uint32_t>(in), '\0');
    if (!in.read(s.data(), static_cast<std::streamsize>(s.size()))) throw DataError("truncated ledger store");
    return s;
}

void put_side(std::ostream& out, const std::vector<TxIo>& side) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(side.size()));
    for (const auto& io : side) {
        put<std::uint32_t>(out, io.addr);
        put<std::int64_t>(out, io.value);
    }
}

std::vector<TxIo> get_side(std::istream& in, std::size_t address_count) {
    std::vector<TxIo> side(get<std::uint32_t>(in));
    for (auto& io : side) {
        io.addr = get<std::uint32_t>(in);
        io.value = get<std::int64_t>(in);
        if (io.addr >= address_count) throw DataError("ledger store references an unknown address");
    }
    return side;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write {}", p.string()));
    return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot read {}", p.string()));
    return in;
}

}  // namespace

void write_ledger(std::ostream& out, const Ledger& ledger) {
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kLedgerFormatVersion);
    put<std::int64_t>(out, ledger.epoch());
    const auto& addrs = ledger.addresses();
    put<std::uint64_t>(out, addrs.size());
    for (AddrId a = 0; a < addrs.size(); ++a) put_string(out, addrs.name(a));
    put<std::uint64_t>(out, ledger.transactions().size());
    for (const auto& tx : ledger.transactions()) {
        put_string(out, tx.txid);
        put<std::int64_t>(out, tx.time);
        put_side(out, tx.inputs);
        put_side(out, tx.outputs);
    }
    put<std::uint64_t>(out, ledger.stats.records);
    put<std::uint64_t>(out, ledger.stats.out_of_order);
    put<std::uint64_t>(out, ledger.stats.merged_duplicates);
}

Ledger read_ledger(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw DataError("not a ledger store");
    if (auto v = get<std::uint32_t>(in); v != kLedgerFormatVersion)
        throw DataError(fmt::format("unsupported ledger store version {}", v));
    auto epoch = get<std::int64_t>(in);
    AddressTable addrs;
    auto n_addr = get<std::uint64_t>(in);
    for (std::uint64_t a = 0; a < n_addr; ++a) {
        auto name = get_string(in);
        if (a == 0) {
            if (name != kCoinbaseName) throw DataError("ledger store lacks the COINBASE slot");
            continue;
        }
        if (addrs.intern(name) != a) throw DataError("ledger store has duplicate addresses");
    }
    std::vector<Transaction> txs(get<std::uint64_t>(in));
    for (auto& tx : txs) {
        tx.txid = get_string(in);
        tx.time = get<std::int64_t>(in);
        tx.inputs = get_side(in, n_addr);
        tx.outputs = get_side(in, n_addr);
    }
    ParseStats stats;
    stats.records = get<std::uint64_t>(in);
    stats.out_of_order = get<std::uint64_t>(in);
    stats.merged_duplicates = get<std::uint64_t>(in);
    Ledger ledger(std::move(addrs), std::move(txs), epoch);
    ledger.stats = stats;
    return ledger;
}

void save(const std::filesystem::path& dir, const Ledger& ledger, std::size_t snapshot_interval) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "ledger.bin");
        write_ledger(out, ledger);
    }
    auto snaps = SnapshotStore::build(ledger, snapshot_interval);
    {
        auto out = open_out(dir / "snapshots.bin");
        snaps.write(out);
    }
    nlohmann::ordered_json meta;
    meta["tool"] = "ledgerlens";
    meta["version"] = LEDGERLENS_VERSION;
    meta["ledger_format"] = kLedgerFormatVersion;
    meta["snapshot_format"] = SnapshotStore::kFormatVersion;
    meta["snapshot_interval"] = snaps.interval();
    meta["transactions"] = ledger.transactions().size();
    meta["addresses"] = ledger.addresses().size() - 1;
    meta["days"] = ledger.day_count();
    meta["epoch"] = ledger.epoch();
    meta["total_minted"] = ledger.total_minted();
    meta["out_of_order_records"] = ledger.stats.out_of_order;
    meta["merged_duplicates"] = ledger.stats.merged_duplicates;
    auto out = open_out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

Ledger load(const std::filesystem::path& dir) {
    auto in = open_in(dir / "ledger.bin");
    return read_ledger(in);
}

SnapshotStore load_snapshots(const std::filesystem::path& dir) {
    auto in = open_in(dir / "snapshots.bin");
    return SnapshotStore::read(in);
}

}  // namespace ledgerlens::store
