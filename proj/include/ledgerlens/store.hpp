#pragma once

#include <filesystem>
#include <iosfwd>

#include "ledgerlens/balance.hpp"
#include "ledgerlens/ledger.hpp"

namespace ledgerlens {

/// On-disk store directory:
///   ledger.bin     parsed ledger, versioned binary
///   snapshots.bin  SnapshotStore (keyframes + daily deltas)
///   meta.json      counts, parse statistics, format versions
namespace store {

inline constexpr std::uint32_t kLedgerFormatVersion = 1;

void write_ledger(std::ostream& out, const Ledger& ledger);
Ledger read_ledger(std::istream& in);

void save(const std::filesystem::path& dir, const Ledger& ledger, std::size_t snapshot_interval = 32);
Ledger load(const std::filesystem::path& dir);
SnapshotStore load_snapshots(const std::filesystem::path& dir);

}  // namespace store
}  // namespace ledgerlens
