#pragma once

#include <string>
#include <vector>

#include <fmt/format.h>

#include "ledgerlens/balance.hpp"
#include "ledgerlens/ledger.hpp"

namespace fixtures {

// 2009-01-03 00:00:00 UTC
inline constexpr std::int64_t kDay0 = 1230940800;
inline constexpr ledgerlens::Amount kCoin = 100'000'000;

inline std::string coinbase(const std::string& txid, std::int64_t time, const std::string& to, ledgerlens::Amount v) {
    return fmt::format(R"({{"txid":"{}","time":{},"in":[],"out":[["{}",{}]]}})", txid, time, to, v) + "\n";
}

inline std::string pay(const std::string& txid, std::int64_t time, const std::string& from, ledgerlens::Amount in,
                       const std::string& to, ledgerlens::Amount out, ledgerlens::Amount change = 0) {
    std::string outs = fmt::format(R"(["{}",{}])", to, out);
    if (change) outs += fmt::format(R"(,["{}",{}])", from, change);
    return fmt::format(R"({{"txid":"{}","time":{},"in":[["{}",{}]],"out":[{}]}})", txid, time, from, in, outs) +
           "\n";
}

inline std::int64_t at(int day, int second = 3600) { return kDay0 + day * 86400LL + second; }

// n funded addresses with the given balances on day 0, nothing after.
inline std::string funded(const std::vector<ledgerlens::Amount>& balances, const std::string& prefix = "addr") {
    std::string text;
    for (std::size_t i = 0; i < balances.size(); ++i)
        text += coinbase(fmt::format("cb{}", i), at(0, static_cast<int>(i)), fmt::format("{}{:04d}", prefix, i),
                         balances[i]);
    return text;
}

inline ledgerlens::Ranking ranking_of(const std::vector<ledgerlens::Amount>& balances,
                                      const ledgerlens::AddressTable& table, std::int32_t day = 0) {
    std::vector<ledgerlens::Amount> full(table.size(), 0);
    for (std::size_t i = 0; i < balances.size(); ++i) full[i + 1] = balances[i];
    return ledgerlens::top_n(full, day, balances.size(), table);
}

inline ledgerlens::AddressTable table_of(std::size_t n) {
    ledgerlens::AddressTable t;
    for (std::size_t i = 0; i < n; ++i) t.intern(fmt::format("addr{:04d}", i));
    t.freeze();
    return t;
}

}  // namespace fixtures
