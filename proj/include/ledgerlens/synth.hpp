#pragma once

#include <cstdint>
#include <string_view>

#include "ledgerlens/ledger.hpp"

namespace ledgerlens {

/// How transaction endpoints are drawn.
///  - uniform: receivers uniform over the address pool.
///  - preferential: receivers and miners weighted by (1 + balance / reward)^alpha.
///  - hub: with probability 0.8 a receiver is one of `hubs` fixed addresses.
///  - churn: with probability rho a sender moves everything to a brand-new address.
///  - equal: no transfers; every day one coinbase pays `reward` to each initial address.
enum class WealthRegime { uniform, preferential, hub, churn, equal };

WealthRegime parse_regime(std::string_view s);
std::string_view to_string(WealthRegime r);

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t days = 30;
    std::size_t txs_per_day = 100;
    std::size_t initial_addresses = 100;
    std::size_t address_growth = 5;  // new pool addresses per day
    WealthRegime regime = WealthRegime::uniform;
    double alpha = 1.0;
    std::size_t hubs = 5;
    double churn = 0.1;
    Amount reward = 50'0000'0000;
    std::size_t halving_days = 0;  // 0: constant reward
    std::size_t blocks_per_day = 6;
    std::size_t max_outputs = 3;
    Amount max_fee = 10'000;
    std::int64_t genesis_time = 1231006505;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

/// Same config, same ledger, byte for byte. Randomness comes from CounterRng(seed).
Ledger generate(const SynthConfig& config);

}  // namespace ledgerlens
