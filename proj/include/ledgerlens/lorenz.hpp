#pragma once

#include <cstdint>
#include <vector>

#include "ledgerlens/balance.hpp"

namespace ledgerlens {

/// Cumulative share of the top-N total held by the top-x addresses, x = 1..N.
/// Positions past the end of the ranking hold zero.
struct CumulativeCurve {
    std::int32_t day = 0;
    std::size_t n = 0;
    std::vector<Amount> cumulative;  // cumulative[x-1] = sum of the x largest balances
    Amount total = 0;                // cumulative[n-1]

    double real(std::size_t x) const { return static_cast<double>(cumulative[x - 1]) / static_cast<double>(total); }
    double equal(std::size_t x) const { return static_cast<double>(x) / static_cast<double>(n); }
};

/// Throws DataError when the ranking is empty or sums to zero.
CumulativeCurve cumulative_curve(const Ranking& ranking, std::size_t n);

/// 1 - scale * A with A = (1/N) sum_x (C_r(x) - x/N). With scale 2 this is 1 - Gini of the
/// top-N balances; scale 1 is the unscaled area form.
double d_static(const CumulativeCurve& curve, int scale = 2);

}  // namespace ledgerlens
