#include "ledgerlens/lorenz.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace ledgerlens {

CumulativeCurve cumulative_curve(const Ranking& ranking, std::size_t n) {
    if (n == 0) throw std::invalid_argument("curve size must be >= 1");
    if (ranking.empty()) throw DataError(fmt::format("day {}: empty ranking has no curve", ranking.day));
    CumulativeCurve c{ranking.day, n, std::vector<Amount>(n, 0), 0};
    Amount run = 0;
    for (std::size_t x = 0; x < n; ++x) {
        if (x < ranking.size()) run += ranking.entries[x].balance;
        c.cumulative[x] = run;
    }
    if (run <= 0) throw DataError(fmt::format("day {}: top-{} holds nothing", ranking.day, n));
    c.total = run;
    return c;
}

double d_static(const CumulativeCurve& curve, int scale) {
    if (scale != 1 && scale != 2) throw std::invalid_argument("scale must be 1 or 2");
    const auto n = static_cast<double>(curve.n);
    const auto total = static_cast<double>(curve.total);
    // sum_x x/N = (N + 1) / 2, subtracted once to keep the sum well conditioned
    long double acc = 0;
    for (std::size_t x = 1; x <= curve.n; ++x) acc += static_cast<long double>(curve.cumulative[x - 1]);
    long double area = (acc / total - (n + 1.0L) / 2.0L) / n;
    return static_cast<double>(1.0L - static_cast<long double>(scale) * area);
}

}  // namespace ledgerlens
