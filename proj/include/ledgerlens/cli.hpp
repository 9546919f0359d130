#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ledgerlens/market.hpp"
#include "ledgerlens/stability.hpp"
#include "ledgerlens/synth.hpp"
#include "ledgerlens/txgraph.hpp"

namespace ledgerlens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct RunConfig {
    std::string command;
    std::string input = "-";
    std::string store;
    std::string output = "-";
    std::string out_dir;
    std::optional<std::int32_t> from_day;
    std::optional<std::int32_t> to_day;
    std::vector<std::size_t> tops;
    std::vector<std::size_t> intervals;
    SpearmanMode spearman_mode = SpearmanMode::intersection;
    StabilityMetric stability_metric = StabilityMetric::spearman;
    int dstatic_scale = 2;
    std::vector<ClusterScheme> schemes;
    std::string format = "csv";
    unsigned jobs = 0;
};

/// Validates invariants shared by every subcommand; throws std::invalid_argument.
void validate(const RunConfig& config);

/// Runs one subcommand. Returns 0 on success, 1 on usage errors, 2 on data errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ledgerlens::cli
