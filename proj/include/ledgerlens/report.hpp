#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlens/stability.hpp"

namespace ledgerlens::report {

inline constexpr int kOutputFormatVersion = 1;

/// FNV-1a 64-bit of a canonical config string, as 16 hex digits.
std::string config_hash(std::string_view canonical);

/// Shortest round-trip-stable rendering used in every CSV/JSON output ("NA" for empty).
std::string number(double v);
std::string number(const std::optional<double>& v);

/// CSV with a leading "# ledgerlens <version> format=<n> config=<hash> command=<cmd>" line.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::string_view command, std::string_view hash,
              const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t width_;
};

std::string meta_comment(std::string_view command, std::string_view hash);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartOptions {
    std::string title;
    std::string x_label = "day";
    std::string y_label;
    std::optional<double> y_min;
    std::optional<double> y_max;
    int width = 800;
    int height = 420;
};

/// Line chart; an XML comment carries the metadata header.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& opts, std::string_view meta);

struct Box {
    std::string label;
    DistributionSummary stats;
};
std::string box_plot(const std::vector<Box>& boxes, const ChartOptions& opts, std::string_view meta);

}  // namespace ledgerlens::report
