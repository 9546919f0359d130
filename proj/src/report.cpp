#include "ledgerlens/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace ledgerlens::report {

std::string config_hash(std::string_view canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string number(double v) {
    if (!std::isfinite(v)) return "NA";
    if (v == 0) return "0";
    return fmt::format("{:.12g}", v);
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : "NA"; }

std::string meta_comment(std::string_view command, std::string_view hash) {
    return fmt::format("ledgerlens {} format={} config={} command={}", LEDGERLENS_VERSION, kOutputFormatVersion,
                       hash, command);
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view command, std::string_view hash,
                     const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
    out_ << "# " << meta_comment(command, hash) << '\n';
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) { return fmt::format("{:.2f}", v); }

struct Frame {
    double left = 70, right = 150, top = 40, bottom = 50;
    double w, h;
    double x0, x1, y0, y1;
    double sx(double x) const { return left + (x1 == x0 ? 0.5 : (x - x0) / (x1 - x0)) * (w - left - right); }
    double sy(double y) const { return top + (1 - (y1 == y0 ? 0.5 : (y - y0) / (y1 - y0))) * (h - top - bottom); }
};

void open_svg(std::string& s, const ChartOptions& o, std::string_view meta) {
    s += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                     o.width, o.height, o.width, o.height);
    s += fmt::format("<!-- {} -->\n", escape(meta));
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
                     o.width / 2, escape(o.title));
}

void axes(std::string& s, const Frame& f, const ChartOptions& o, bool x_ticks) {
    const double xa = f.left, xb = f.w - f.right, ya = f.top, yb = f.h - f.bottom;
    s += fmt::format("<path d=\"M{} {}V{}H{}\" fill=\"none\" stroke=\"black\"/>\n", px(xa), px(ya), px(yb), px(xb));
    for (int i = 0; i <= 5; ++i) {
        double v = f.y0 + (f.y1 - f.y0) * i / 5.0;
        double y = f.sy(v);
        s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n", px(xa), px(y), px(xb), px(y));
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                         px(xa - 6), px(y + 4), fmt::format("{:.4g}", v));
        if (x_ticks) {
            double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
            s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                             px(f.sx(xv)), px(yb + 16), fmt::format("{:.5g}", xv));
        }
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                     px((xa + xb) / 2), px(f.h - 10), escape(o.x_label));
    s += fmt::format("<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                     "transform=\"rotate(-90 16 {})\">{}</text>\n",
                     px((ya + yb) / 2), px((ya + yb) / 2), escape(o.y_label));
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const ChartOptions& o, std::string_view meta) {
    Frame f;
    f.w = o.width;
    f.h = o.height;
    bool any = false;
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            if (!any) {
                xlo = xhi = s.x[i];
                ylo = yhi = s.y[i];
                any = true;
            }
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    f.x0 = xlo;
    f.x1 = xhi;
    f.y0 = o.y_min.value_or(ylo);
    f.y1 = o.y_max.value_or(yhi);
    if (f.y0 == f.y1) {
        f.y0 -= 0.5;
        f.y1 += 0.5;
    }
    std::string out;
    open_svg(out, o, meta);
    axes(out, f, o, true);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::string path;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            path += fmt::format("{}{} {}", pen_down ? "L" : "M", px(f.sx(s.x[i])), px(f.sy(s.y[i])));
            pen_down = true;
        }
        out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", path, color);
        double ly = f.top + 14 + 16 * static_cast<double>(k);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           px(f.w - f.right + 10), px(ly), px(f.w - f.right + 28), px(ly), color);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                           px(f.w - f.right + 32), px(ly + 4), escape(s.name));
    }
    out += "</svg>\n";
    return out;
}

std::string box_plot(const std::vector<Box>& boxes, const ChartOptions& o, std::string_view meta) {
    Frame f;
    f.w = o.width;
    f.h = o.height;
    f.right = 30;
    double ylo = 0, yhi = 1;
    bool any = false;
    for (const auto& b : boxes) {
        if (!any) {
            ylo = b.stats.min;
            yhi = b.stats.max;
            any = true;
        }
        ylo = std::min(ylo, b.stats.min);
        yhi = std::max(yhi, b.stats.max);
    }
    f.x0 = 0;
    f.x1 = static_cast<double>(std::max<std::size_t>(boxes.size(), 1));
    f.y0 = o.y_min.value_or(ylo);
    f.y1 = o.y_max.value_or(yhi);
    if (f.y0 == f.y1) {
        f.y0 -= 0.5;
        f.y1 += 0.5;
    }
    std::string out;
    open_svg(out, o, meta);
    axes(out, f, o, false);
    const double slot = (f.w - f.left - f.right) / f.x1;
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& s = boxes[k].stats;
        double cx = f.left + slot * (static_cast<double>(k) + 0.5);
        double hw = slot * 0.3;
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", px(cx),
                           px(f.sy(s.whisker_low)), px(f.sy(s.q1)));
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", px(cx),
                           px(f.sy(s.q3)), px(f.sy(s.whisker_high)));
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#9ecae1\" stroke=\"black\"/>\n",
                           px(cx - hw), px(f.sy(s.q3)), px(2 * hw), px(std::max(0.0, f.sy(s.q1) - f.sy(s.q3))));
        out += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
                           px(cx - hw), px(cx + hw), px(f.sy(s.median)));
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                           px(cx), px(f.h - f.bottom + 16), escape(boxes[k].label));
    }
    out += "</svg>\n";
    return out;
}

}  // namespace ledgerlens::report
