// output.cpp — CSV and SVG emission

#include "polaron/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "polaron/errors.hpp"

namespace polaron::output {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // also folds -0
    return fmt::format("{:.9g}", value);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw NumericalError(fmt::format("CSV row has {} values for {} columns", values.size(), columns_.size()));
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 70.0;
constexpr double right = 20.0;
constexpr double top = 40.0;
constexpr double bottom = 50.0;

constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::pair<double, double> finite_range(const std::vector<double>& v) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (double x : v) {
        if (!std::isfinite(x)) continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!std::isfinite(lo)) return {0.0, 1.0};
    if (hi - lo < 1e-300) return {lo - 0.5, hi + 0.5};
    return {lo, hi};
}

} // namespace

void write_svg_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::vector<double>& x, const std::vector<Series>& series) {
    auto [x_lo, x_hi] = finite_range(x);
    std::vector<double> all_y;
    for (const auto& s : series) all_y.insert(all_y.end(), s.y.begin(), s.y.end());
    auto [y_lo, y_hi] = finite_range(all_y);

    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double v) { return top + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h; };

    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">)",
                       width, height)
        << '\n';
    out << fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="white"/>)", width, height) << '\n';
    out << fmt::format(R"(<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>)", width / 2, title) << '\n';
    out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", left, top, plot_w,
                       plot_h)
        << '\n';

    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / ticks;
        const double fy = y_lo + (y_hi - y_lo) * i / ticks;
        out << fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="black"/>)", px(fx),
                           top + plot_h, top + plot_h + 5)
            << '\n';
        out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="middle">{}</text>)", px(fx), top + plot_h + 18,
                           fmt::format("{:.3g}", fx))
            << '\n';
        out << fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{2:.2f}" y2="{1:.2f}" stroke="black"/>)", left - 5,
                           py(fy), left)
            << '\n';
        out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="end">{}</text>)", left - 8, py(fy) + 4,
                           fmt::format("{:.3g}", fy))
            << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{}</text>)", left + plot_w / 2, height - 10, x_label)
        << '\n';

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = palette[s % palette.size()];
        out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points=")", colour);
        const std::size_t n = std::min(x.size(), series[s].y.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!std::isfinite(series[s].y[k])) continue;
            out << fmt::format("{:.2f},{:.2f} ", px(x[k]), py(series[s].y[k]));
        }
        out << "\"/>\n";
        out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" fill="{}">{}</text>)", left + plot_w - 150,
                           top + 16 + 14 * static_cast<double>(s), colour, series[s].label)
            << '\n';
    }
    out << "</svg>\n";
}

} // namespace polaron::output
