// output.hpp — CSV and SVG emitters with a fixed number format

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polaron::output {

// 9 significant digits, lowercase exponent ("%.9g").
std::string format_number(double value);

// Numeric-only CSV: a header row followed by rows of identical width.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns);

    void comment(const std::string& text);
    void row(const std::vector<double>& values);

    std::size_t columns() const noexcept { return columns_.size(); }

private:
    std::ostream& out_;
    std::vector<std::string> columns_;
};

struct Series {
    std::string label;
    std::vector<double> y;
};

// Self-contained line chart with a fixed viewBox and axis ticks.
void write_svg_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::vector<double>& x, const std::vector<Series>& series);

} // namespace polaron::output
