#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"

namespace kgsq::report {

inline constexpr int kFormatVersion = 1;

// Writes `content` to `path`, creating parent directories.  Throws
// std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

std::string format_double(double x);  // %.17g

// Lines of the standard header block: format version plus the full config,
// each line prefixed with `prefix` (e.g. "# " for CSV).
std::string header_block(const RunConfig& cfg, const std::string& kind,
                         const std::string& prefix);

// CSV: header block as '#' comment lines, then a column-name row, then one
// row per entry.  '.' decimal separator, '\n' line endings.
void write_csv(const std::string& path, const RunConfig& cfg,
               const std::string& kind, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// JSON: wraps `payload` with format/kind/config fields and writes it
// pretty-printed.  Keys are emitted in sorted order, so output is stable.
void write_json(const std::string& path, const RunConfig& cfg,
                const std::string& kind, const nlohmann::json& payload);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<Series> series;
};

// Self-contained SVG polyline plot; the config echo rides in an XML comment.
// Points that cannot be placed (non-positive on a log axis, non-finite) are
// dropped from their polyline.
void write_svg_plot(const std::string& path, const RunConfig& cfg,
                    const PlotSpec& spec);

}  // namespace kgsq::report
