#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kgsq::report {

namespace {

std::string fmt2(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f6fb2", "#c0392b", "#27824e",
                          "#8e44ad", "#b9770e", "#16757a"};

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double pix0 = 0.0, pix1 = 1.0;  // pixel range (pix0 maps lo)

    double place(double v) const {
        double t;
        if (log)
            t = (std::log10(v) - std::log10(lo)) /
                (std::log10(hi) - std::log10(lo));
        else
            t = (v - lo) / (hi - lo);
        return pix0 + t * (pix1 - pix0);
    }
    bool valid(double v) const {
        if (!std::isfinite(v)) return false;
        return !log || v > 0.0;
    }
};

std::vector<double> axis_ticks(const Axis& ax) {
    std::vector<double> ticks;
    if (ax.log) {
        int d0 = static_cast<int>(std::ceil(std::log10(ax.lo) - 1e-9));
        int d1 = static_cast<int>(std::floor(std::log10(ax.hi) + 1e-9));
        for (int d = d0; d <= d1; ++d) ticks.push_back(std::pow(10.0, d));
        if (ticks.empty()) ticks = {ax.lo, ax.hi};
    } else {
        double span = ax.hi - ax.lo;
        double raw = span / 5.0;
        double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (mag * m >= raw) { step = mag * m; break; }
        }
        double t0 = std::ceil(ax.lo / step) * step;
        for (double t = t0; t <= ax.hi + 0.5 * step; t += step)
            ticks.push_back(t);
    }
    return ticks;
}

std::string tick_label(double v, bool log) {
    char buf[48];
    if (log) {
        int d = static_cast<int>(std::lround(std::log10(v)));
        std::snprintf(buf, sizeof buf, "1e%d", d);
    } else {
        std::snprintf(buf, sizeof buf, "%.4g", v);
    }
    return buf;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory '" +
                                     p.parent_path().string() +
                                     "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::string header_block(const RunConfig& cfg, const std::string& kind,
                         const std::string& prefix) {
    std::ostringstream o;
    o << prefix << "kgsq " << kind << ", format " << kFormatVersion << "\n";
    o << prefix << "config:\n";
    std::stringstream ss(serialize_config(cfg));
    std::string line;
    while (std::getline(ss, line)) o << prefix << "  " << line << "\n";
    return o.str();
}

void write_csv(const std::string& path, const RunConfig& cfg,
               const std::string& kind, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream o;
    o << header_block(cfg, kind, "# ");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) o << ",";
        o << columns[i];
    }
    o << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::runtime_error("csv row width mismatch in '" + path + "'");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) o << ",";
            o << format_double(row[i]);
        }
        o << "\n";
    }
    write_text_file(path, o.str());
}

void write_json(const std::string& path, const RunConfig& cfg,
                const std::string& kind, const nlohmann::json& payload) {
    nlohmann::json doc;
    doc["format"] = "kgsq-json";
    doc["format_version"] = kFormatVersion;
    doc["kind"] = kind;
    std::vector<std::string> cfg_lines;
    std::stringstream ss(serialize_config(cfg));
    std::string line;
    while (std::getline(ss, line)) cfg_lines.push_back(line);
    doc["config"] = cfg_lines;
    doc["data"] = payload;
    write_text_file(path, doc.dump(2) + "\n");
}

void write_svg_plot(const std::string& path, const RunConfig& cfg,
                    const PlotSpec& spec) {
    const double W = 720, H = 480;
    const double ml = 80, mr = 24, mt = 48, mb = 56;

    // Data extent over placeable points.
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : spec.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (spec.logx && x <= 0) continue;
            if (spec.logy && y <= 0) continue;
            xlo = std::min(xlo, x); xhi = std::max(xhi, x);
            ylo = std::min(ylo, y); yhi = std::max(yhi, y);
        }
    }
    if (!(xlo <= xhi)) { xlo = spec.logx ? 0.1 : 0.0; xhi = 1.0; }
    if (!(ylo <= yhi)) { ylo = spec.logy ? 0.1 : 0.0; yhi = 1.0; }
    auto widen = [](double& lo, double& hi, bool log) {
        if (log) {
            lo = std::pow(10.0, std::log10(lo) - 0.05);
            hi = std::pow(10.0, std::log10(hi) + 0.05);
            if (hi / lo < 1.1) { lo /= 1.5; hi *= 1.5; }
        } else {
            double pad = 0.05 * (hi - lo);
            if (pad == 0) pad = (hi == 0) ? 1.0 : 0.1 * std::abs(hi);
            lo -= pad; hi += pad;
        }
    };
    widen(xlo, xhi, spec.logx);
    widen(ylo, yhi, spec.logy);

    Axis ax{xlo, xhi, spec.logx, ml, W - mr};
    Axis ay{ylo, yhi, spec.logy, H - mb, mt};  // y grows upward

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
    o << "<!--\n" << header_block(cfg, "svg-plot", "") << "-->\n";
    o << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"#ffffff\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(spec.title) << "</text>\n";

    // Frame and ticks.
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << H - mt - mb
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    for (double t : axis_ticks(ax)) {
        if (t < xlo || t > xhi) continue;
        double px = ax.place(t);
        o << "<line x1=\"" << fmt2(px) << "\" y1=\"" << H - mb << "\" x2=\""
          << fmt2(px) << "\" y2=\"" << mt
          << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        o << "<text x=\"" << fmt2(px) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          << "font-size=\"11\">" << tick_label(t, spec.logx) << "</text>\n";
    }
    for (double t : axis_ticks(ay)) {
        if (t < ylo || t > yhi) continue;
        double py = ay.place(t);
        o << "<line x1=\"" << ml << "\" y1=\"" << fmt2(py) << "\" x2=\""
          << W - mr << "\" y2=\"" << fmt2(py)
          << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        o << "<text x=\"" << ml - 6 << "\" y=\"" << fmt2(py + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          << "font-size=\"11\">" << tick_label(t, spec.logy) << "</text>\n";
    }
    o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << xml_escape(spec.xlabel) << "</text>\n";
    o << "<text x=\"20\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 20 " << (mt + H - mb) / 2
      << ")\">" << xml_escape(spec.ylabel) << "</text>\n";

    // Polylines.
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        std::string pts;
        auto flush = [&]() {
            if (!pts.empty()) {
                o << "<polyline points=\"" << pts
                  << "\" fill=\"none\" stroke=\"" << color
                  << "\" stroke-width=\"1.5\"/>\n";
                pts.clear();
            }
        };
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!ax.valid(s.x[i]) || !ay.valid(s.y[i])) { flush(); continue; }
            if (!pts.empty()) pts += " ";
            pts += fmt2(ax.place(s.x[i])) + "," + fmt2(ay.place(s.y[i]));
        }
        flush();
        // Legend entry.
        double ly = mt + 16 + 16 * static_cast<double>(si);
        o << "<line x1=\"" << W - mr - 150 << "\" y1=\"" << fmt2(ly - 4)
          << "\" x2=\"" << W - mr - 126 << "\" y2=\"" << fmt2(ly - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - mr - 120 << "\" y=\"" << fmt2(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\">"
          << xml_escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    write_text_file(path, o.str());
}

}  // namespace kgsq::report
