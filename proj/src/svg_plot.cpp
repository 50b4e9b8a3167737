#include "mcasim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "mcasim/errors.hpp"

namespace mcasim {
namespace {

constexpr int kMarginLeft = 84;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 56;

const char* const kPalette[] = {"#1f6fb2", "#c23b22", "#2e8b57", "#8a2be2", "#b8860b"};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_line_plot(const PlotLayout& layout, const std::vector<PlotSeries>& series) {
    if (series.empty()) throw usage_error("render_line_plot: no series");
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    bool first = true;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw usage_error("render_line_plot: series '" + s.label + "' has mismatched x/y");
        if (s.x.empty()) throw usage_error("render_line_plot: series '" + s.label + "' is empty");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                first = false;
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    // Degenerate spans still need a finite scale to land points mid-plot.
    if (x_max - x_min < 1e-300) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    const double y_pad = (y_max - y_min < 1e-300) ? std::max(1e-12, std::abs(y_max)) * 0.5 + 0.5
                                                  : (y_max - y_min) * 0.05;
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = layout.width - kMarginLeft - kMarginRight;
    const double plot_h = layout.height - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(layout.width) +
           "\" height=\"" + std::to_string(layout.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(layout.width / 2.0, "%.1f") +
           "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
           escape_xml(layout.title) + "</text>\n";

    // Frame and ticks: five divisions per axis, labels at %.6g.
    svg += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(kMarginTop) +
           "\" width=\"" + fmt(plot_w, "%.1f") + "\" height=\"" + fmt(plot_h, "%.1f") +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = x_min + (x_max - x_min) * t / 5.0;
        const double fy = y_min + (y_max - y_min) * t / 5.0;
        const double gx = px(fx), gy = py(fy);
        svg += "<line x1=\"" + fmt(gx, "%.1f") + "\" y1=\"" + fmt(kMarginTop + plot_h, "%.1f") +
               "\" x2=\"" + fmt(gx, "%.1f") + "\" y2=\"" +
               fmt(kMarginTop + plot_h + 6.0, "%.1f") + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(gx, "%.1f") + "\" y=\"" + fmt(kMarginTop + plot_h + 20.0, "%.1f") +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + fmt(fx) +
               "</text>\n";
        svg += "<line x1=\"" + fmt(kMarginLeft - 6.0, "%.1f") + "\" y1=\"" + fmt(gy, "%.1f") +
               "\" x2=\"" + std::to_string(kMarginLeft) + "\" y2=\"" + fmt(gy, "%.1f") +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(kMarginLeft - 10.0, "%.1f") + "\" y=\"" + fmt(gy + 4.0, "%.1f") +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fmt(fy) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2.0, "%.1f") + "\" y=\"" +
           std::to_string(layout.height - 12) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
           escape_xml(layout.x_label) + "</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt(kMarginTop + plot_h / 2.0, "%.1f") +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 " +
           fmt(kMarginTop + plot_h / 2.0, "%.1f") + ")\">" + escape_xml(layout.y_label) +
           "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!points.empty()) points += ' ';
            points += fmt(px(s.x[i]), "%.2f") + "," + fmt(py(s.y[i]), "%.2f");
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(si);
        svg += "<line x1=\"" + fmt(kMarginLeft + plot_w - 130.0, "%.1f") + "\" y1=\"" +
               fmt(ly - 4.0, "%.1f") + "\" x2=\"" + fmt(kMarginLeft + plot_w - 106.0, "%.1f") +
               "\" y2=\"" + fmt(ly - 4.0, "%.1f") + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(kMarginLeft + plot_w - 100.0, "%.1f") + "\" y=\"" +
               fmt(ly, "%.1f") + "\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape_xml(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void write_line_plot(const std::string& path, const PlotLayout& layout,
                     const std::vector<PlotSeries>& series) {
    const std::string body = render_line_plot(layout, series);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("write_line_plot: cannot open '" + path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw config_error("write_line_plot: write to '" + path + "' failed");
}

}  // namespace mcasim
