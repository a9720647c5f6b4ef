#include "diffshape/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "diffshape/format.hpp"

namespace diffshape {
namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 78.0;
constexpr double kRight = 660.0;  // legend sits to the right of this
constexpr double kTop = 56.0;
constexpr double kBottom = 480.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string px(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1-2-5 ladder step so roughly `target` ticks cover the range.
double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) step = 1.0;
    else if (norm <= 2.0) step = 2.0;
    else if (norm <= 5.0) step = 5.0;
    return step * mag;
}

std::string tick_label(double v) {
    // Tick values come from the 1-2-5 ladder, so shortest round-trip is clean.
    if (v == 0.0) return "0";  // avoid "-0"
    return format_double(v);
}

}  // namespace

std::string render_line_chart(const std::vector<SvgSeries>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label) {
    if (series.empty()) throw std::invalid_argument("svg: no series to draw");

    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (first) throw std::invalid_argument("svg: all series are empty");
    if (x_min == x_max) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if (y_min == y_max) {
        y_min -= 1.0;
        y_max += 1.0;
    }
    // Breathing room so curves do not sit on the frame.
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const auto sx = [&](double x) {
        return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
    };
    const auto sy = [&](double y) {
        return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
           px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + px((kLeft + kRight) / 2) + "\" y=\"28\" text-anchor=\"middle\" " +
           "font-family=\"sans-serif\" font-size=\"17\">" + escape(title) + "</text>\n";

    // Gridlines and ticks.
    const double x_step = nice_step(x_max - x_min, 7);
    const double y_step = nice_step(y_max - y_min, 6);
    out += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#444444\">\n";
    for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step; x += x_step) {
        const std::string xs = px(sx(x));
        out += "<line x1=\"" + xs + "\" y1=\"" + px(kTop) + "\" x2=\"" + xs + "\" y2=\"" +
               px(kBottom) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + xs + "\" y=\"" + px(kBottom + 20.0) +
               "\" text-anchor=\"middle\">" + escape(tick_label(x)) + "</text>\n";
    }
    for (double y = std::ceil(y_min / y_step) * y_step; y <= y_max + 1e-9 * y_step; y += y_step) {
        const std::string ys = px(sy(y));
        out += "<line x1=\"" + px(kLeft) + "\" y1=\"" + ys + "\" x2=\"" + px(kRight) + "\" y2=\"" +
               ys + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + px(kLeft - 10.0) + "\" y=\"" + px(sy(y) + 4.0) +
               "\" text-anchor=\"end\">" + escape(tick_label(y)) + "</text>\n";
    }
    out += "</g>\n";

    // Frame and axis labels.
    out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(kRight - kLeft) +
           "\" height=\"" + px(kBottom - kTop) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + px((kLeft + kRight) / 2) + "\" y=\"" + px(kHeight - 14.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"20\" y=\"" + px((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" " +
           "transform=\"rotate(-90 20 " + px((kTop + kBottom) / 2) + ")\">" + escape(y_label) +
           "</text>\n";

    // One polyline per series plus a legend entry.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (const auto& [x, y] : series[i].points) {
            if (!pts.empty()) pts += ' ';
            pts += px(sx(x)) + "," + px(sy(y));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";

        const double ly = kTop + 10.0 + 22.0 * static_cast<double>(i);
        out += "<line x1=\"" + px(kRight + 16.0) + "\" y1=\"" + px(ly) + "\" x2=\"" +
               px(kRight + 44.0) + "\" y2=\"" + px(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + px(kRight + 50.0) + "\" y=\"" + px(ly + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"13\">" + escape(series[i].label) +
               "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

}  // namespace diffshape
