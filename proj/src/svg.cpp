#include "cvbft/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cvbft::svg {

namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::fabs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

// Tick positions at a 1/2/5 step covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (span / step <= 6.0) break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        ticks.push_back(t);
    }
    return ticks;
}

}  // namespace

const std::string& palette(std::size_t index) {
    static const std::array<std::string, 8> colors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    return colors[index % colors.size()];
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
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

Chart::Chart(std::string title, std::string x_label, std::string y_label, double width,
             double height)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)),
      width_(width),
      height_(height) {}

void Chart::add_line(std::vector<double> xs, std::vector<double> ys, std::string color,
                     std::string label) {
    layers_.push_back({Kind::Line, std::move(xs), std::move(ys), std::move(color), Marker::Square,
                       std::move(label)});
}

void Chart::add_points(std::vector<double> xs, std::vector<double> ys, std::string color,
                       Marker marker, std::string label) {
    layers_.push_back(
        {Kind::Points, std::move(xs), std::move(ys), std::move(color), marker, std::move(label)});
}

void Chart::add_bars(std::vector<double> edges, std::vector<double> heights, std::string color,
                     std::string label) {
    layers_.push_back({Kind::Bars, std::move(edges), std::move(heights), std::move(color),
                       Marker::Square, std::move(label)});
}

std::pair<double, double> Chart::data_range(bool x_axis) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& layer : layers_) {
        const auto& values = x_axis ? layer.xs : layer.ys;
        for (double v : values) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (!x_axis && layer.kind == Kind::Bars) {
            lo = std::min(lo, 0.0);
        }
    }
    if (!std::isfinite(lo)) {
        return {0.0, 1.0};
    }
    if (lo == hi) {
        return {lo - 0.5, hi + 0.5};
    }
    return {lo, hi};
}

std::string Chart::render() const {
    const auto [x_lo, x_hi] = x_range_.value_or(data_range(true));
    const auto [y_lo, y_hi] = y_range_.value_or(data_range(false));
    const double plot_w = width_ - kMarginLeft - kMarginRight;
    const double plot_h = height_ - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto sy = [&](double y) { return kMarginTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h; };

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_)
      << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' '
      << num(height_) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_)
      << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << num(width_ / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title_) << "</text>\n";

    s << "<defs><clipPath id=\"plot\"><rect x=\"" << num(kMarginLeft) << "\" y=\""
      << num(kMarginTop) << "\" width=\"" << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\"/></clipPath></defs>\n";

    // Axes and ticks.
    s << "<g stroke=\"#333\" fill=\"none\">\n";
    s << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h) << "\"/>\n";
    s << "</g>\n<g fill=\"#333\">\n";
    for (double t : nice_ticks(x_lo, x_hi)) {
        const double px = sx(t);
        s << "<line x1=\"" << num(px) << "\" y1=\"" << num(kMarginTop + plot_h) << "\" x2=\""
          << num(px) << "\" y2=\"" << num(kMarginTop + plot_h + 5) << "\" stroke=\"#333\"/>\n";
        s << "<text x=\"" << num(px) << "\" y=\"" << num(kMarginTop + plot_h + 18)
          << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t : nice_ticks(y_lo, y_hi)) {
        const double py = sy(t);
        s << "<line x1=\"" << num(kMarginLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\""
          << num(kMarginLeft) << "\" y2=\"" << num(py) << "\" stroke=\"#333\"/>\n";
        s << "<text x=\"" << num(kMarginLeft - 8) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
    }
    s << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\"" << num(height_ - 12)
      << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
    s << "<text transform=\"translate(18," << num(kMarginTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_) << "</text>\n";
    s << "</g>\n";

    s << "<g clip-path=\"url(#plot)\">\n";
    for (const auto& layer : layers_) {
        switch (layer.kind) {
            case Kind::Bars:
                for (std::size_t i = 0; i + 1 < layer.xs.size() && i < layer.ys.size(); ++i) {
                    const double left = sx(layer.xs[i]);
                    const double right = sx(layer.xs[i + 1]);
                    const double top = sy(layer.ys[i]);
                    const double base = sy(std::max(y_lo, 0.0));
                    s << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
                      << num(std::max(0.0, right - left)) << "\" height=\""
                      << num(std::max(0.0, base - top)) << "\" fill=\"" << layer.color
                      << "\" fill-opacity=\"0.6\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
                }
                break;
            case Kind::Line: {
                s << "<polyline fill=\"none\" stroke=\"" << layer.color
                  << "\" stroke-width=\"2\" points=\"";
                for (std::size_t i = 0; i < layer.xs.size() && i < layer.ys.size(); ++i) {
                    if (!std::isfinite(layer.ys[i])) continue;
                    s << num(sx(layer.xs[i])) << ',' << num(sy(layer.ys[i])) << ' ';
                }
                s << "\"/>\n";
                break;
            }
            case Kind::Points:
                for (std::size_t i = 0; i < layer.xs.size() && i < layer.ys.size(); ++i) {
                    const double px = sx(layer.xs[i]);
                    const double py = sy(layer.ys[i]);
                    if (layer.marker == Marker::Circle) {
                        s << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py)
                          << "\" r=\"4\" fill=\"none\" stroke=\"" << layer.color << "\"/>\n";
                    } else {
                        s << "<rect x=\"" << num(px - 3.5) << "\" y=\"" << num(py - 3.5)
                          << "\" width=\"7\" height=\"7\" fill=\"" << layer.color << "\"/>\n";
                    }
                }
                break;
        }
    }
    s << "</g>\n";

    // Legend
    double ly = kMarginTop + 10;
    const double lx = kMarginLeft + plot_w + 12;
    for (const auto& layer : layers_) {
        if (layer.label.empty()) continue;
        if (layer.kind == Kind::Line) {
            s << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20)
              << "\" y2=\"" << num(ly) << "\" stroke=\"" << layer.color
              << "\" stroke-width=\"2\"/>\n";
        } else if (layer.kind == Kind::Points && layer.marker == Marker::Circle) {
            s << "<circle cx=\"" << num(lx + 10) << "\" cy=\"" << num(ly)
              << "\" r=\"4\" fill=\"none\" stroke=\"" << layer.color << "\"/>\n";
        } else {
            s << "<rect x=\"" << num(lx + 5) << "\" y=\"" << num(ly - 5)
              << "\" width=\"10\" height=\"10\" fill=\"" << layer.color << "\"/>\n";
        }
        s << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\">"
          << escape(layer.label) << "</text>\n";
        ly += 20;
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace cvbft::svg
