#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvbft::svg {

enum class Marker { Square, Circle };

/// Minimal static SVG 1.1 chart: linear axes, polylines, point markers,
/// and bars, with a legend.
class Chart {
public:
    Chart(std::string title, std::string x_label, std::string y_label, double width = 640.0,
          double height = 480.0);

    void set_x_range(double lo, double hi) { x_range_ = {lo, hi}; }
    void set_y_range(double lo, double hi) { y_range_ = {lo, hi}; }

    void add_line(std::vector<double> xs, std::vector<double> ys, std::string color,
                  std::string label);
    void add_points(std::vector<double> xs, std::vector<double> ys, std::string color,
                    Marker marker, std::string label);
    /// One bar per [edges[i], edges[i+1]) with the given height.
    void add_bars(std::vector<double> edges, std::vector<double> heights, std::string color,
                  std::string label);

    std::string render() const;

private:
    enum class Kind { Line, Points, Bars };
    struct Layer {
        Kind kind;
        std::vector<double> xs;
        std::vector<double> ys;
        std::string color;
        Marker marker = Marker::Square;
        std::string label;
    };

    std::pair<double, double> data_range(bool x_axis) const;

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    double width_;
    double height_;
    std::optional<std::pair<double, double>> x_range_;
    std::optional<std::pair<double, double>> y_range_;
    std::vector<Layer> layers_;
};

/// Distinct colors for successive series.
const std::string& palette(std::size_t index);

std::string escape(const std::string& text);

}  // namespace cvbft::svg
