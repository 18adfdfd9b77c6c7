#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chemofront {

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Standalone SVG line chart. Series with one point are drawn as a marker.
/// Output depends only on the input. Throws std::invalid_argument when
/// there is nothing to draw, x and y lengths differ, or a value is not
/// finite.
std::string render_svg(const PlotSpec& spec);
void emit_plot(const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace chemofront
