#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mixssl::eval {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal raster line plot (auto-ranged axes, grid, one color per series),
// written as an 8-bit RGB PNG. No text rendering.
void write_line_plot_png(const std::filesystem::path& path,
                         const std::vector<PlotSeries>& series, int width = 800,
                         int height = 480);

}  // namespace mixssl::eval
