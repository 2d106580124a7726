#include "mixssl/eval/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixssl/core/errors.hpp"
#include "mixssl/data/image_io.hpp"

namespace mixssl::eval {

namespace {

struct Canvas {
  data::ImageTensor img;
  int w, h;

  Canvas(int width, int height) : img(data::ImageTensor::zeros(3, height, width)), w(width), h(height) {
    img.pixels().fill(1.0f);  // white
  }

  void put(int x, int y, float r, float g, float b) {
    if (x < 0 || x >= w || y < 0 || y >= h) return;
    img.at(0, y, x) = r;
    img.at(1, y, x) = g;
    img.at(2, y, x) = b;
  }

  void line(int x0, int y0, int x1, int y1, float r, float g, float b) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      put(x0, y0, r, g, b);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
};

constexpr float kPalette[6][3] = {
    {0.12f, 0.35f, 0.80f}, {0.85f, 0.25f, 0.10f}, {0.10f, 0.60f, 0.25f},
    {0.70f, 0.15f, 0.70f}, {0.90f, 0.60f, 0.05f}, {0.20f, 0.20f, 0.20f},
};

}  // namespace

void write_line_plot_png(const std::filesystem::path& path,
                         const std::vector<PlotSeries>& series, int width, int height) {
  if (series.empty()) throw InvalidInput("write_line_plot_png: no series");
  double xmin = std::numeric_limits<double>::max(), xmax = std::numeric_limits<double>::lowest();
  double ymin = xmin, ymax = xmax;
  bool any = false;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InvalidInput("plot series length mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
      any = true;
    }
  }
  if (!any) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  const int margin = 24;
  Canvas canvas(width, height);
  const int px0 = margin, px1 = width - margin, py0 = height - margin, py1 = margin;

  auto map_x = [&](double v) {
    return px0 + static_cast<int>(std::lround((v - xmin) / (xmax - xmin) * (px1 - px0)));
  };
  auto map_y = [&](double v) {
    return py0 - static_cast<int>(std::lround((v - ymin) / (ymax - ymin) * (py0 - py1)));
  };

  for (int g = 0; g <= 4; ++g) {
    const int gx = px0 + (px1 - px0) * g / 4;
    const int gy = py1 + (py0 - py1) * g / 4;
    canvas.line(gx, py0, gx, py1, 0.88f, 0.88f, 0.88f);
    canvas.line(px0, gy, px1, gy, 0.88f, 0.88f, 0.88f);
  }
  canvas.line(px0, py0, px1, py0, 0.0f, 0.0f, 0.0f);
  canvas.line(px0, py0, px0, py1, 0.0f, 0.0f, 0.0f);

  for (size_t s = 0; s < series.size(); ++s) {
    const auto& col = kPalette[s % 6];
    const auto& sr = series[s];
    for (size_t i = 1; i < sr.x.size(); ++i) {
      if (!std::isfinite(sr.y[i - 1]) || !std::isfinite(sr.y[i])) continue;
      canvas.line(map_x(sr.x[i - 1]), map_y(sr.y[i - 1]), map_x(sr.x[i]), map_y(sr.y[i]), col[0],
                  col[1], col[2]);
    }
    // Legend swatch in the top-left corner.
    const int ly = py1 + 6 + static_cast<int>(s) * 8;
    canvas.line(px0 + 6, ly, px0 + 26, ly, col[0], col[1], col[2]);
  }

  data::write_png(path, canvas.img);
}

}  // namespace mixssl::eval
