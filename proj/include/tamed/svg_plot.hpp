#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tamed {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  /// Embedded as an XML comment right after the root element.
  std::string metadata;
};

/// Standalone SVG 1.1 document. Non-positive values are dropped on log axes.
std::string render_line_plot(const LinePlot& plot);

/// ceil(sqrt(n)), at least 1.
std::size_t auto_bin_count(std::size_t n);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  /// Normalized so that sum(density) * width == 1 for in-range samples.
  std::vector<double> density;

  double width() const { return (hi - lo) / static_cast<double>(density.size()); }
};

/// Samples equal to hi fall in the last bin; samples outside [lo, hi] are ignored.
Histogram make_histogram(std::span<const double> samples, double lo, double hi, std::size_t bins);

/// Two density histograms on a shared range with auto_bin_count(max(n_a, n_b)) bins.
std::string render_histogram_overlay(const std::string& title, std::span<const double> a,
                                     const std::string& label_a, std::span<const double> b,
                                     const std::string& label_b, const std::string& metadata);

/// Reference line through (x0, y0) with the given log-log slope, sampled at xs.
PlotSeries slope_guide(const std::string& label, double slope, double x0, double y0,
                       std::span<const double> xs);

}  // namespace tamed
