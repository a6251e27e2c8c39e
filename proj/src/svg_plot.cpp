#include "tamed/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tamed {
namespace {

constexpr double kWidth = 680.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

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

// Comments may not contain "--".
std::string comment_safe(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '-' && !out.empty() && out.back() == '-') out += ' ';
    out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Axis {
  bool log = false;
  double lo = 0.0;  // in transformed units
  double hi = 1.0;

  double transform(double v) const { return log ? std::log10(v) : v; }

  void fit(double a, double b) {
    lo = a;
    hi = b;
    if (!(hi > lo)) {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }

  // Tick values in data units.
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(lo); e <= hi + 1e-12; e += 1.0) out.push_back(std::pow(10.0, e));
      if (out.size() < 2) {
        out.clear();
        for (double e = std::ceil(lo / std::log10(2.0)); e * std::log10(2.0) <= hi; e += 1.0)
          out.push_back(std::pow(2.0, e));
      }
      return out;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      step = m * mag;
      if (step >= raw) break;
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step)
      out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
  }
};

struct Frame {
  Axis x;
  Axis y;
  double px(double v) const {
    return kLeft + (x.transform(v) - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight);
  }
  double py(double v) const {
    return kHeight - kBottom - (y.transform(v) - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom);
  }
};

void open_document(std::ostringstream& s, const std::string& metadata, const std::string& title) {
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  if (!metadata.empty()) s << "<!-- " << comment_safe(metadata) << " -->\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\""
    << " font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream& s, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
    << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : f.x.ticks()) {
    const double p = f.px(t);
    s << "<line x1=\"" << num(p) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(p) << "\" y2=\""
      << num(y0 + 5) << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << num(p) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(p) << "\" y2=\""
      << num(y1) << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << num(p) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t) << "</text>\n";
  }
  for (double t : f.y.ticks()) {
    const double p = f.py(t);
    s << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(p) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(p) << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << num(x0) << "\" y1=\"" << num(p) << "\" x2=\"" << num(x1) << "\" y2=\""
      << num(p) << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(p + 4) << "\" text-anchor=\"end\">"
      << tick_label(t) << "</text>\n";
  }
  s << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label) << "</text>\n";
  s << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
    << " transform=\"rotate(-90 18 " << num((y0 + y1) / 2) << ")\">" << escape(y_label)
    << "</text>\n";
  s << "</g>\n";
}

void draw_legend(std::ostringstream& s, const std::vector<std::pair<std::string, bool>>& entries) {
  const double x = kWidth - kRight + 14;
  double y = kTop + 10;
  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    s << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 24)
      << "\" y2=\"" << num(y) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (entries[i].second ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    s << "<text x=\"" << num(x + 30) << "\" y=\"" << num(y + 4) << "\">"
      << escape(entries[i].first) << "</text>\n";
    y += 18;
  }
  s << "</g>\n";
}

}  // namespace

std::string render_line_plot(const LinePlot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!plot.log_x || x > 0) && (!plot.log_y || y > 0);
  };
  for (const auto& series : plot.series) {
    for (auto [x, y] : series.points) {
      if (!usable(x, y)) continue;
      const double tx = plot.log_x ? std::log10(x) : x;
      const double ty = plot.log_y ? std::log10(y) : y;
      xmin = std::min(xmin, tx);
      xmax = std::max(xmax, tx);
      ymin = std::min(ymin, ty);
      ymax = std::max(ymax, ty);
    }
  }
  if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;

  Frame f;
  f.x.log = plot.log_x;
  f.y.log = plot.log_y;
  f.x.fit(xmin, xmax);
  f.y.fit(ymin, ymax);

  std::ostringstream s;
  open_document(s, plot.metadata, plot.title);
  draw_axes(s, f, plot.x_label, plot.y_label);
  std::vector<std::pair<std::string, bool>> legend;
  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& series = plot.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (series.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    bool first = true;
    for (auto [x, y] : series.points) {
      if (!usable(x, y)) continue;
      s << (first ? "" : " ") << num(f.px(x)) << ',' << num(f.py(y));
      first = false;
    }
    s << "\"/>\n";
    if (!series.dashed && series.points.size() <= 32) {
      for (auto [x, y] : series.points) {
        if (!usable(x, y)) continue;
        s << "<circle cx=\"" << num(f.px(x)) << "\" cy=\"" << num(f.py(y)) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
      }
    }
    legend.emplace_back(series.label, series.dashed);
  }
  draw_legend(s, legend);
  s << "</svg>\n";
  return s.str();
}

std::size_t auto_bin_count(std::size_t n) {
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::max<std::size_t>(bins, 1);
}

Histogram make_histogram(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  if (!(hi > lo)) throw std::invalid_argument("histogram range must satisfy hi > lo");
  Histogram h{lo, hi, std::vector<double>(bins, 0.0)};
  const double w = h.width();
  std::size_t used = 0;
  for (double v : samples) {
    if (!(v >= lo && v <= hi)) continue;
    auto b = static_cast<std::size_t>((v - lo) / w);
    if (b >= bins) b = bins - 1;
    h.density[b] += 1.0;
    ++used;
  }
  if (used > 0) {
    for (double& d : h.density) d /= static_cast<double>(used) * w;
  }
  return h;
}

std::string render_histogram_overlay(const std::string& title, std::span<const double> a,
                                     const std::string& label_a, std::span<const double> b,
                                     const std::string& label_b, const std::string& metadata) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto sample : {a, b}) {
    for (double v : sample) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const std::size_t bins = auto_bin_count(std::max(a.size(), b.size()));
  const Histogram ha = make_histogram(a, lo, hi, bins);
  const Histogram hb = make_histogram(b, lo, hi, bins);
  double peak = 0.0;
  for (const auto* h : {&ha, &hb})
    for (double d : h->density) peak = std::max(peak, d);

  Frame f;
  f.x.fit(lo, hi);
  f.y.lo = 0.0;
  f.y.hi = peak > 0 ? 1.08 * peak : 1.0;

  std::ostringstream s;
  open_document(s, metadata, title);
  draw_axes(s, f, "value", "density");
  const Histogram* hs[] = {&ha, &hb};
  for (std::size_t k = 0; k < 2; ++k) {
    const char* color = kPalette[k];
    const Histogram& h = *hs[k];
    for (std::size_t i = 0; i < h.density.size(); ++i) {
      if (h.density[i] <= 0.0) continue;
      const double x0 = f.px(h.lo + static_cast<double>(i) * h.width());
      const double x1 = f.px(h.lo + static_cast<double>(i + 1) * h.width());
      const double y = f.py(h.density[i]);
      s << "<rect x=\"" << num(x0) << "\" y=\"" << num(y) << "\" width=\"" << num(x1 - x0)
        << "\" height=\"" << num(f.py(0.0) - y) << "\" fill=\"" << color
        << "\" fill-opacity=\"0.35\" stroke=\"" << color << "\" stroke-width=\"0.5\"/>\n";
    }
  }
  draw_legend(s, {{label_a + " (n=" + std::to_string(a.size()) + ")", false},
                  {label_b + " (n=" + std::to_string(b.size()) + ")", false}});
  s << "</svg>\n";
  return s.str();
}

PlotSeries slope_guide(const std::string& label, double slope, double x0, double y0,
                       std::span<const double> xs) {
  PlotSeries guide{label, {}, true};
  for (double x : xs) guide.points.emplace_back(x, y0 * std::pow(x / x0, slope));
  return guide;
}

}  // namespace tamed
