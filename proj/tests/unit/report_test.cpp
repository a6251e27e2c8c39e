#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "tamed/report.hpp"
#include "tamed/svg_plot.hpp"

using namespace tamed;

TEST(Report, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Report, MetadataLine) {
  Metadata m{"converge", 0xabcULL, 42, {{"model", "quintic-mult"}}};
  EXPECT_EQ(m.line(), "# tamed " + std::string(kVersion) +
                          " command=converge config_hash=0000000000000abc seed=42 model=quintic-mult");
}

TEST(Report, RealFormattingRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) EXPECT_EQ(std::stod(format_real(v)), v);
  EXPECT_EQ(format_real(0.25), "0.25");
}

TEST(Report, OrderCsv) {
  OrderStudy st;
  st.alpha = 0.5;
  st.points.push_back({64, 1.0 / 64, 0.04, 0.004, 0.2, 0.01});
  std::ostringstream out;
  write_order_csv(out, {"converge", 1, 2, {}}, st);
  std::istringstream in(out.str());
  std::string meta, header, row;
  std::getline(in, meta);
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(meta.rfind("# tamed", 0), 0u);
  EXPECT_EQ(header, "h,rmse,ci,steps,mse,mse_ci");
  EXPECT_EQ(row, "0.015625,0.2,0.01,64,0.04,0.004");
}

TEST(Report, EvolutionAndDistributionHeaders) {
  std::ostringstream ev, dist;
  write_evolution_csv(ev, {"evolve", 1, 2, {}}, EvolutionStudy{});
  write_distribution_csv(dist, {"distribution", 1, 2, {}}, DistributionStudy{});
  EXPECT_NE(ev.str().find("\nt,alpha,mse,ci\n"), std::string::npos);
  EXPECT_NE(dist.str().find("\ncoordinate,ks,n_a,n_b,mean_a,mean_b,var_a,var_b\n"), std::string::npos);
}

TEST(Svg, AutoBins) {
  EXPECT_EQ(auto_bin_count(0), 1u);
  EXPECT_EQ(auto_bin_count(100), 10u);
  EXPECT_EQ(auto_bin_count(101), 11u);
  EXPECT_EQ(auto_bin_count(2000), 45u);
}

TEST(Svg, HistogramIsDensity) {
  const std::vector<double> s{0.0, 0.1, 0.5, 0.9, 1.0, 5.0};
  const auto h = make_histogram(s, 0.0, 1.0, 4);
  double mass = 0.0;
  for (double d : h.density) mass += d * h.width();
  EXPECT_NEAR(mass, 1.0, 1e-15);
  EXPECT_NEAR(h.density[0], 2.0 / 5.0 / 0.25, 1e-15);
  EXPECT_NEAR(h.density[3], 2.0 / 5.0 / 0.25, 1e-15);
  EXPECT_THROW(make_histogram(s, 1.0, 1.0, 4), std::invalid_argument);
}

TEST(Svg, LinePlotDocument) {
  LinePlot p;
  p.title = "a < b & c";
  p.log_x = p.log_y = true;
  p.metadata = "# tamed x--y";
  p.series.push_back({"alpha=0.5", {{1.0 / 64, 0.1}, {1.0 / 128, 0.07}, {0.0, 1.0}}, false});
  const std::vector<double> xs{1.0 / 64, 1.0 / 128};
  p.series.push_back(slope_guide("slope 0.5", 0.5, 1.0 / 64, 0.1, xs));
  const auto svg = render_line_plot(p);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_EQ(svg.find("x--y"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NEAR(p.series[1].points[1].second, 0.1 * std::sqrt(0.5), 1e-15);
}

TEST(Svg, HistogramOverlay) {
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) a.push_back(i * 0.01), b.push_back(i * 0.02);
  const auto svg = render_histogram_overlay("t", a, "errors", b, "limit", "# meta");
  EXPECT_NE(svg.find("errors (n=100)"), std::string::npos);
  EXPECT_NE(svg.find("<!-- # meta -->"), std::string::npos);
}
