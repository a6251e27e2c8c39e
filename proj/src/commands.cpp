#include "tamed/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tamed/report.hpp"
#include "tamed/sde_model.hpp"
#include "tamed/studies.hpp"
#include "tamed/svg_plot.hpp"
#include "tamed/validation.hpp"

namespace tamed {
namespace {

std::unique_ptr<SdeModel> build_model(const RunConfig& cfg) {
  return make_builtin(cfg.model, {cfg.sigma, cfg.a, cfg.b});
}

StudySetup study_setup(const RunConfig& cfg) {
  StudySetup s;
  s.horizon = cfg.horizon.value_or(1.0);
  s.x0 = cfg.x0;
  s.paths = cfg.paths;
  s.master_seed = cfg.seed;
  s.alpha_ref = cfg.alpha_ref;
  s.taming_exponent = cfg.taming_exponent;
  s.execution.parallel = cfg.threads != 1;
  s.execution.threads = cfg.threads;
  return s;
}

Metadata metadata(const RunConfig& cfg) {
  Metadata m;
  m.command = std::string(to_string(cfg.command));
  m.config_hash = config_hash(cfg);
  m.seed = cfg.seed;
  m.extra.emplace_back("model", cfg.model);
  if (cfg.variant) m.extra.emplace_back("variant", std::string(to_string(*cfg.variant)));
  return m;
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return std::filesystem::path(cfg.out_dir) / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void warn_small_ensemble(const RunConfig& cfg, std::ostream& err) {
  if (cfg.paths < kMinReliableSamples) {
    err << "warning: " << cfg.paths << " paths; confidence intervals below " << kMinReliableSamples
        << " samples are unreliable\n";
  }
}

std::string fixed(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

}  // namespace

int cmd_converge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto model = build_model(cfg);
  const auto variant = *cfg.variant;
  warn_small_ensemble(cfg, err);
  const auto studies =
      strong_order_studies(*model, variant, cfg.alphas, cfg.steps, *cfg.ref_steps, study_setup(cfg));

  Metadata meta = metadata(cfg);
  LinePlot plot;
  plot.title = cfg.model + ", " + std::string(to_string(variant)) + " scheme";
  plot.x_label = "step size h";
  plot.y_label = "RMSE at T";
  plot.log_x = plot.log_y = true;
  plot.metadata = meta.line();

  for (const auto& st : studies) {
    Metadata m = meta;
    m.extra.emplace_back("alpha", format_real(st.alpha));
    m.extra.emplace_back("paths_used", std::to_string(st.paths_used));
    m.extra.emplace_back("diverged", std::to_string(st.diverged));
    std::ostringstream csv;
    write_order_csv(csv, m, st);
    write_file(output_path(cfg, "converge_" + format_real(st.alpha) + ".csv"), csv.str());

    PlotSeries series{"alpha=" + format_real(st.alpha), {}, false};
    std::vector<double> hs;
    for (const auto& p : st.points) {
      series.points.emplace_back(p.h, p.rmse);
      hs.push_back(p.h);
    }
    plot.series.push_back(series);

    out << "alpha=" << format_real(st.alpha) << " slope=" << fixed(st.regression.slope)
        << " r2=" << fixed(st.regression.r_squared);
    if (variant != SchemeVariant::StandardEuler) {
      const double rate = normalization_rate(variant, st.alpha);
      out << " expected=" << format_real(rate);
      if (!st.points.empty()) {
        const auto& anchor = st.points.front();
        plot.series.push_back(
            slope_guide("slope " + format_real(rate), rate, anchor.h, anchor.rmse, hs));
      }
    }
    out << " paths=" << st.paths_used << " diverged=" << st.diverged << '\n';
  }
  write_file(output_path(cfg, "converge.svg"), render_line_plot(plot));
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto model = build_model(cfg);
  const auto variant = *cfg.variant;
  warn_small_ensemble(cfg, err);
  const auto ev = error_evolution_study(*model, variant, cfg.alphas, *cfg.h, *cfg.ref_h,
                                        study_setup(cfg));
  Metadata meta = metadata(cfg);
  meta.extra.emplace_back("paths_used", std::to_string(ev.paths_used));
  std::ostringstream csv;
  write_evolution_csv(csv, meta, ev);
  write_file(output_path(cfg, "evolution.csv"), csv.str());

  LinePlot plot;
  plot.title = "MSE evolution, " + cfg.model + ", h=" + format_real(*cfg.h);
  plot.x_label = "t";
  plot.y_label = "mean-square error";
  plot.metadata = meta.line();
  for (std::size_t a = 0; a < ev.alphas.size(); ++a) {
    PlotSeries s{"alpha=" + format_real(ev.alphas[a]), {}, false};
    for (std::size_t j = 0; j <= ev.coarse_steps; ++j) s.points.emplace_back(ev.at(a, j).t, ev.at(a, j).mse);
    plot.series.push_back(std::move(s));
    const auto& last = ev.at(a, ev.coarse_steps);
    out << "alpha=" << format_real(ev.alphas[a]) << " mse(T)=" << sci(last.mse) << " ci=" << sci(last.ci)
        << " diverged=" << ev.diverged[a] << '\n';
  }
  write_file(output_path(cfg, "evolution.svg"), render_line_plot(plot));
  return kExitOk;
}

int cmd_distribution(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto model = build_model(cfg);
  const auto variant = *cfg.variant;
  warn_small_ensemble(cfg, err);
  DistributionSetup ds;
  ds.base = study_setup(cfg);
  ds.ref_steps = *cfg.ref_steps;
  ds.limit_paths = cfg.limit_paths;
  ds.limit_fine_steps = cfg.limit_steps;
  ds.ks_threshold = cfg.ks_threshold;
  const auto st = error_distribution_study(*model, variant, cfg.alphas.front(), cfg.steps.front(), ds);

  Metadata meta = metadata(cfg);
  meta.extra.emplace_back("alpha", format_real(st.alpha));
  meta.extra.emplace_back("rate", format_real(st.rate));
  meta.extra.emplace_back("steps", std::to_string(st.steps));
  meta.extra.emplace_back("limit_seed", std::to_string(st.master_seed));
  meta.extra.emplace_back("diverged_a", std::to_string(st.diverged_a));
  meta.extra.emplace_back("diverged_b", std::to_string(st.diverged_b));
  std::ostringstream csv;
  write_distribution_csv(csv, meta, st);
  write_file(output_path(cfg, "distribution.csv"), csv.str());

  for (const auto& c : st.coordinates) {
    const std::string name = st.coordinates.size() == 1
                                 ? "distribution.svg"
                                 : "distribution_" + std::to_string(c.coordinate) + ".svg";
    write_file(output_path(cfg, name),
               render_histogram_overlay(
                   cfg.model + ", alpha=" + format_real(st.alpha) + ", N=" + std::to_string(st.steps),
                   st.sample_a[c.coordinate], "normalized error", st.sample_b[c.coordinate],
                   "limit process", meta.line()));
    out << "coordinate=" << c.coordinate << " ks=" << fixed(c.ks.statistic)
        << " threshold=" << format_real(c.ks.threshold) << " mean_a=" << fixed(c.a.mean)
        << " mean_b=" << fixed(c.b.mean) << " var_a=" << fixed(c.a.variance)
        << " var_b=" << fixed(c.b.variance) << (c.ks.rejected ? " REJECTED" : "") << '\n';
  }
  return st.rejected() ? kExitKsRejected : kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto model = build_model(cfg);
  const auto mono = validate_monotonicity(*model, cfg.p0, cfg.samples, cfg.radius, cfg.seed);
  const auto deriv = validate_derivatives(*model, 200, cfg.radius, 1e-5, cfg.seed);
  auto verdict = [](const std::optional<bool>& v) {
    return v ? (*v ? "pass" : "FAIL") : "no reference constant";
  };
  out << "model " << model->name() << " (d=" << model->state_dim() << ", m=" << model->noise_dim()
      << ", l=" << format_real(model->growth_exponent()) << ")\n";
  out << "monotonicity p0=" << format_real(mono.p0) << " samples=" << mono.samples
      << " radius=" << format_real(mono.radius) << " seed=" << mono.seed << '\n';
  out << "  sampled L (monotone) = " << sci(mono.monotone_L) << "  " << verdict(mono.monotone_pass)
      << '\n';
  out << "  sampled L (growth)   = " << sci(mono.growth_L) << "  " << verdict(mono.growth_pass)
      << '\n';
  out << "derivatives " << (deriv.analytic ? "analytic" : "finite-difference")
      << " tolerance=" << format_real(deriv.tolerance) << '\n';
  for (const auto& c : deriv.checks) {
    out << "  " << c.quantity << " max_error=" << sci(c.max_error) << ' '
        << (c.passed ? "pass" : "FAIL") << '\n';
  }
  const bool ok = mono.passed() && deriv.passed();
  out << (ok ? "validation passed" : "validation FAILED") << '\n';
  return ok ? kExitOk : kExitValidation;
}

int run_command(RunConfig cfg, std::ostream& out, std::ostream& err) {
  try {
    resolve_defaults(cfg);
    validate(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    switch (cfg.command) {
      case Command::Converge: return cmd_converge(cfg, out, err);
      case Command::Evolve: return cmd_evolve(cfg, out, err);
      case Command::Distribution: return cmd_distribution(cfg, out, err);
      case Command::Validate: return cmd_validate(cfg, out, err);
    }
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace tamed
