#include "tamed/studies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tamed/noise.hpp"

namespace tamed {
namespace {

void check_divergence(std::size_t diverged, std::size_t total, double max_fraction) {
  if (total > 0 && static_cast<double>(diverged) > max_fraction * static_cast<double>(total)) {
    throw DivergenceError(diverged, total);
  }
}

void check_common(const SdeModel& model, const StudySetup& setup) {
  if (setup.x0.size() != model.state_dim()) {
    throw std::invalid_argument("study: x0 dimension does not match the model");
  }
  if (setup.paths < 2) throw std::invalid_argument("study: paths must be >= 2");
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Integer ratio a / b when it is one to relative precision 1e-9.
std::optional<std::size_t> integral_ratio(double a, double b) {
  const double r = a / b;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * n) return std::nullopt;
  return static_cast<std::size_t>(n);
}

// Distinct reference configurations for a list of alphas; ref_of[a] indexes refs.
struct ReferencePlan {
  std::vector<TamingConfig> refs;
  std::vector<std::size_t> ref_of;
};

ReferencePlan plan_references(const SdeModel& model, SchemeVariant variant,
                              const std::vector<double>& alphas, const StudySetup& setup) {
  ReferencePlan plan;
  for (double alpha : alphas) {
    const TamingConfig cfg =
        reference_config(model, variant, setup.alpha_ref.value_or(default_reference_alpha(alpha)));
    auto it = std::find_if(plan.refs.begin(), plan.refs.end(), [&](const TamingConfig& r) {
      return r.alpha == cfg.alpha && r.taming_exponent == cfg.taming_exponent &&
             r.variant == cfg.variant;
    });
    if (it == plan.refs.end()) {
      plan.ref_of.push_back(plan.refs.size());
      plan.refs.push_back(cfg);
    } else {
      plan.ref_of.push_back(static_cast<std::size_t>(it - plan.refs.begin()));
    }
  }
  return plan;
}

}  // namespace

DivergenceError::DivergenceError(std::size_t diverged, std::size_t total)
    : std::runtime_error(std::to_string(diverged) + " of " + std::to_string(total) +
                         " ensemble members diverged"),
      diverged_(diverged),
      total_(total) {}

TamingConfig study_config(const SdeModel& model, SchemeVariant variant, double alpha,
                          const std::optional<double>& taming_exponent) {
  const double l = model.growth_exponent();
  switch (variant) {
    case SchemeVariant::MultiplicativeTamed:
      return taming_exponent ? TamingConfig::multiplicative(alpha, l, *taming_exponent)
                             : TamingConfig::multiplicative(alpha, l);
    case SchemeVariant::AdditiveTamed:
      return TamingConfig::additive(alpha, l);
    case SchemeVariant::StandardEuler:
      break;
  }
  return TamingConfig::standard();
}

double normalization_rate(SchemeVariant variant, double alpha) {
  switch (variant) {
    case SchemeVariant::MultiplicativeTamed:
      return std::min(alpha, 0.5);
    case SchemeVariant::AdditiveTamed:
      return std::min(alpha, 1.0);
    case SchemeVariant::StandardEuler:
      break;
  }
  throw std::invalid_argument("normalization_rate: no limit theory for the standard scheme");
}

std::vector<ErrorEnsemble> compute_error_ensembles(const SdeModel& model, SchemeVariant variant,
                                                   const std::vector<double>& alphas,
                                                   const std::vector<std::size_t>& coarse_steps,
                                                   std::size_t ref_steps, const StudySetup& setup) {
  check_common(model, setup);
  if (coarse_steps.empty()) throw std::invalid_argument("study: empty step list");
  for (std::size_t n : coarse_steps) {
    if (n == 0 || ref_steps % n != 0) {
      throw std::invalid_argument("study: step count " + std::to_string(n) +
                                  " does not divide reference steps " + std::to_string(ref_steps));
    }
  }

  const TimeGrid fine(setup.horizon, ref_steps);
  const ReferencePlan plan = plan_references(model, variant, alphas, setup);
  std::vector<TamingConfig> configs;
  for (double alpha : alphas) {
    configs.push_back(study_config(model, variant, alpha, setup.taming_exponent));
    validate_config(configs.back(), model);
  }

  struct PathResult {
    std::vector<std::vector<double>> errors;  // [alpha][step]
    std::vector<bool> diverged;               // [alpha]
  };

  auto per_path = map_members(
      setup.paths,
      [&](std::size_t p) {
        const BrownianPath w =
            generate_driving_path(fine, model.noise_dim(), setup.master_seed, p);
        std::vector<SolverOutput> refs;
        refs.reserve(plan.refs.size());
        for (const auto& rc : plan.refs) refs.push_back(integrate(model, rc, fine, setup.x0, w));

        std::vector<BrownianPath> coarse;
        coarse.reserve(coarse_steps.size());
        for (std::size_t n : coarse_steps) coarse.push_back(coarsen(w, ref_steps / n));

        PathResult r;
        r.errors.assign(alphas.size(), std::vector<double>(coarse_steps.size(), 0.0));
        r.diverged.assign(alphas.size(), false);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          const SolverOutput& ref = refs[plan.ref_of[a]];
          bool bad = ref.diverged;
          for (std::size_t s = 0; s < coarse_steps.size() && !bad; ++s) {
            const SolverOutput out =
                integrate(model, configs[a], coarse[s].grid(), setup.x0, coarse[s]);
            if (out.diverged) {
              bad = true;
              break;
            }
            r.errors[a][s] = distance(out.terminal, ref.terminal);
          }
          if (bad) std::fill(r.errors[a].begin(), r.errors[a].end(), 0.0);
          r.diverged[a] = bad;
        }
        return r;
      },
      setup.execution);

  std::vector<ErrorEnsemble> out(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    ErrorEnsemble& e = out[a];
    e.alpha = alphas[a];
    e.rate = variant == SchemeVariant::StandardEuler ? (model.is_additive() ? 1.0 : 0.5)
                                                     : normalization_rate(variant, alphas[a]);
    e.coarse_steps = coarse_steps;
    e.errors.assign(coarse_steps.size(), std::vector<double>(setup.paths));
    e.diverged.assign(setup.paths, false);
    for (std::size_t p = 0; p < setup.paths; ++p) {
      e.diverged[p] = per_path[p].diverged[a];
      if (e.diverged[p]) ++e.diverged_count;
      for (std::size_t s = 0; s < coarse_steps.size(); ++s) e.errors[s][p] = per_path[p].errors[a][s];
    }
  }
  return out;
}

std::vector<OrderStudy> strong_order_studies(const SdeModel& model, SchemeVariant variant,
                                             const std::vector<double>& alphas,
                                             const std::vector<std::size_t>& coarse_steps,
                                             std::size_t ref_steps, const StudySetup& setup) {
  const auto ensembles =
      compute_error_ensembles(model, variant, alphas, coarse_steps, ref_steps, setup);
  std::vector<OrderStudy> studies;
  for (const auto& e : ensembles) {
    check_divergence(e.diverged_count, setup.paths, setup.max_divergence_fraction);
    OrderStudy st;
    st.alpha = e.alpha;
    st.diverged = e.diverged_count;
    st.paths_used = setup.paths - e.diverged_count;
    if (st.paths_used < 2) throw DivergenceError(e.diverged_count, setup.paths);

    std::vector<std::pair<double, double>> pts;
    std::vector<double> sq;
    for (std::size_t s = 0; s < e.coarse_steps.size(); ++s) {
      sq.clear();
      for (std::size_t p = 0; p < setup.paths; ++p) {
        if (!e.diverged[p]) sq.push_back(e.errors[s][p] * e.errors[s][p]);
      }
      const auto ci = mc_mean_ci(sq, 0.95);
      OrderPoint pt;
      pt.steps = e.coarse_steps[s];
      pt.h = setup.horizon / static_cast<double>(pt.steps);
      pt.mse = ci.mean;
      pt.mse_ci = ci.half_width;
      pt.rmse = std::sqrt(ci.mean);
      pt.rmse_ci = pt.rmse > 0.0 ? ci.half_width / (2.0 * pt.rmse) : 0.0;
      st.points.push_back(pt);
      pts.emplace_back(std::log2(pt.h), std::log2(pt.rmse));
    }
    st.regression = linregress(pts);
    studies.push_back(std::move(st));
  }
  return studies;
}

OrderStudy strong_order_study(const SdeModel& model, SchemeVariant variant, double alpha,
                              const std::vector<std::size_t>& coarse_steps, std::size_t ref_steps,
                              const StudySetup& setup) {
  return strong_order_studies(model, variant, {alpha}, coarse_steps, ref_steps, setup).front();
}

EvolutionStudy error_evolution_study(const SdeModel& model, SchemeVariant variant,
                                     const std::vector<double>& alphas, double h, double ref_h,
                                     const StudySetup& setup) {
  check_common(model, setup);
  if (!(h > 0.0) || !(ref_h > 0.0)) throw std::invalid_argument("evolution: steps must be positive");
  const auto coarse_steps = integral_ratio(setup.horizon, h);
  if (!coarse_steps) throw std::invalid_argument("evolution: horizon is not a multiple of h");
  const auto factor = integral_ratio(h, ref_h);
  if (!factor) throw std::invalid_argument("evolution: h is not a multiple of the reference step");

  const std::size_t n_coarse = *coarse_steps;
  const std::size_t ref_steps = n_coarse * *factor;
  const TimeGrid fine(setup.horizon, ref_steps);
  const ReferencePlan plan = plan_references(model, variant, alphas, setup);
  std::vector<TamingConfig> configs;
  for (double alpha : alphas) {
    configs.push_back(study_config(model, variant, alpha, setup.taming_exponent));
    validate_config(configs.back(), model);
  }

  struct PathResult {
    std::vector<std::vector<double>> sq;  // [alpha][j]
    std::vector<bool> diverged;
  };

  auto per_path = map_members(
      setup.paths,
      [&](std::size_t p) {
        const BrownianPath w =
            generate_driving_path(fine, model.noise_dim(), setup.master_seed, p);
        std::vector<SolverOutput> refs;
        for (const auto& rc : plan.refs) {
          refs.push_back(integrate_recorded(model, rc, fine, setup.x0, w, *factor));
        }
        const BrownianPath coarse = coarsen(w, *factor);
        PathResult r;
        r.sq.assign(alphas.size(), std::vector<double>(n_coarse + 1, 0.0));
        r.diverged.assign(alphas.size(), false);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          const SolverOutput& ref = refs[plan.ref_of[a]];
          const SolverOutput out =
              integrate(model, configs[a], coarse.grid(), setup.x0, coarse, true);
          if (ref.diverged || out.diverged) {
            r.diverged[a] = true;
            continue;
          }
          for (std::size_t j = 0; j <= n_coarse; ++j) {
            r.sq[a][j] = squared_distance(out.recorded_state(j), ref.recorded_state(j));
          }
        }
        return r;
      },
      setup.execution);

  EvolutionStudy st;
  st.coarse_steps = n_coarse;
  st.ref_factor = *factor;
  st.alphas = alphas;
  st.diverged.assign(alphas.size(), 0);
  const TimeGrid coarse_grid(setup.horizon, n_coarse);
  std::vector<double> column;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    for (const auto& r : per_path) st.diverged[a] += r.diverged[a] ? 1 : 0;
    check_divergence(st.diverged[a], setup.paths, setup.max_divergence_fraction);
    for (std::size_t j = 0; j <= n_coarse; ++j) {
      column.clear();
      for (const auto& r : per_path) {
        if (!r.diverged[a]) column.push_back(r.sq[a][j]);
      }
      if (column.size() < 2) throw DivergenceError(st.diverged[a], setup.paths);
      const auto ci = mc_mean_ci(column, 0.95);
      st.rows.push_back({coarse_grid.time(j), alphas[a], ci.mean, ci.half_width});
    }
  }
  st.paths_used = setup.paths - *std::max_element(st.diverged.begin(), st.diverged.end());
  return st;
}

bool DistributionStudy::rejected() const {
  return std::any_of(coordinates.begin(), coordinates.end(),
                     [](const CoordinateComparison& c) { return c.ks.rejected; });
}

DistributionStudy error_distribution_study(const SdeModel& model, SchemeVariant variant,
                                           double alpha, std::size_t steps,
                                           const DistributionSetup& setup) {
  const StudySetup& base = setup.base;
  check_common(model, base);
  if (base.paths < 100 || setup.limit_paths < 100) {
    throw std::invalid_argument("distribution study: paths and limit_paths must be >= 100");
  }
  if (steps == 0 || setup.ref_steps % steps != 0) {
    throw std::invalid_argument("distribution study: steps must divide ref_steps");
  }
  if (variant == SchemeVariant::AdditiveTamed && !model.is_additive()) {
    throw std::invalid_argument("distribution study: additive scheme needs an additive model");
  }

  const double rate = normalization_rate(variant, alpha);
  const double scale = std::pow(static_cast<double>(steps), rate);
  const std::size_t d = model.state_dim();
  const TimeGrid fine(base.horizon, setup.ref_steps);
  const double alpha_ref = base.alpha_ref.value_or(default_reference_alpha(alpha));
  const TamingConfig ref_cfg = reference_config(model, variant, alpha_ref);
  const TamingConfig cfg = study_config(model, variant, alpha, base.taming_exponent);
  validate_config(cfg, model);

  struct Member {
    std::vector<double> value;
    bool diverged = false;
  };

  auto sample_a = map_members(
      base.paths,
      [&](std::size_t p) {
        const BrownianPath w = generate_driving_path(fine, model.noise_dim(), base.master_seed, p);
        const SolverOutput ref = integrate(model, ref_cfg, fine, base.x0, w);
        const BrownianPath coarse = coarsen(w, setup.ref_steps / steps);
        const SolverOutput out = integrate(model, cfg, coarse.grid(), base.x0, coarse);
        Member m;
        m.diverged = ref.diverged || out.diverged;
        m.value.resize(d);
        for (std::size_t i = 0; i < d; ++i) m.value[i] = scale * (out.terminal[i] - ref.terminal[i]);
        return m;
      },
      base.execution);

  LimitConfig lc;
  lc.alpha = alpha;
  lc.horizon = base.horizon;
  lc.fine_steps = setup.limit_fine_steps;
  lc.master_seed = base.master_seed;
  lc.x0 = base.x0;
  lc.state_alpha = alpha_ref;
  if (variant == SchemeVariant::MultiplicativeTamed && base.taming_exponent) {
    lc.taming_exponent = base.taming_exponent;
  }

  auto sample_b = map_members(
      setup.limit_paths,
      [&](std::size_t p) {
        const LimitSample s = simulate_limit(model, lc, p);
        return Member{s.terminal_error, s.diverged};
      },
      base.execution);

  DistributionStudy st;
  st.alpha = alpha;
  st.rate = rate;
  st.steps = steps;
  st.ref_steps = setup.ref_steps;
  st.master_seed = base.master_seed;
  st.sample_a.assign(d, {});
  st.sample_b.assign(d, {});
  for (const auto& m : sample_a) {
    if (m.diverged) {
      ++st.diverged_a;
      continue;
    }
    for (std::size_t i = 0; i < d; ++i) st.sample_a[i].push_back(m.value[i]);
  }
  for (const auto& m : sample_b) {
    if (m.diverged) {
      ++st.diverged_b;
      continue;
    }
    for (std::size_t i = 0; i < d; ++i) st.sample_b[i].push_back(m.value[i]);
  }
  check_divergence(st.diverged_a, base.paths, base.max_divergence_fraction);
  check_divergence(st.diverged_b, setup.limit_paths, base.max_divergence_fraction);

  for (std::size_t i = 0; i < d; ++i) {
    CoordinateComparison c;
    c.coordinate = i;
    c.ks = two_sample_ks(st.sample_a[i], st.sample_b[i], setup.ks_threshold);
    c.a = sample_moments(st.sample_a[i]);
    c.b = sample_moments(st.sample_b[i]);
    st.coordinates.push_back(c);
  }
  return st;
}

}  // namespace tamed
