#include "tamed/limit_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tamed/noise.hpp"
#include "tamed/philox.hpp"
#include "tamed/statistics.hpp"

namespace tamed {
namespace {

void check_x0(const SdeModel& model, const LimitConfig& cfg) {
  if (cfg.x0.size() != model.state_dim()) {
    throw std::invalid_argument("limit process: x0 dimension does not match the model");
  }
}

void prepare_trace(LimitTrace* trace, std::size_t d, const TimeGrid& grid) {
  if (!trace) return;
  trace->totals.taming_bias.assign(d, 0.0);
  trace->totals.correction.assign(d, 0.0);
  trace->totals.auxiliary.assign(d, 0.0);
  trace->times.clear();
  trace->squared_norms.clear();
  if (!trace->initial_error.empty() && trace->initial_error.size() != d) {
    throw std::invalid_argument("limit process: initial error dimension mismatch");
  }
  if (trace->record_stride && grid.steps() % trace->record_stride != 0) {
    throw std::invalid_argument("limit process: record stride must divide fine_steps");
  }
}

void record(LimitTrace* trace, const TimeGrid& grid, std::size_t n, const std::vector<double>& u) {
  if (!trace || !trace->record_stride || n % trace->record_stride != 0) return;
  double s = 0.0;
  for (double v : u) s += v * v;
  trace->times.push_back(grid.time(n));
  trace->squared_norms.push_back(s);
}

std::vector<double> initial_error(const LimitTrace* trace, std::size_t d) {
  if (trace && !trace->initial_error.empty()) return trace->initial_error;
  return std::vector<double>(d, 0.0);
}

}  // namespace

IndicatorSet multiplicative_indicators(double alpha) {
  return {alpha > 0.0 && alpha <= 0.5, false, alpha >= 0.5 && alpha <= 1.0};
}

IndicatorSet additive_indicators(double alpha) {
  return {alpha > 0.0 && alpha <= 1.0, alpha >= 1.0, alpha >= 1.0};
}

LimitSample simulate_limit_multiplicative(const SdeModel& model, const LimitConfig& cfg,
                                          std::uint64_t path_index, LimitTrace* trace) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("multiplicative limit: alpha must lie in (0, 1]");
  }
  check_x0(model, cfg);
  const std::size_t d = model.state_dim();
  const std::size_t m = model.noise_dim();
  const double l = model.growth_exponent();
  const double T = cfg.horizon;
  const TimeGrid grid(T, cfg.fine_steps);
  const double h = grid.step();
  const IndicatorSet on = multiplicative_indicators(cfg.alpha);
  const double bias_exponent = cfg.taming_exponent.value_or(2.0 * l);
  const double bias_scale = std::pow(T, cfg.alpha);
  const double aux_scale = std::sqrt(2.0 * T) / 2.0;
  prepare_trace(trace, d, grid);

  LimitSample sample;
  sample.driving_seed = derive_seed(cfg.master_seed, stream::kLimitDriving, path_index);
  sample.auxiliary_seed =
      derive_seed(cfg.auxiliary_seed.value_or(cfg.master_seed), stream::kLimitAuxiliary, path_index);
  const BrownianPath w = generate_path(grid, m, sample.driving_seed);
  std::optional<AuxiliaryNoise> w_aux;
  if (on.auxiliary) {
    w_aux = generate_auxiliary(grid, m * m, cfg.auxiliary_seed.value_or(cfg.master_seed),
                               stream::kLimitAuxiliary, path_index, stream::kLimitDriving);
  }

  const TamingConfig state_cfg =
      TamingConfig::multiplicative(cfg.state_alpha.value_or(default_reference_alpha(cfg.alpha)), l);
  EulerStepper stepper(model, state_cfg, grid);

  std::vector<double> x = cfg.x0;
  std::vector<double> u = initial_error(trace, d);
  std::vector<double> du(d), f(d), jf(d * d), g(m * d), jg(m * d * d), scratch(d);

  record(trace, grid, 0, u);
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const auto dw = w.increment(n);
    model.drift_jacobian(x, jf);
    for (std::size_t k = 0; k < m; ++k) {
      model.diffusion_col(x, k, MutVec(g.data() + k * d, d));
      model.diffusion_jacobian(x, k, MutVec(jg.data() + k * d * d, d * d));
    }

    // Linear part.
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += jf[i * d + j] * u[j];
      du[i] = s * h;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double* J = jg.data() + k * d * d;
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += J[i * d + j] * u[j];
        du[i] += s * dw[k];
      }
    }

    if (on.taming_bias) {
      model.drift(x, f);
      const double c = bias_scale * norm_power(x, bias_exponent);
      for (std::size_t i = 0; i < d; ++i) {
        double term = c * f[i] * h;
        for (std::size_t k = 0; k < m; ++k) term += c * g[k * d + i] * dw[k];
        du[i] -= term;
        if (trace) trace->totals.taming_bias[i] -= term;
      }
    }

    if (on.auxiliary) {
      const auto dwt = w_aux->increment(n);
      for (std::size_t k = 0; k < m; ++k) {
        const double* J = jg.data() + k * d * d;
        for (std::size_t v = 0; v < m; ++v) {
          const double* gv = g.data() + v * d;
          const double incr = aux_scale * dwt[k * m + v];
          for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += J[i * d + j] * gv[j];
            du[i] += s * incr;
            if (trace) trace->totals.auxiliary[i] += s * incr;
          }
        }
      }
    }

    for (std::size_t i = 0; i < d; ++i) u[i] += du[i];
    if (!stepper.step(x, dw)) {
      sample.diverged = true;
      break;
    }
    record(trace, grid, n + 1, u);
  }
  sample.terminal_error = std::move(u);
  sample.terminal_state = std::move(x);
  return sample;
}

LimitSample simulate_limit_additive(const AdditiveSdeModel& model, const LimitConfig& cfg,
                                    std::uint64_t path_index, LimitTrace* trace) {
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    throw std::invalid_argument("additive limit: alpha must be positive");
  }
  check_x0(model, cfg);
  const std::size_t d = model.state_dim();
  const std::size_t m = model.noise_dim();
  const double l = model.growth_exponent();
  const double T = cfg.horizon;
  const TimeGrid grid(T, cfg.fine_steps);
  const double h = grid.step();
  const IndicatorSet on = additive_indicators(cfg.alpha);
  const double bias_exponent = cfg.taming_exponent.value_or(effective_exponent(cfg.alpha, l));
  const double bias_scale = std::pow(T, cfg.alpha);
  const double aux_scale = T / std::sqrt(12.0);
  prepare_trace(trace, d, grid);

  LimitSample sample;
  sample.driving_seed = derive_seed(cfg.master_seed, stream::kLimitDriving, path_index);
  sample.auxiliary_seed =
      derive_seed(cfg.auxiliary_seed.value_or(cfg.master_seed), stream::kLimitAuxiliary, path_index);
  const BrownianPath w = generate_path(grid, m, sample.driving_seed);
  std::optional<AuxiliaryNoise> w_aux;
  if (on.auxiliary) {
    w_aux = generate_auxiliary(grid, m, cfg.auxiliary_seed.value_or(cfg.master_seed),
                               stream::kLimitAuxiliary, path_index, stream::kLimitDriving);
  }

  const TamingConfig state_cfg = TamingConfig::additive(cfg.state_alpha.value_or(default_reference_alpha(cfg.alpha)), l);
  EulerStepper stepper(model, state_cfg, grid);

  std::vector<std::vector<double>> sigma_cols(m, std::vector<double>(d));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < d; ++i) sigma_cols[k][i] = model.sigma_at(i, k);
  }

  std::vector<double> y = cfg.x0;
  std::vector<double> v = initial_error(trace, d);
  std::vector<double> dv(d), f(d), jf(d * d), sdw(d), sdw_aux(d), hess(d), hess_sum(d);

  auto apply_jf = [&](const std::vector<double>& vec, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += jf[i * d + j] * vec[j];
    return s;
  };

  record(trace, grid, 0, v);
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const auto dw = w.increment(n);
    model.drift_jacobian(y, jf);
    for (std::size_t i = 0; i < d; ++i) dv[i] = apply_jf(v, i) * h;

    if (on.taming_bias || on.correction) model.drift(y, f);

    if (on.taming_bias) {
      const double c = bias_scale * norm_power(y, bias_exponent);
      for (std::size_t i = 0; i < d; ++i) {
        const double term = c * f[i] * h;
        dv[i] -= term;
        if (trace) trace->totals.taming_bias[i] -= term;
      }
    }

    if (on.correction) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += model.sigma_at(i, k) * dw[k];
        sdw[i] = s;
      }
      std::fill(hess_sum.begin(), hess_sum.end(), 0.0);
      for (std::size_t k = 0; k < m; ++k) {
        model.drift_hessian_form(y, sigma_cols[k], sigma_cols[k], hess);
        for (std::size_t i = 0; i < d; ++i) hess_sum[i] += hess[i];
      }
      for (std::size_t i = 0; i < d; ++i) {
        const double term = 0.5 * T * apply_jf(f, i) * h + 0.5 * T * apply_jf(sdw, i) +
                            0.25 * T * hess_sum[i] * h;
        dv[i] -= term;
        if (trace) trace->totals.correction[i] -= term;
      }
    }

    if (on.auxiliary) {
      const auto dwa = w_aux->increment(n);
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += model.sigma_at(i, k) * dwa[k];
        sdw_aux[i] = s;
      }
      for (std::size_t i = 0; i < d; ++i) {
        const double term = aux_scale * apply_jf(sdw_aux, i);
        dv[i] -= term;
        if (trace) trace->totals.auxiliary[i] -= term;
      }
    }

    for (std::size_t i = 0; i < d; ++i) v[i] += dv[i];
    if (!stepper.step(y, dw)) {
      sample.diverged = true;
      break;
    }
    record(trace, grid, n + 1, v);
  }
  sample.terminal_error = std::move(v);
  sample.terminal_state = std::move(y);
  return sample;
}

LimitSample simulate_limit(const SdeModel& model, const LimitConfig& cfg, std::uint64_t path_index,
                           LimitTrace* trace) {
  if (model.is_additive()) {
    return simulate_limit_additive(static_cast<const AdditiveSdeModel&>(model), cfg, path_index,
                                   trace);
  }
  return simulate_limit_multiplicative(model, cfg, path_index, trace);
}

std::vector<CurvePoint> limit_mean_square_curve(const SdeModel& model, const LimitConfig& cfg,
                                                std::size_t ensemble_size, std::size_t points,
                                                const ExecutionPolicy& policy) {
  if (ensemble_size < 2) {
    throw std::invalid_argument("limit_mean_square_curve: ensemble_size must be >= 2");
  }
  if (points == 0 || cfg.fine_steps % points != 0) {
    throw std::invalid_argument("limit_mean_square_curve: points must divide fine_steps");
  }
  const std::size_t stride = cfg.fine_steps / points;
  auto runs = map_members(
      ensemble_size,
      [&](std::size_t i) {
        LimitTrace trace;
        trace.record_stride = stride;
        const auto sample = simulate_limit(model, cfg, i, &trace);
        if (sample.diverged) throw std::runtime_error("limit process diverged");
        return trace.squared_norms;
      },
      policy);

  const TimeGrid grid(cfg.horizon, cfg.fine_steps);
  std::vector<CurvePoint> curve(points + 1);
  std::vector<double> column(ensemble_size);
  for (std::size_t p = 0; p <= points; ++p) {
    for (std::size_t i = 0; i < ensemble_size; ++i) column[i] = runs[i][p];
    const auto ci = mc_mean_ci(column, 0.95);
    curve[p] = {grid.time(p * stride), ci.mean, ci.half_width, ensemble_size < kMinReliableSamples};
  }
  return curve;
}

}  // namespace tamed
