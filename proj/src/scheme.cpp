#include "tamed/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tamed {

std::string_view to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::MultiplicativeTamed:
      return "multiplicative";
    case SchemeVariant::AdditiveTamed:
      return "additive";
    case SchemeVariant::StandardEuler:
      return "standard";
  }
  return "unknown";
}

double effective_exponent(double alpha, double l) { return std::ceil(2.0 * alpha) * l; }

TamingConfig TamingConfig::multiplicative(double alpha, double growth_exponent) {
  return multiplicative(alpha, growth_exponent,
                        std::max(2.0 * growth_exponent, effective_exponent(alpha, growth_exponent)));
}

TamingConfig TamingConfig::multiplicative(double alpha, double, double taming_exponent) {
  return {alpha, taming_exponent, SchemeVariant::MultiplicativeTamed};
}

TamingConfig TamingConfig::additive(double alpha, double growth_exponent) {
  return {alpha, effective_exponent(alpha, growth_exponent), SchemeVariant::AdditiveTamed};
}

TamingConfig TamingConfig::standard() { return {0.0, 0.0, SchemeVariant::StandardEuler}; }

void validate_config(const TamingConfig& cfg, const SdeModel& model) {
  if (cfg.variant == SchemeVariant::StandardEuler) return;
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    throw std::invalid_argument("taming: alpha must be positive");
  }
  const double l = model.growth_exponent();
  const double required = effective_exponent(cfg.alpha, l);
  if (cfg.variant == SchemeVariant::MultiplicativeTamed) {
    if (cfg.taming_exponent < required) {
      throw std::invalid_argument("taming: multiplicative exponent " +
                                  std::to_string(cfg.taming_exponent) + " below ceil(2 alpha) l = " +
                                  std::to_string(required));
    }
  } else {
    if (!model.is_additive()) {
      throw std::invalid_argument("taming: additive scheme requires constant diffusion");
    }
    if (std::abs(cfg.taming_exponent - required) > 1e-12 * std::max(1.0, required)) {
      throw std::invalid_argument("taming: additive exponent must equal ceil(2 alpha) l = " +
                                  std::to_string(required));
    }
  }
}

double norm_power(std::span<const double> x, double p) {
  if (p == 0.0) return 1.0;
  double n2 = 0.0;
  for (double v : x) n2 += v * v;
  const double half = 0.5 * p;
  if (half == std::floor(half) && half <= 64.0) {
    // Even integer power: (|x|^2)^(p/2) by squaring.
    auto e = static_cast<unsigned>(half);
    double result = 1.0, base = n2;
    while (e) {
      if (e & 1u) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }
  return std::pow(std::sqrt(n2), p);
}

double taming_denominator(const TamingConfig& cfg, const TimeGrid& grid,
                          std::span<const double> x) {
  if (cfg.variant == SchemeVariant::StandardEuler) return 1.0;
  return 1.0 + std::pow(grid.step(), cfg.alpha) * norm_power(x, cfg.taming_exponent);
}

std::vector<double> tame_drift(const SdeModel& model, const TamingConfig& cfg, const TimeGrid& grid,
                               std::span<const double> x) {
  auto f = model.drift(x);
  const double denom = taming_denominator(cfg, grid, x);
  for (auto& v : f) v /= denom;
  return f;
}

std::vector<double> tame_diffusion(const SdeModel& model, const TamingConfig& cfg,
                                   const TimeGrid& grid, std::span<const double> x,
                                   std::size_t k) {
  auto g = model.diffusion_col(x, k);
  if (cfg.variant == SchemeVariant::AdditiveTamed) return g;
  const double denom = taming_denominator(cfg, grid, x);
  for (auto& v : g) v /= denom;
  return g;
}

std::size_t SolverOutput::recorded_points() const {
  return terminal.empty() ? 0 : path.size() / terminal.size();
}

std::span<const double> SolverOutput::recorded_state(std::size_t i) const {
  const std::size_t d = terminal.size();
  return {path.data() + i * d, d};
}

EulerStepper::EulerStepper(const SdeModel& model, const TamingConfig& cfg, const TimeGrid& grid)
    : model_(model),
      cfg_(cfg),
      h_(grid.step()),
      h_alpha_(cfg.variant == SchemeVariant::StandardEuler ? 0.0 : std::pow(grid.step(), cfg.alpha)),
      tame_drift_(cfg.variant != SchemeVariant::StandardEuler),
      tame_diffusion_(cfg.variant == SchemeVariant::MultiplicativeTamed),
      f_(model.state_dim()),
      g_(model.state_dim()),
      next_(model.state_dim()) {}

bool EulerStepper::step(std::span<double> x, std::span<const double> dw) {
  const std::size_t d = x.size();
  const double denom = tame_drift_ ? 1.0 + h_alpha_ * norm_power(x, cfg_.taming_exponent) : 1.0;
  const double diffusion_denom = tame_diffusion_ ? denom : 1.0;

  model_.drift(x, f_);
  for (std::size_t i = 0; i < d; ++i) next_[i] = x[i] + h_ * (f_[i] / denom);
  for (std::size_t k = 0; k < dw.size(); ++k) {
    model_.diffusion_col(x, k, g_);
    for (std::size_t i = 0; i < d; ++i) next_[i] += (g_[i] / diffusion_denom) * dw[k];
  }

  double n2 = 0.0;
  for (double v : next_) n2 += v * v;
  if (!std::isfinite(n2) || n2 > kOverflowNorm * kOverflowNorm) return false;
  std::copy(next_.begin(), next_.end(), x.begin());
  return true;
}

SolverOutput integrate_recorded(const SdeModel& model, const TamingConfig& cfg,
                                const TimeGrid& grid, std::span<const double> x0,
                                const BrownianPath& path, std::size_t record_stride) {
  if (x0.size() != model.state_dim()) {
    throw std::invalid_argument("integrate: x0 has dimension " + std::to_string(x0.size()) +
                                ", model expects " + std::to_string(model.state_dim()));
  }
  if (path.dim() != model.noise_dim()) {
    throw std::invalid_argument("integrate: path has dimension " + std::to_string(path.dim()) +
                                ", model expects " + std::to_string(model.noise_dim()));
  }
  if (!(path.grid() == grid)) throw std::invalid_argument("integrate: path grid mismatch");
  if (record_stride != 0 && grid.steps() % record_stride != 0) {
    throw std::invalid_argument("integrate: record stride must divide the step count");
  }
  validate_config(cfg, model);

  SolverOutput out;
  out.record_stride = record_stride;
  std::vector<double> x(x0.begin(), x0.end());
  if (record_stride) {
    out.path.reserve((grid.steps() / record_stride + 1) * x.size());
    out.path.insert(out.path.end(), x.begin(), x.end());
  }

  EulerStepper stepper(model, cfg, grid);
  const std::size_t n_steps = grid.steps();
  for (std::size_t n = 0; n < n_steps; ++n) {
    if (!out.diverged) {
      if (stepper.step(x, path.increment(n))) {
        ++out.steps_taken;
      } else {
        out.diverged = true;
      }
    }
    if (record_stride && (n + 1) % record_stride == 0) {
      out.path.insert(out.path.end(), x.begin(), x.end());
    }
  }
  out.terminal = std::move(x);
  return out;
}

SolverOutput integrate(const SdeModel& model, const TamingConfig& cfg, const TimeGrid& grid,
                       std::span<const double> x0, const BrownianPath& path, bool keep_path) {
  return integrate_recorded(model, cfg, grid, x0, path, keep_path ? 1 : 0);
}

TamingConfig reference_config(const SdeModel& model, SchemeVariant study_variant,
                              double alpha_ref) {
  if (study_variant == SchemeVariant::AdditiveTamed && model.is_additive()) {
    return TamingConfig::additive(alpha_ref, model.growth_exponent());
  }
  return TamingConfig::multiplicative(alpha_ref, model.growth_exponent());
}

double default_reference_alpha(double alpha) { return std::max(alpha, 1.0); }

SolverOutput reference_solution(const SdeModel& model, SchemeVariant study_variant,
                                const TimeGrid& grid_fine, std::span<const double> x0,
                                const BrownianPath& path_fine, double alpha_ref,
                                std::size_t record_stride) {
  return integrate_recorded(model, reference_config(model, study_variant, alpha_ref), grid_fine,
                            x0, path_fine, record_stride);
}

}  // namespace tamed
