#include "tamed/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tamed/philox.hpp"

namespace tamed {
namespace {

constexpr std::uint64_t kValidationTag = 0x76616C6964ull;  // "valid"

double norm2(ConstVec x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double mixed_error(ConstVec a, ConstVec b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

void finite_difference(ConstVec x, ConstVec dir, std::size_t out_dim,
                       const std::function<void(ConstVec, MutVec)>& eval, MutVec out) {
  const double h = kFiniteDifferenceStep;
  std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] += h * dir[i];
    xm[i] -= h * dir[i];
  }
  std::vector<double> fp(out_dim), fm(out_dim);
  eval(xp, fp);
  eval(xm, fm);
  for (std::size_t i = 0; i < out_dim; ++i) out[i] = (fp[i] - fm[i]) / (2.0 * h);
}

}  // namespace

std::vector<double> sample_ball(PhiloxStream& rng, std::size_t dim, double radius) {
  std::vector<double> x(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& v : x) {
      v = rng.normal();
      n2 += v * v;
    }
  } while (n2 == 0.0);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  const double scale = r / std::sqrt(n2);
  for (auto& v : x) v *= scale;
  return x;
}

std::optional<double> monotonicity_quotient(const SdeModel& model, double p0, ConstVec x,
                                            ConstVec y) {
  const std::size_t d = model.state_dim();
  double diff2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) diff2 += (x[i] - y[i]) * (x[i] - y[i]);
  if (diff2 == 0.0) return std::nullopt;

  std::vector<double> fx(d), fy(d), gx(d), gy(d);
  model.drift(x, fx);
  model.drift(y, fy);
  double inner = 0.0;
  for (std::size_t i = 0; i < d; ++i) inner += (x[i] - y[i]) * (fx[i] - fy[i]);
  double gdiff2 = 0.0;
  for (std::size_t k = 0; k < model.noise_dim(); ++k) {
    model.diffusion_col(x, k, gx);
    model.diffusion_col(y, k, gy);
    for (std::size_t i = 0; i < d; ++i) gdiff2 += (gx[i] - gy[i]) * (gx[i] - gy[i]);
  }
  return (2.0 * inner + (p0 - 1.0) * gdiff2) / diff2;
}

bool ValidationReport::passed() const {
  if (!std::isfinite(monotone_L) || !std::isfinite(growth_L)) return false;
  return monotone_pass.value_or(true) && growth_pass.value_or(true);
}

ValidationReport validate_monotonicity(const SdeModel& model, double p0, std::size_t n_samples,
                                       double radius, std::uint64_t rng_seed) {
  if (!(p0 > 2.0)) throw std::invalid_argument("validate_monotonicity: p0 must exceed 2");
  if (n_samples == 0) throw std::invalid_argument("validate_monotonicity: n_samples must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("validate_monotonicity: radius must be > 0");

  const std::size_t d = model.state_dim();
  const double l = model.growth_exponent();

  ValidationReport report;
  report.p0 = p0;
  report.samples = n_samples;
  report.radius = radius;
  report.seed = rng_seed;
  report.analytic_derivatives = model.has_analytic_derivatives();
  report.monotone_L = -std::numeric_limits<double>::infinity();
  report.growth_L = 0.0;

  PhiloxStream rng(derive_seed(rng_seed, kValidationTag, 0));
  std::vector<double> fx(d), fy(d);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto x = sample_ball(rng, d, radius);
    const auto y = sample_ball(rng, d, radius);
    const auto quotient = monotonicity_quotient(model, p0, x, y);
    if (!quotient) {
      ++report.degenerate_pairs;
      continue;
    }
    report.monotone_L = std::max(report.monotone_L, *quotient);

    model.drift(x, fx);
    model.drift(y, fy);
    double fdiff2 = 0.0, diff2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      fdiff2 += (fx[i] - fy[i]) * (fx[i] - fy[i]);
      diff2 += (x[i] - y[i]) * (x[i] - y[i]);
    }
    const double weight =
        1.0 + std::pow(std::sqrt(norm2(x)), l) + std::pow(std::sqrt(norm2(y)), l);
    report.growth_L = std::max(report.growth_L, std::sqrt(fdiff2 / diff2) / weight);
  }
  if (report.degenerate_pairs == n_samples) report.monotone_L = 0.0;

  // The quotient grows with p0, so constants certified at c.p0 cover every smaller p0.
  if (const auto& c = model.monotonicity_constants(); c && p0 <= c->p0) {
    const double slack = 1e-9 * std::max(1.0, std::abs(c->L));
    report.monotone_pass = report.monotone_L <= c->L + slack;
    report.growth_pass = report.growth_L <= c->L + slack;
  }
  return report;
}

bool DerivativeReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

DerivativeReport validate_derivatives(const SdeModel& model, std::size_t n_points, double radius,
                                      double tolerance, std::uint64_t rng_seed) {
  const std::size_t d = model.state_dim();
  const std::size_t m = model.noise_dim();
  DerivativeReport report;
  report.analytic = model.has_analytic_derivatives();
  report.tolerance = tolerance;

  DerivativeCheck jac_f{"drift_jacobian"}, hess_f{"drift_hessian_form"},
      sym_f{"drift_hessian_symmetry"}, jac_g{"diffusion_jacobian"},
      hess_g{"diffusion_hessian_form"}, sym_g{"diffusion_hessian_symmetry"};

  PhiloxStream rng(derive_seed(rng_seed, kValidationTag, 1));
  std::vector<double> jac(d * d), col(d), fd(d), uv(d), vu(d), jv(d);
  std::vector<double> unit(d);
  for (std::size_t p = 0; p < n_points; ++p) {
    const auto x = sample_ball(rng, d, radius);
    const auto u = sample_ball(rng, d, 1.0);
    const auto v = sample_ball(rng, d, 1.0);

    model.drift_jacobian(x, jac);
    for (std::size_t j = 0; j < d; ++j) {
      std::fill(unit.begin(), unit.end(), 0.0);
      unit[j] = 1.0;
      finite_difference(x, unit, d, [&](ConstVec y, MutVec o) { model.drift(y, o); }, fd);
      for (std::size_t i = 0; i < d; ++i) col[i] = jac[i * d + j];
      jac_f.max_error = std::max(jac_f.max_error, mixed_error(col, fd));
    }
    model.drift_hessian_form(x, u, v, uv);
    model.drift_hessian_form(x, v, u, vu);
    sym_f.max_error = std::max(sym_f.max_error, mixed_error(uv, vu));
    finite_difference(
        x, u, d,
        [&](ConstVec y, MutVec o) {
          std::vector<double> jy(d * d);
          model.drift_jacobian(y, jy);
          for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += jy[i * d + j] * v[j];
            o[i] = s;
          }
        },
        fd);
    hess_f.max_error = std::max(hess_f.max_error, mixed_error(uv, fd));

    for (std::size_t k = 0; k < m; ++k) {
      model.diffusion_jacobian(x, k, jac);
      for (std::size_t j = 0; j < d; ++j) {
        std::fill(unit.begin(), unit.end(), 0.0);
        unit[j] = 1.0;
        finite_difference(
            x, unit, d, [&](ConstVec y, MutVec o) { model.diffusion_col(y, k, o); }, fd);
        for (std::size_t i = 0; i < d; ++i) col[i] = jac[i * d + j];
        jac_g.max_error = std::max(jac_g.max_error, mixed_error(col, fd));
      }
      model.diffusion_hessian_form(x, k, u, v, uv);
      model.diffusion_hessian_form(x, k, v, u, vu);
      sym_g.max_error = std::max(sym_g.max_error, mixed_error(uv, vu));
      finite_difference(
          x, u, d,
          [&](ConstVec y, MutVec o) {
            std::vector<double> jy(d * d);
            model.diffusion_jacobian(y, k, jy);
            for (std::size_t i = 0; i < d; ++i) {
              double s = 0.0;
              for (std::size_t j = 0; j < d; ++j) s += jy[i * d + j] * v[j];
              o[i] = s;
            }
          },
          fd);
      hess_g.max_error = std::max(hess_g.max_error, mixed_error(uv, fd));
    }
  }
  for (auto* c : {&jac_f, &hess_f, &sym_f, &jac_g, &hess_g, &sym_g}) {
    c->passed = c->max_error <= tolerance;
    report.checks.push_back(*c);
  }
  return report;
}

}  // namespace tamed
