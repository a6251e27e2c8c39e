#include "tamed/sde_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tamed {
namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected size " + std::to_string(want) +
                                ", got " + std::to_string(got));
  }
}

// Central difference of a vector-valued map along direction e_j (or u).
template <class Eval>
void central_difference(ConstVec x, ConstVec direction, std::size_t out_dim, Eval&& eval,
                        MutVec out) {
  const double h = kFiniteDifferenceStep;
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> xm(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] += h * direction[i];
    xm[i] -= h * direction[i];
  }
  std::vector<double> fp(out_dim), fm(out_dim);
  eval(ConstVec(xp), MutVec(fp));
  eval(ConstVec(xm), MutVec(fm));
  for (std::size_t i = 0; i < out_dim; ++i) out[i] = (fp[i] - fm[i]) / (2.0 * h);
}

template <class Eval>
void jacobian_by_differences(ConstVec x, std::size_t d, Eval&& eval, MutVec out) {
  std::vector<double> unit(d, 0.0);
  std::vector<double> column(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[j] = 1.0;
    central_difference(x, unit, d, eval, MutVec(column));
    for (std::size_t i = 0; i < d; ++i) out[i * d + j] = column[i];
  }
}

void matvec(ConstVec m, ConstVec v, std::size_t d, MutVec out) {
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += m[i * d + j] * v[j];
    out[i] = s;
  }
}

}  // namespace

SdeModel::SdeModel(std::string name, std::size_t state_dim, std::size_t noise_dim,
                   double growth_exponent)
    : name_(std::move(name)),
      state_dim_(state_dim),
      noise_dim_(noise_dim),
      growth_exponent_(growth_exponent) {
  if (state_dim == 0 || noise_dim == 0) {
    throw std::invalid_argument("SdeModel: dimensions must be positive");
  }
  if (!(growth_exponent >= 0.0)) {
    throw std::invalid_argument("SdeModel: growth exponent must be nonnegative");
  }
}

void SdeModel::drift_jacobian(ConstVec x, MutVec out) const {
  jacobian_by_differences(x, state_dim_, [this](ConstVec y, MutVec o) { drift(y, o); }, out);
}

void SdeModel::diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const {
  jacobian_by_differences(
      x, state_dim_, [this, k](ConstVec y, MutVec o) { diffusion_col(y, k, o); }, out);
}

void SdeModel::drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const {
  const std::size_t d = state_dim_;
  std::vector<double> jac(d * d);
  central_difference(
      x, u, d,
      [&](ConstVec y, MutVec o) {
        drift_jacobian(y, MutVec(jac));
        matvec(jac, v, d, o);
      },
      out);
}

void SdeModel::diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                                      MutVec out) const {
  const std::size_t d = state_dim_;
  std::vector<double> jac(d * d);
  central_difference(
      x, u, d,
      [&](ConstVec y, MutVec o) {
        diffusion_jacobian(y, k, MutVec(jac));
        matvec(jac, v, d, o);
      },
      out);
}

std::vector<double> SdeModel::drift(ConstVec x) const {
  require_size(x.size(), state_dim_, "drift");
  std::vector<double> out(state_dim_);
  drift(x, out);
  return out;
}

std::vector<double> SdeModel::diffusion_col(ConstVec x, std::size_t k) const {
  require_size(x.size(), state_dim_, "diffusion_col");
  if (k >= noise_dim_) throw std::out_of_range("diffusion_col: noise index out of range");
  std::vector<double> out(state_dim_);
  diffusion_col(x, k, out);
  return out;
}

std::vector<double> SdeModel::drift_jacobian(ConstVec x) const {
  require_size(x.size(), state_dim_, "drift_jacobian");
  std::vector<double> out(state_dim_ * state_dim_);
  drift_jacobian(x, out);
  return out;
}

std::vector<double> SdeModel::diffusion_jacobian(ConstVec x, std::size_t k) const {
  require_size(x.size(), state_dim_, "diffusion_jacobian");
  if (k >= noise_dim_) throw std::out_of_range("diffusion_jacobian: noise index out of range");
  std::vector<double> out(state_dim_ * state_dim_);
  diffusion_jacobian(x, k, out);
  return out;
}

std::vector<double> SdeModel::drift_hessian_form(ConstVec x, ConstVec u, ConstVec v) const {
  require_size(x.size(), state_dim_, "drift_hessian_form");
  require_size(u.size(), state_dim_, "drift_hessian_form");
  require_size(v.size(), state_dim_, "drift_hessian_form");
  std::vector<double> out(state_dim_);
  drift_hessian_form(x, u, v, out);
  return out;
}

std::vector<double> SdeModel::diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u,
                                                     ConstVec v) const {
  require_size(x.size(), state_dim_, "diffusion_hessian_form");
  require_size(u.size(), state_dim_, "diffusion_hessian_form");
  require_size(v.size(), state_dim_, "diffusion_hessian_form");
  if (k >= noise_dim_) throw std::out_of_range("diffusion_hessian_form: noise index out of range");
  std::vector<double> out(state_dim_);
  diffusion_hessian_form(x, k, u, v, out);
  return out;
}

// ---------------------------------------------------------------------------

AdditiveSdeModel::AdditiveSdeModel(std::string name, std::size_t state_dim,
                                   std::size_t noise_dim, double growth_exponent,
                                   std::vector<double> sigma)
    : SdeModel(std::move(name), state_dim, noise_dim, growth_exponent), sigma_(std::move(sigma)) {
  require_size(sigma_.size(), state_dim * noise_dim, "AdditiveSdeModel sigma");
  for (double s : sigma_) {
    if (!std::isfinite(s)) throw std::invalid_argument("AdditiveSdeModel: sigma must be finite");
  }
}

void AdditiveSdeModel::diffusion_col(ConstVec, std::size_t k, MutVec out) const {
  for (std::size_t i = 0; i < state_dim(); ++i) out[i] = sigma_at(i, k);
}

void AdditiveSdeModel::diffusion_jacobian(ConstVec, std::size_t, MutVec out) const {
  std::fill(out.begin(), out.end(), 0.0);
}

void AdditiveSdeModel::diffusion_hessian_form(ConstVec, std::size_t, ConstVec, ConstVec,
                                              MutVec out) const {
  std::fill(out.begin(), out.end(), 0.0);
}

// ---------------------------------------------------------------------------

QuinticMultiplicative::QuinticMultiplicative() : SdeModel("quintic-mult", 1, 2, 4.0) {
  // For p0 = 3 the monotone quotient is 2 + 2(x+y)^2 - 2(x^4 + x^3 y + ... + y^4), maximal
  // at x = y = +-sqrt(2/5); the growth quotient stays below 5/2.
  set_monotonicity_constants({3.6, 3.0});
}

void QuinticMultiplicative::drift(ConstVec x, MutVec out) const {
  const double x2 = x[0] * x[0];
  out[0] = -x2 * x2 * x[0];
}

void QuinticMultiplicative::diffusion_col(ConstVec x, std::size_t k, MutVec out) const {
  out[0] = k == 0 ? x[0] : x[0] * x[0];
}

void QuinticMultiplicative::drift_jacobian(ConstVec x, MutVec out) const {
  const double x2 = x[0] * x[0];
  out[0] = -5.0 * x2 * x2;
}

void QuinticMultiplicative::diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const {
  out[0] = k == 0 ? 1.0 : 2.0 * x[0];
}

void QuinticMultiplicative::drift_hessian_form(ConstVec x, ConstVec u, ConstVec v,
                                               MutVec out) const {
  out[0] = -20.0 * x[0] * x[0] * x[0] * u[0] * v[0];
}

void QuinticMultiplicative::diffusion_hessian_form(ConstVec, std::size_t k, ConstVec u,
                                                   ConstVec v, MutVec out) const {
  out[0] = k == 0 ? 0.0 : 2.0 * u[0] * v[0];
}

// ---------------------------------------------------------------------------

CubicAdditive::CubicAdditive(double sigma) : AdditiveSdeModel("cubic-add", 1, 1, 2.0, {sigma}) {}

void CubicAdditive::drift(ConstVec x, MutVec out) const { out[0] = -x[0] * x[0] * x[0]; }

void CubicAdditive::drift_jacobian(ConstVec x, MutVec out) const { out[0] = -3.0 * x[0] * x[0]; }

void CubicAdditive::drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const {
  out[0] = -6.0 * x[0] * u[0] * v[0];
}

// ---------------------------------------------------------------------------

LinearOracle::LinearOracle(double a, std::vector<double> b)
    : SdeModel("linear", 1, b.empty() ? 1 : b.size(), 0.0), a_(a), b_(std::move(b)) {
  if (b_.empty()) b_.push_back(0.0);
}

void LinearOracle::drift(ConstVec x, MutVec out) const { out[0] = a_ * x[0]; }

void LinearOracle::diffusion_col(ConstVec x, std::size_t k, MutVec out) const {
  out[0] = b_[k] * x[0];
}

void LinearOracle::drift_jacobian(ConstVec, MutVec out) const { out[0] = a_; }

void LinearOracle::diffusion_jacobian(ConstVec, std::size_t k, MutVec out) const {
  out[0] = b_[k];
}

void LinearOracle::drift_hessian_form(ConstVec, ConstVec, ConstVec, MutVec out) const {
  out[0] = 0.0;
}

void LinearOracle::diffusion_hessian_form(ConstVec, std::size_t, ConstVec, ConstVec,
                                          MutVec out) const {
  out[0] = 0.0;
}

// ---------------------------------------------------------------------------

LinearAdditive::LinearAdditive(double a, double sigma)
    : AdditiveSdeModel("linear-add", 1, 1, 0.0, {sigma}), a_(a) {}

void LinearAdditive::drift(ConstVec x, MutVec out) const { out[0] = a_ * x[0]; }

void LinearAdditive::drift_jacobian(ConstVec, MutVec out) const { out[0] = a_; }

void LinearAdditive::drift_hessian_form(ConstVec, ConstVec, ConstVec, MutVec out) const {
  out[0] = 0.0;
}

// ---------------------------------------------------------------------------

CallbackModel::CallbackModel(CallbackModelSpec spec)
    : SdeModel(spec.name, spec.state_dim, spec.noise_dim, spec.growth_exponent),
      spec_(std::move(spec)) {
  if (!spec_.drift || !spec_.diffusion_col) {
    throw std::invalid_argument("CallbackModel: drift and diffusion_col are required");
  }
}

void CallbackModel::drift(ConstVec x, MutVec out) const { spec_.drift(x, out); }

void CallbackModel::diffusion_col(ConstVec x, std::size_t k, MutVec out) const {
  spec_.diffusion_col(x, k, out);
}

void CallbackModel::drift_jacobian(ConstVec x, MutVec out) const {
  if (spec_.drift_jacobian) {
    spec_.drift_jacobian(x, out);
  } else {
    SdeModel::drift_jacobian(x, out);
  }
}

void CallbackModel::diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const {
  if (spec_.diffusion_jacobian) {
    spec_.diffusion_jacobian(x, k, out);
  } else {
    SdeModel::diffusion_jacobian(x, k, out);
  }
}

void CallbackModel::drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const {
  if (spec_.drift_hessian_form) {
    spec_.drift_hessian_form(x, u, v, out);
  } else {
    SdeModel::drift_hessian_form(x, u, v, out);
  }
}

void CallbackModel::diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                                           MutVec out) const {
  if (spec_.diffusion_hessian_form) {
    spec_.diffusion_hessian_form(x, k, u, v, out);
  } else {
    SdeModel::diffusion_hessian_form(x, k, u, v, out);
  }
}

bool CallbackModel::has_analytic_derivatives() const {
  return spec_.drift_jacobian && spec_.diffusion_jacobian && spec_.drift_hessian_form &&
         spec_.diffusion_hessian_form;
}

// ---------------------------------------------------------------------------

QuinticMultiplicative builtin_quintic_multiplicative() { return QuinticMultiplicative{}; }

CubicAdditive builtin_cubic_additive(double sigma) { return CubicAdditive{sigma}; }

LinearOracle builtin_linear_oracle(double a, std::vector<double> b) {
  return LinearOracle{a, std::move(b)};
}

LinearAdditive builtin_linear_additive(double a, double sigma) { return LinearAdditive{a, sigma}; }

const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names{"quintic-mult", "cubic-add", "linear",
                                              "linear-add"};
  return names;
}

std::unique_ptr<SdeModel> make_builtin(const std::string& name, const BuiltinParams& params) {
  if (name == "quintic-mult") return std::make_unique<QuinticMultiplicative>();
  if (name == "cubic-add") return std::make_unique<CubicAdditive>(params.sigma);
  if (name == "linear") return std::make_unique<LinearOracle>(params.a, params.b);
  if (name == "linear-add") return std::make_unique<LinearAdditive>(params.a, params.sigma);
  std::string known;
  for (const auto& n : builtin_model_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw std::invalid_argument("unknown model '" + name + "'; built-in models: " + known);
}

}  // namespace tamed
