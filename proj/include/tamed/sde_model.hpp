#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tamed {

using ConstVec = std::span<const double>;
using MutVec = std::span<double>;

/// Constants of the coupled monotonicity and polynomial-Lipschitz bounds.
/// Carried as metadata; validation only samples them.
struct MonotonicityConstants {
  double L = 0.0;
  double p0 = 0.0;
};

/// Step used by the central finite-difference fallbacks.
inline constexpr double kFiniteDifferenceStep = 1e-5;

/// An Ito SDE  dX = f(X) dt + sum_k g_k(X) dW_k  in R^d driven by m
/// independent Brownian motions.
///
/// All evaluators write into caller-provided buffers and must be safe to
/// call concurrently. Jacobians are d x d, row-major (out[i*d + j] is
/// d f_i / d x_j). Subclasses that do not override a derivative get a
/// central finite difference of the level below; has_analytic_derivatives()
/// reports which case applies.
class SdeModel {
 public:
  virtual ~SdeModel() = default;

  const std::string& name() const { return name_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t noise_dim() const { return noise_dim_; }
  double growth_exponent() const { return growth_exponent_; }

  const std::optional<MonotonicityConstants>& monotonicity_constants() const {
    return monotonicity_;
  }
  void set_monotonicity_constants(MonotonicityConstants c) { monotonicity_ = c; }

  virtual void drift(ConstVec x, MutVec out) const = 0;
  virtual void diffusion_col(ConstVec x, std::size_t k, MutVec out) const = 0;

  virtual void drift_jacobian(ConstVec x, MutVec out) const;
  virtual void diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const;
  /// D^2 f(x)(u, v).
  virtual void drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const;
  /// D^2 g_k(x)(u, v).
  virtual void diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                                      MutVec out) const;

  virtual bool has_analytic_derivatives() const { return false; }

  /// True when every diffusion column is state independent.
  virtual bool is_additive() const { return false; }

  // Allocating conveniences for tests and reports.
  std::vector<double> drift(ConstVec x) const;
  std::vector<double> diffusion_col(ConstVec x, std::size_t k) const;
  std::vector<double> drift_jacobian(ConstVec x) const;
  std::vector<double> diffusion_jacobian(ConstVec x, std::size_t k) const;
  std::vector<double> drift_hessian_form(ConstVec x, ConstVec u, ConstVec v) const;
  std::vector<double> diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u,
                                             ConstVec v) const;

 protected:
  SdeModel(std::string name, std::size_t state_dim, std::size_t noise_dim,
           double growth_exponent);

 private:
  std::string name_;
  std::size_t state_dim_;
  std::size_t noise_dim_;
  double growth_exponent_;
  std::optional<MonotonicityConstants> monotonicity_;
};

/// dY = f(Y) dt + sigma dW with a constant d x m matrix sigma.
/// Diffusion derivatives are identically zero.
class AdditiveSdeModel : public SdeModel {
 public:
  /// sigma is row-major d x m.
  const std::vector<double>& sigma() const { return sigma_; }
  double sigma_at(std::size_t i, std::size_t k) const { return sigma_[i * noise_dim() + k]; }

  void diffusion_col(ConstVec x, std::size_t k, MutVec out) const final;
  void diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const final;
  void diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                              MutVec out) const final;
  bool is_additive() const final { return true; }

  using SdeModel::diffusion_col;
  using SdeModel::diffusion_hessian_form;
  using SdeModel::diffusion_jacobian;

 protected:
  AdditiveSdeModel(std::string name, std::size_t state_dim, std::size_t noise_dim,
                   double growth_exponent, std::vector<double> sigma);

 private:
  std::vector<double> sigma_;
};

/// dX = -X^5 dt + X dW_1 + X^2 dW_2, l = 4.
class QuinticMultiplicative final : public SdeModel {
 public:
  QuinticMultiplicative();
  void drift(ConstVec x, MutVec out) const override;
  void diffusion_col(ConstVec x, std::size_t k, MutVec out) const override;
  void drift_jacobian(ConstVec x, MutVec out) const override;
  void diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const override;
  void drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const override;
  void diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                              MutVec out) const override;
  bool has_analytic_derivatives() const override { return true; }
  using SdeModel::diffusion_col;
  using SdeModel::diffusion_hessian_form;
  using SdeModel::diffusion_jacobian;
  using SdeModel::drift;
  using SdeModel::drift_hessian_form;
  using SdeModel::drift_jacobian;
};

/// dY = -Y^3 dt + sigma dW, l = 2.
class CubicAdditive final : public AdditiveSdeModel {
 public:
  explicit CubicAdditive(double sigma);
  void drift(ConstVec x, MutVec out) const override;
  void drift_jacobian(ConstVec x, MutVec out) const override;
  void drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const override;
  bool has_analytic_derivatives() const override { return true; }
  using SdeModel::drift;
  using SdeModel::drift_hessian_form;
  using SdeModel::drift_jacobian;
};

/// Scalar dX = a X dt + sum_k b_k X dW_k. Globally Lipschitz, l = 0.
class LinearOracle final : public SdeModel {
 public:
  LinearOracle(double a, std::vector<double> b);
  double a() const { return a_; }
  const std::vector<double>& b() const { return b_; }

  void drift(ConstVec x, MutVec out) const override;
  void diffusion_col(ConstVec x, std::size_t k, MutVec out) const override;
  void drift_jacobian(ConstVec x, MutVec out) const override;
  void diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const override;
  void drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const override;
  void diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                              MutVec out) const override;
  bool has_analytic_derivatives() const override { return true; }
  using SdeModel::diffusion_col;
  using SdeModel::diffusion_hessian_form;
  using SdeModel::diffusion_jacobian;
  using SdeModel::drift;
  using SdeModel::drift_hessian_form;
  using SdeModel::drift_jacobian;

 private:
  double a_;
  std::vector<double> b_;
};

/// Scalar dY = a Y dt + sigma dW, l = 0.
class LinearAdditive final : public AdditiveSdeModel {
 public:
  LinearAdditive(double a, double sigma);
  double a() const { return a_; }
  void drift(ConstVec x, MutVec out) const override;
  void drift_jacobian(ConstVec x, MutVec out) const override;
  void drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const override;
  bool has_analytic_derivatives() const override { return true; }
  using SdeModel::drift;
  using SdeModel::drift_hessian_form;
  using SdeModel::drift_jacobian;

 private:
  double a_;
};

/// Model assembled from callables. Derivative callables are optional; missing
/// ones fall back to finite differences and has_analytic_derivatives() is
/// false unless all four are supplied.
struct CallbackModelSpec {
  std::string name = "callback";
  std::size_t state_dim = 1;
  std::size_t noise_dim = 1;
  double growth_exponent = 0.0;
  std::function<void(ConstVec, MutVec)> drift;
  std::function<void(ConstVec, std::size_t, MutVec)> diffusion_col;
  std::function<void(ConstVec, MutVec)> drift_jacobian;
  std::function<void(ConstVec, std::size_t, MutVec)> diffusion_jacobian;
  std::function<void(ConstVec, ConstVec, ConstVec, MutVec)> drift_hessian_form;
  std::function<void(ConstVec, std::size_t, ConstVec, ConstVec, MutVec)> diffusion_hessian_form;
};

class CallbackModel final : public SdeModel {
 public:
  explicit CallbackModel(CallbackModelSpec spec);
  void drift(ConstVec x, MutVec out) const override;
  void diffusion_col(ConstVec x, std::size_t k, MutVec out) const override;
  void drift_jacobian(ConstVec x, MutVec out) const override;
  void diffusion_jacobian(ConstVec x, std::size_t k, MutVec out) const override;
  void drift_hessian_form(ConstVec x, ConstVec u, ConstVec v, MutVec out) const override;
  void diffusion_hessian_form(ConstVec x, std::size_t k, ConstVec u, ConstVec v,
                              MutVec out) const override;
  bool has_analytic_derivatives() const override;
  using SdeModel::diffusion_col;
  using SdeModel::diffusion_hessian_form;
  using SdeModel::diffusion_jacobian;
  using SdeModel::drift;
  using SdeModel::drift_hessian_form;
  using SdeModel::drift_jacobian;

 private:
  CallbackModelSpec spec_;
};

QuinticMultiplicative builtin_quintic_multiplicative();
CubicAdditive builtin_cubic_additive(double sigma);
LinearOracle builtin_linear_oracle(double a, std::vector<double> b);
LinearAdditive builtin_linear_additive(double a, double sigma);

/// Parameters for the by-name factory.
struct BuiltinParams {
  double sigma = 1.0;             // cubic-add, linear-add
  double a = -1.0;                // linear, linear-add
  std::vector<double> b{0.5};     // linear
};

/// Names accepted by make_builtin(), in display order.
const std::vector<std::string>& builtin_model_names();

/// Throws std::invalid_argument listing the built-ins for an unknown name.
std::unique_ptr<SdeModel> make_builtin(const std::string& name, const BuiltinParams& params = {});

}  // namespace tamed
