#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tamed/noise.hpp"
#include "tamed/sde_model.hpp"

namespace tamed {

enum class SchemeVariant { MultiplicativeTamed, AdditiveTamed, StandardEuler };

std::string_view to_string(SchemeVariant v);

/// Regularization of the explicit Euler step. Tamed variants divide the
/// drift (and, for MultiplicativeTamed, the diffusion) by
///   1 + (T/N)^alpha |x|^taming_exponent.
struct TamingConfig {
  double alpha = 1.0;
  double taming_exponent = 0.0;
  SchemeVariant variant = SchemeVariant::StandardEuler;

  /// Exponent max(2l, ceil(2 alpha) l): the classical 2l whenever alpha <= 1.
  static TamingConfig multiplicative(double alpha, double growth_exponent);
  static TamingConfig multiplicative(double alpha, double growth_exponent,
                                     double taming_exponent);
  /// Exponent ceil(2 alpha) l.
  static TamingConfig additive(double alpha, double growth_exponent);
  static TamingConfig standard();
};

/// ceil(2 alpha) * l.
double effective_exponent(double alpha, double l);

/// Throws std::invalid_argument when cfg is inconsistent with the model:
/// alpha <= 0, a multiplicative exponent below ceil(2 alpha) l, an additive
/// exponent other than ceil(2 alpha) l, or AdditiveTamed on a model with
/// state-dependent diffusion.
void validate_config(const TamingConfig& cfg, const SdeModel& model);

/// |x|^p for the Euclidean norm, with |x|^0 = 1.
double norm_power(std::span<const double> x, double p);

/// 1 + (T/N)^alpha |x|^taming_exponent; 1 for StandardEuler.
double taming_denominator(const TamingConfig& cfg, const TimeGrid& grid, std::span<const double> x);

std::vector<double> tame_drift(const SdeModel& model, const TamingConfig& cfg, const TimeGrid& grid,
                               std::span<const double> x);
/// Column k of the tamed diffusion. AdditiveTamed leaves it untamed.
std::vector<double> tame_diffusion(const SdeModel& model, const TamingConfig& cfg,
                                   const TimeGrid& grid, std::span<const double> x,
                                   std::size_t k);

/// States above this norm mark a run as diverged.
inline constexpr double kOverflowNorm = 1e150;

struct SolverOutput {
  std::vector<double> terminal;
  /// Recorded states, row-major, at grid points 0, s, 2s, ..., N (s = record_stride).
  std::vector<double> path;
  std::size_t record_stride = 0;
  bool diverged = false;
  std::size_t steps_taken = 0;

  std::size_t recorded_points() const;
  std::span<const double> recorded_state(std::size_t i) const;
};

/// One explicit step at a time; h and h^alpha are fixed at construction.
class EulerStepper {
 public:
  EulerStepper(const SdeModel& model, const TamingConfig& cfg, const TimeGrid& grid);

  /// Advances x by one step driven by dw. Returns false and leaves x
  /// untouched when the new state is non-finite or exceeds kOverflowNorm.
  bool step(std::span<double> x, std::span<const double> dw);

 private:
  const SdeModel& model_;
  TamingConfig cfg_;
  double h_;
  double h_alpha_;
  bool tame_drift_;
  bool tame_diffusion_;
  std::vector<double> f_, g_, next_;
};

/// X_{n+1} = X_n + h f^alpha(X_n) + sum_k g^alpha_k(X_n) dW_k, n = 0..N-1.
/// Throws std::invalid_argument on dimension or grid mismatch. Divergence
/// freezes the state and sets the flag.
SolverOutput integrate(const SdeModel& model, const TamingConfig& cfg, const TimeGrid& grid,
                       std::span<const double> x0, const BrownianPath& path,
                       bool keep_path = false);

/// As integrate(), recording every record_stride-th grid point
/// (record_stride must divide N; 0 records nothing).
SolverOutput integrate_recorded(const SdeModel& model, const TamingConfig& cfg,
                                const TimeGrid& grid, std::span<const double> x0,
                                const BrownianPath& path, std::size_t record_stride);

/// Tamed configuration used for the fine reference run. The variant follows
/// the model: AdditiveTamed for additive models studied with the additive
/// scheme, MultiplicativeTamed otherwise.
TamingConfig reference_config(const SdeModel& model, SchemeVariant study_variant,
                              double alpha_ref);

/// Default reference regularization rate: max(alpha, 1). The reference then
/// carries an O(h_ref) taming bias rather than O(h_ref^alpha).
double default_reference_alpha(double alpha);

/// Fine-grid tamed run standing in for the exact solution.
SolverOutput reference_solution(const SdeModel& model, SchemeVariant study_variant,
                                const TimeGrid& grid_fine, std::span<const double> x0,
                                const BrownianPath& path_fine, double alpha_ref,
                                std::size_t record_stride = 0);

}  // namespace tamed
