#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tamed/ensemble.hpp"
#include "tamed/scheme.hpp"
#include "tamed/sde_model.hpp"

namespace tamed {

/// Settings for co-simulating a limit error process with its state.
struct LimitConfig {
  double alpha = 1.0;
  double horizon = 1.0;
  std::size_t fine_steps = std::size_t{1} << 12;
  std::uint64_t master_seed = 0;
  /// Seed for the auxiliary motion; defaults to master_seed. The two streams
  /// are always distinct because they use different stream tags.
  std::optional<std::uint64_t> auxiliary_seed;
  std::vector<double> x0{1.0};
  /// Regularization rate of the fine scheme producing the state; defaults to
  /// default_reference_alpha(alpha), matching the reference runs of the studies.
  std::optional<double> state_alpha;
  /// Exponent on |X| in the taming-bias terms; defaults to 2l (multiplicative)
  /// or ceil(2 alpha) l (additive).
  std::optional<double> taming_exponent;
};

struct LimitSample {
  std::vector<double> terminal_error;  // U(T) or V(T)
  std::vector<double> terminal_state;  // X(T) or Y(T)
  std::uint64_t driving_seed = 0;
  std::uint64_t auxiliary_seed = 0;
  bool diverged = false;
};

/// Integrals of each forcing family, accumulated without propagation
/// through the linear part. Used to inspect which indicator terms fired.
struct LimitTermTotals {
  std::vector<double> taming_bias;  // T^alpha terms (both dt and dW parts)
  std::vector<double> correction;   // additive alpha >= 1 dt/dW corrections
  std::vector<double> auxiliary;    // terms driven by the auxiliary motion
};

/// Optional instrumentation for one limit run.
struct LimitTrace {
  /// Starting value of the error process (zero when empty).
  std::vector<double> initial_error;
  /// Record |U|^2 every `record_stride` fine steps (0 disables).
  std::size_t record_stride = 0;

  // Outputs.
  LimitTermTotals totals;
  std::vector<double> times;
  std::vector<double> squared_norms;
};

/// Which indicator families of the limit equations are active.
struct IndicatorSet {
  bool taming_bias = false;  // 0 < alpha <= 1/2 (mult) or 0 < alpha <= 1 (add)
  bool correction = false;   // alpha >= 1 (additive only)
  bool auxiliary = false;    // 1/2 <= alpha <= 1 (mult) or alpha >= 1 (add)
};
IndicatorSet multiplicative_indicators(double alpha);
IndicatorSet additive_indicators(double alpha);

/// Euler discretization (left-point coefficients) on the fine grid of
///   dU = grad f(X) U dt + sum_k grad g_k(X) U dW_k
///        - 1{0<a<=1/2} T^a f(X)|X|^{2l} dt - 1{0<a<=1/2} T^a sum_k g_k(X)|X|^{2l} dW_k
///        + 1{1/2<=a<=1} sqrt(2T)/2 sum_{k,u} grad g_k(X) g_u(X) dW~_{ku},
/// with X from the fine tamed scheme on the same W and W~ an independent
/// m^2-dimensional motion (component k*m + u). Both indicator families are
/// active at alpha = 1/2. Throws std::invalid_argument unless alpha in (0, 1].
LimitSample simulate_limit_multiplicative(const SdeModel& model, const LimitConfig& cfg,
                                          std::uint64_t path_index, LimitTrace* trace = nullptr);

/// Same for the additive limit
///   dV = grad f(Y) V dt - 1{0<a<=1} T^a f(Y)|Y|^{l_a} dt
///        - 1{a>=1} [ T/2 grad f(Y) f(Y) dt + T/2 grad f(Y) sigma dW
///                    + T/4 sum_k D^2 f(Y)(sigma_k, sigma_k) dt
///                    + T/sqrt(12) grad f(Y) sigma dW^ ],
/// with W^ an independent m-dimensional motion. Both families are active at
/// alpha = 1.
LimitSample simulate_limit_additive(const AdditiveSdeModel& model, const LimitConfig& cfg,
                                    std::uint64_t path_index, LimitTrace* trace = nullptr);

/// Dispatches on model.is_additive().
LimitSample simulate_limit(const SdeModel& model, const LimitConfig& cfg,
                           std::uint64_t path_index, LimitTrace* trace = nullptr);

struct CurvePoint {
  double t = 0.0;
  double mean_square = 0.0;
  double half_width = 0.0;
  bool low_confidence = false;
};

/// Monte Carlo estimate of E|U(t)|^2 (95% CLT band) on `points` + 1 equally
/// spaced times including 0 and T. `points` must divide cfg.fine_steps.
/// Throws std::invalid_argument for ensemble_size < 2.
std::vector<CurvePoint> limit_mean_square_curve(const SdeModel& model, const LimitConfig& cfg,
                                                std::size_t ensemble_size,
                                                std::size_t points = 64,
                                                const ExecutionPolicy& policy = {});

}  // namespace tamed
