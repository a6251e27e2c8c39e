#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tamed/ensemble.hpp"
#include "tamed/limit_process.hpp"
#include "tamed/scheme.hpp"
#include "tamed/sde_model.hpp"
#include "tamed/statistics.hpp"

namespace tamed {

/// Raised when more than the allowed fraction of ensemble members diverged.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t diverged, std::size_t total);
  std::size_t diverged() const { return diverged_; }
  std::size_t total() const { return total_; }

 private:
  std::size_t diverged_;
  std::size_t total_;
};

/// Settings shared by the experiment drivers.
struct StudySetup {
  double horizon = 1.0;
  std::vector<double> x0{1.0};
  std::size_t paths = 1000;
  std::uint64_t master_seed = 1;
  /// Rate used by the fine reference run; default_reference_alpha(alpha).
  std::optional<double> alpha_ref;
  /// Multiplicative taming exponent; default max(2l, ceil(2 alpha) l).
  std::optional<double> taming_exponent;
  double max_divergence_fraction = 0.01;
  ExecutionPolicy execution;
};

/// Scheme configuration studied for (variant, alpha).
TamingConfig study_config(const SdeModel& model, SchemeVariant variant, double alpha,
                          const std::optional<double>& taming_exponent = std::nullopt);

/// alpha ^ 1/2 for MultiplicativeTamed, alpha ^ 1 for AdditiveTamed.
/// StandardEuler has no limit theory here and is rejected.
double normalization_rate(SchemeVariant variant, double alpha);

/// Terminal errors |X_N(T) - X_ref(T)| on coupled paths.
struct ErrorEnsemble {
  double alpha = 0.0;
  double rate = 0.0;
  std::vector<std::size_t> coarse_steps;
  /// errors[s][p]: coarse_steps[s], path p. Entries of diverged paths are 0.
  std::vector<std::vector<double>> errors;
  std::vector<bool> diverged;
  std::size_t diverged_count = 0;
};

std::vector<ErrorEnsemble> compute_error_ensembles(const SdeModel& model, SchemeVariant variant,
                                                   const std::vector<double>& alphas,
                                                   const std::vector<std::size_t>& coarse_steps,
                                                   std::size_t ref_steps, const StudySetup& setup);

struct OrderPoint {
  std::size_t steps = 0;
  double h = 0.0;
  double mse = 0.0;
  double mse_ci = 0.0;
  double rmse = 0.0;
  double rmse_ci = 0.0;  // delta method: mse_ci / (2 rmse)
};

struct OrderStudy {
  double alpha = 0.0;
  /// Least squares of log2 rmse against log2 h.
  RegressionResult regression;
  std::vector<OrderPoint> points;
  std::size_t paths_used = 0;
  std::size_t diverged = 0;
};

/// Strong order from coupled coarse/reference runs. Every step count must
/// divide ref_steps and paths must be >= 2. Throws DivergenceError when the
/// divergence fraction exceeds setup.max_divergence_fraction.
OrderStudy strong_order_study(const SdeModel& model, SchemeVariant variant, double alpha,
                              const std::vector<std::size_t>& coarse_steps, std::size_t ref_steps,
                              const StudySetup& setup);

/// Several alphas on the same paths; reference runs are shared between alphas
/// with equal reference configuration.
std::vector<OrderStudy> strong_order_studies(const SdeModel& model, SchemeVariant variant,
                                             const std::vector<double>& alphas,
                                             const std::vector<std::size_t>& coarse_steps,
                                             std::size_t ref_steps, const StudySetup& setup);

struct EvolutionRow {
  double t = 0.0;
  double alpha = 0.0;
  double mse = 0.0;
  double ci = 0.0;
};

struct EvolutionStudy {
  std::size_t coarse_steps = 0;
  std::size_t ref_factor = 0;
  std::vector<double> alphas;
  /// Ordered by alpha (outer) then time.
  std::vector<EvolutionRow> rows;
  std::vector<std::size_t> diverged;  // per alpha
  std::size_t paths_used = 0;

  /// Row for alpha index a at coarse grid point j.
  const EvolutionRow& at(std::size_t a, std::size_t j) const {
    return rows[a * (coarse_steps + 1) + j];
  }
};

/// Mean-square error at every coarse grid time for each alpha. T must be a
/// multiple of h and h a multiple of ref_h (relative tolerance 1e-9).
EvolutionStudy error_evolution_study(const SdeModel& model, SchemeVariant variant,
                                     const std::vector<double>& alphas, double h, double ref_h,
                                     const StudySetup& setup);

struct DistributionSetup {
  StudySetup base;
  std::size_t ref_steps = std::size_t{1} << 14;
  std::size_t limit_paths = 1000;
  std::size_t limit_fine_steps = std::size_t{1} << 12;
  double ks_threshold = 0.08;
};

struct CoordinateComparison {
  std::size_t coordinate = 0;
  KsResult ks;
  SampleMoments a;  // normalized errors
  SampleMoments b;  // limit process
};

struct DistributionStudy {
  double alpha = 0.0;
  double rate = 0.0;
  std::size_t steps = 0;
  std::size_t ref_steps = 0;
  std::uint64_t master_seed = 0;
  std::vector<CoordinateComparison> coordinates;
  /// sample_a[c] / sample_b[c]: coordinate c of the surviving members.
  std::vector<std::vector<double>> sample_a;
  std::vector<std::vector<double>> sample_b;
  std::size_t diverged_a = 0;
  std::size_t diverged_b = 0;

  bool rejected() const;
};

/// Sample A: N^rate (X_N(T) - X_ref(T)) over `paths` coupled runs. Sample B:
/// limit-process values at T over `limit_paths` runs on independent streams.
/// Requires paths, limit_paths >= 100 and steps dividing ref_steps.
DistributionStudy error_distribution_study(const SdeModel& model, SchemeVariant variant,
                                           double alpha, std::size_t steps,
                                           const DistributionSetup& setup);

}  // namespace tamed
