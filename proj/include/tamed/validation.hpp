#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamed/philox.hpp"
#include "tamed/sde_model.hpp"

namespace tamed {

/// Sampled check of the coupled monotonicity condition
///   2<x-y, f(x)-f(y)> + (p0-1)|g(x)-g(y)|^2 <= L |x-y|^2
/// and of the polynomial-Lipschitz drift bound
///   |f(x)-f(y)| <= L (1 + |x|^l + |y|^l) |x-y|.
/// Sampling cannot certify a global bound; the report is advisory.
struct ValidationReport {
  double p0 = 0.0;
  std::size_t samples = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  /// Smallest L consistent with every sampled pair.
  double monotone_L = 0.0;
  double growth_L = 0.0;
  /// Pairs with x == y; they satisfy both bounds trivially.
  std::size_t degenerate_pairs = 0;
  bool analytic_derivatives = false;
  /// Set only when the model carries MonotonicityConstants with p0 >= the requested p0.
  std::optional<bool> monotone_pass;
  std::optional<bool> growth_pass;

  bool passed() const;
};

/// Throws std::invalid_argument for p0 <= 2, n_samples == 0 or radius <= 0.
ValidationReport validate_monotonicity(const SdeModel& model, double p0, std::size_t n_samples,
                                       double radius, std::uint64_t rng_seed);

struct DerivativeCheck {
  std::string quantity;
  double max_error = 0.0;  // max |a-b| / max(1, |b|)
  bool passed = false;
};

struct DerivativeReport {
  bool analytic = false;
  double tolerance = 0.0;
  std::vector<DerivativeCheck> checks;
  bool passed() const;
};

/// Compares each supplied derivative with a central difference (step 1e-5)
/// of the level below at points drawn uniformly from the ball of the given
/// radius, and checks symmetry of both Hessian forms.
DerivativeReport validate_derivatives(const SdeModel& model, std::size_t n_points, double radius,
                                      double tolerance, std::uint64_t rng_seed);

/// Quotient (2<x-y, f(x)-f(y)> + (p0-1)|g(x)-g(y)|^2) / |x-y|^2, or nullopt
/// when x == y (such a pair satisfies the bound for every L).
std::optional<double> monotonicity_quotient(const SdeModel& model, double p0, ConstVec x,
                                            ConstVec y);

/// Uniform point in the Euclidean ball of the given radius.
std::vector<double> sample_ball(PhiloxStream& rng, std::size_t dim, double radius);

}  // namespace tamed
