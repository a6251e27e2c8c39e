#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace tamed {

/// Uniform grid on [0, T] with N steps of size h = T/N.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  double step() const { return horizon_ / static_cast<double>(steps_); }

  /// i * h, with the last point pinned to T.
  double time(std::size_t i) const;

  /// kappa(s) = floor(N s / T) T / N: the grid point at or left of s.
  double kappa(double s) const;
  std::size_t kappa_index(double s) const;

  /// True when `fine` has the same horizon and a step count divisible by ours.
  bool is_refined_by(const TimeGrid& fine) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
};

/// Brownian increments W(t_{n+1}) - W(t_n) on a TimeGrid, stored row-major
/// (increment n, component k at n * dim + k).
class BrownianPath {
 public:
  BrownianPath(TimeGrid grid, std::size_t dim, std::uint64_t seed, std::vector<double> increments);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const double> increment(std::size_t n) const {
    return {increments_.data() + n * dim_, dim_};
  }
  std::span<const double> increments() const { return increments_; }

  /// W(T) - W(0) for component k, summed in grid order.
  double total(std::size_t k) const;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::uint64_t seed_;
  std::vector<double> increments_;
};

/// Auxiliary motions (the m^2 components driving the multiplicative limit,
/// or the m components for the additive one) share the path layout.
using AuxiliaryNoise = BrownianPath;

/// Stream tags. A path for ensemble member i under master seed s is keyed by
/// derive_seed(s, tag, i), so members never depend on execution order.
namespace stream {
inline constexpr std::uint64_t kDriving = 0;
inline constexpr std::uint64_t kAuxiliary = 1;
inline constexpr std::uint64_t kLimitDriving = 2;
inline constexpr std::uint64_t kLimitAuxiliary = 3;
}  // namespace stream

/// N * dim i.i.d. Normal(0, h) increments from PhiloxStream(seed), drawn in
/// row-major order. Throws std::invalid_argument for dim == 0.
BrownianPath generate_path(const TimeGrid& grid, std::size_t dim, std::uint64_t seed);

/// Driving path for ensemble member `index`.
BrownianPath generate_driving_path(const TimeGrid& grid, std::size_t dim,
                                   std::uint64_t master_seed, std::uint64_t index,
                                   std::uint64_t stream_tag = stream::kDriving);

/// Coarse path whose increments are the block sums (in order) of `factor`
/// consecutive fine increments. Throws std::invalid_argument unless factor
/// divides the step count.
BrownianPath coarsen(const BrownianPath& path, std::size_t factor);

/// Noise independent of the driving path. Rejects stream_tag == driving_tag,
/// which would reproduce the driving stream.
AuxiliaryNoise generate_auxiliary(const TimeGrid& grid, std::size_t dim, std::uint64_t master_seed,
                                  std::uint64_t stream_tag, std::uint64_t index = 0,
                                  std::uint64_t driving_tag = stream::kDriving);

/// Binary dump, all fields little-endian:
///   f64 T | u64 N | u64 dim | u64 seed | f64 increments[N * dim]
void write_path(std::ostream& out, const BrownianPath& path);
BrownianPath read_path(std::istream& in);

}  // namespace tamed
