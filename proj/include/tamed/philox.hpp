#pragma once

#include <array>
#include <cstdint>

namespace tamed {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon, Moraes, Dror, Shaw; SC'11).
/// Output matches the Random123 known-answer vectors.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream (master, tag, index). Pure function; used so that
/// an ensemble member's noise never depends on scheduling order.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_tag,
                          std::uint64_t index) noexcept;

/// Counter-mode stream over Philox4x32-10 keyed by a 64-bit seed.
///
/// Block b (counter = {b_lo, b_hi, 0, 0}) yields two 64-bit words. Normals
/// come in Box-Muller pairs from one block:
///   u1 = ((w0 >> 11) + 1) * 2^-53  in (0, 1]
///   u2 =  (w1 >> 11)      * 2^-53  in [0, 1)
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
/// Uniform draws consume one word each from their own block sequence, so
/// mixing the two kinds of draws stays reproducible.
class PhiloxStream {
 public:
  explicit PhiloxStream(std::uint64_t seed) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  /// Standard normal variate.
  double normal() noexcept;

  /// Uniform variate in [0, 1).
  double uniform() noexcept;

 private:
  std::array<std::uint64_t, 2> block(std::uint64_t index) const noexcept;

  std::uint64_t seed_;
  PhiloxKey key_;
  std::uint64_t normal_block_ = 0;
  std::uint64_t uniform_block_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
  std::uint64_t spare_word_ = 0;
  bool has_spare_word_ = false;
};

}  // namespace tamed
