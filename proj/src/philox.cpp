#include "tamed/philox.hpp"

#include <cmath>
#include <numbers>

namespace tamed {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Uniforms live in the upper half of the counter space.
constexpr std::uint64_t kUniformBlockOffset = std::uint64_t{1} << 63;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_tag,
                          std::uint64_t index) noexcept {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ (stream_tag * 0xA24BAED4963EE407ull));
  return splitmix64(s ^ (index * 0x9FB21C651E98DF25ull));
}

PhiloxStream::PhiloxStream(std::uint64_t seed) noexcept
    : seed_(seed),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

std::array<std::uint64_t, 2> PhiloxStream::block(std::uint64_t index) const noexcept {
  const PhiloxCounter out = philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u}, key_);
  return {static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32),
          static_cast<std::uint64_t>(out[2]) | (static_cast<std::uint64_t>(out[3]) << 32)};
}

double PhiloxStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const auto w = block(normal_block_++);
  constexpr double kScale = 0x1.0p-53;
  const double u1 = static_cast<double>((w[0] >> 11) + 1) * kScale;
  const double u2 = static_cast<double>(w[1] >> 11) * kScale;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double PhiloxStream::uniform() noexcept {
  std::uint64_t word;
  if (has_spare_word_) {
    word = spare_word_;
    has_spare_word_ = false;
  } else {
    const auto w = block(kUniformBlockOffset + uniform_block_++);
    word = w[0];
    spare_word_ = w[1];
    has_spare_word_ = true;
  }
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace tamed
