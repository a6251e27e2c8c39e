#include "tamed/noise.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "tamed/philox.hpp"

namespace tamed {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
  }
  if (steps == 0) throw std::invalid_argument("TimeGrid: steps must be positive");
}

double TimeGrid::time(std::size_t i) const {
  if (i >= steps_) return horizon_;
  return static_cast<double>(i) * step();
}

std::size_t TimeGrid::kappa_index(double s) const {
  if (s <= 0.0) return 0;
  if (s >= horizon_) return steps_;
  const double h = step();
  auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(steps_) * s / horizon_));
  // Repair the last-ulp disagreements between N s / T and i * h.
  while (idx > 0 && time(idx) > s) --idx;
  while (idx + 1 < steps_ && static_cast<double>(idx + 1) * h <= s) ++idx;
  return idx;
}

double TimeGrid::kappa(double s) const { return time(kappa_index(s)); }

bool TimeGrid::is_refined_by(const TimeGrid& fine) const {
  return fine.horizon_ == horizon_ && fine.steps_ % steps_ == 0;
}

BrownianPath::BrownianPath(TimeGrid grid, std::size_t dim, std::uint64_t seed,
                           std::vector<double> increments)
    : grid_(grid), dim_(dim), seed_(seed), increments_(std::move(increments)) {
  if (dim_ == 0) throw std::invalid_argument("BrownianPath: dim must be positive");
  if (increments_.size() != grid_.steps() * dim_) {
    throw std::invalid_argument("BrownianPath: increment count does not match grid and dim");
  }
}

double BrownianPath::total(std::size_t k) const {
  double s = 0.0;
  for (std::size_t n = 0; n < grid_.steps(); ++n) s += increments_[n * dim_ + k];
  return s;
}

BrownianPath generate_path(const TimeGrid& grid, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("generate_path: dim must be >= 1");
  const double scale = std::sqrt(grid.step());
  std::vector<double> inc(grid.steps() * dim);
  PhiloxStream rng(seed);
  for (auto& v : inc) v = scale * rng.normal();
  return BrownianPath(grid, dim, seed, std::move(inc));
}

BrownianPath generate_driving_path(const TimeGrid& grid, std::size_t dim,
                                   std::uint64_t master_seed, std::uint64_t index,
                                   std::uint64_t stream_tag) {
  return generate_path(grid, dim, derive_seed(master_seed, stream_tag, index));
}

BrownianPath coarsen(const BrownianPath& path, std::size_t factor) {
  const std::size_t fine_steps = path.grid().steps();
  if (factor == 0 || fine_steps % factor != 0) {
    throw std::invalid_argument("coarsen: factor " + std::to_string(factor) +
                                " does not divide " + std::to_string(fine_steps) + " steps");
  }
  const std::size_t dim = path.dim();
  const std::size_t coarse_steps = fine_steps / factor;
  std::vector<double> inc(coarse_steps * dim);
  for (std::size_t n = 0; n < coarse_steps; ++n) {
    for (std::size_t k = 0; k < dim; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < factor; ++j) s += path.increment(n * factor + j)[k];
      inc[n * dim + k] = s;
    }
  }
  return BrownianPath(TimeGrid(path.grid().horizon(), coarse_steps), dim, path.seed(),
                      std::move(inc));
}

AuxiliaryNoise generate_auxiliary(const TimeGrid& grid, std::size_t dim, std::uint64_t master_seed,
                                  std::uint64_t stream_tag, std::uint64_t index,
                                  std::uint64_t driving_tag) {
  if (stream_tag == driving_tag) {
    throw std::invalid_argument("generate_auxiliary: stream tag collides with the driving path");
  }
  return generate_path(grid, dim, derive_seed(master_seed, stream_tag, index));
}

namespace {

template <class T>
void put(std::ostream& out, T value) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw std::runtime_error("read_path: truncated input");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_path(std::ostream& out, const BrownianPath& path) {
  put(out, path.grid().horizon());
  put(out, static_cast<std::uint64_t>(path.grid().steps()));
  put(out, static_cast<std::uint64_t>(path.dim()));
  put(out, path.seed());
  for (double v : path.increments()) put(out, v);
}

BrownianPath read_path(std::istream& in) {
  const auto horizon = get<double>(in);
  const auto steps = get<std::uint64_t>(in);
  const auto dim = get<std::uint64_t>(in);
  const auto seed = get<std::uint64_t>(in);
  TimeGrid grid(horizon, steps);
  std::vector<double> inc(steps * dim);
  for (auto& v : inc) v = get<double>(in);
  return BrownianPath(grid, dim, seed, std::move(inc));
}

}  // namespace tamed
