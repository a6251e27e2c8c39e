#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tamed/scheme.hpp"

namespace tamed {

enum class Command { Converge, Evolve, Distribution, Validate };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand needs. Unset optionals and empty lists are filled
/// by resolve_defaults() from the command and model.
struct RunConfig {
  Command command = Command::Converge;
  std::string model = "quintic-mult";
  std::optional<SchemeVariant> variant;
  std::vector<double> alphas;
  std::optional<double> horizon;
  std::vector<std::size_t> steps;
  std::optional<std::size_t> ref_steps;
  std::optional<double> h;       // evolve
  std::optional<double> ref_h;   // evolve
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int threads = 0;               // 0: TAMED_THREADS or the OpenMP default
  double ks_threshold = 0.08;
  std::optional<double> alpha_ref;
  std::optional<double> taming_exponent;
  std::vector<double> x0;
  std::size_t limit_paths = 1000;
  std::size_t limit_steps = std::size_t{1} << 12;
  double sigma = 1.0;
  double a = -1.0;
  std::vector<double> b{0.5};
  double p0 = 3.0;               // validate
  std::size_t samples = 2000;    // validate
  double radius = 3.0;           // validate
};

/// Keys accepted by apply_setting(), in canonical order.
const std::vector<std::string>& config_keys();

/// Lines "key = value"; blank lines and text after '#' are ignored.
/// Throws ConfigError with the line number on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

/// Throws ConfigError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Comma separated items, each "N", "2^k" or a power-of-two range "2^a..2^b".
std::vector<std::size_t> parse_steps(std::string_view text);
std::vector<double> parse_reals(std::string_view text);

void resolve_defaults(RunConfig& cfg);

/// Name resolution and every divisibility constraint, without simulating.
/// Expects a resolved config; throws ConfigError.
void validate(const RunConfig& cfg);

/// key=value lines of the resolved config in config_keys() order. Thread count and output
/// directory are left out because they cannot change any emitted number.
std::string canonical_text(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace tamed
