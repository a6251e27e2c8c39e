#include "tamed/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tamed/report.hpp"
#include "tamed/sde_model.hpp"

namespace tamed {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  const double v = parse_number<double>(key, text);
  if (!std::isfinite(v)) throw ConfigError(std::string(key) + " must be finite");
  return v;
}

std::size_t parse_step_item(std::string_view item) {
  if (item.starts_with("2^")) {
    const auto k = parse_number<unsigned>("steps", item.substr(2));
    if (k >= 63) throw ConfigError("steps exponent too large: " + std::string(item));
    return std::size_t{1} << k;
  }
  return parse_number<std::size_t>("steps", item);
}

SchemeVariant parse_variant(std::string_view v) {
  for (auto candidate : {SchemeVariant::MultiplicativeTamed, SchemeVariant::AdditiveTamed,
                         SchemeVariant::StandardEuler}) {
    if (v == to_string(candidate)) return candidate;
  }
  throw ConfigError("unknown variant '" + std::string(v) +
                    "' (expected multiplicative, additive or standard)");
}

std::vector<std::size_t> pow2_range(unsigned lo, unsigned hi) {
  std::vector<std::size_t> out;
  for (unsigned k = lo; k <= hi; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

bool is_multiple(double big, double small) {
  const double ratio = big / small;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio) && ratio >= 1.0 - 1e-9;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Converge: return "converge";
    case Command::Evolve: return "evolve";
    case Command::Distribution: return "distribution";
    case Command::Validate: return "validate";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::Converge, Command::Evolve, Command::Distribution, Command::Validate}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "model", "variant", "alpha", "T", "steps", "ref_steps", "h", "ref_h", "paths", "seed",
      "out", "threads", "ks_threshold", "alpha_ref", "taming_exponent", "x0", "limit_paths",
      "limit_steps", "sigma", "a", "b", "p0", "samples", "radius"};
  return keys;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

std::vector<std::size_t> parse_steps(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty entry in steps list");
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const auto lo = trim(item.substr(0, dots));
      const auto hi = trim(item.substr(dots + 2));
      if (!lo.starts_with("2^") || !hi.starts_with("2^")) {
        throw ConfigError("step ranges must be written 2^a..2^b");
      }
      const auto a = parse_number<unsigned>("steps", lo.substr(2));
      const auto b = parse_number<unsigned>("steps", hi.substr(2));
      if (a > b || b >= 63) throw ConfigError("bad step range " + std::string(item));
      for (auto s : pow2_range(a, b)) out.push_back(s);
    } else {
      out.push_back(parse_step_item(item));
    }
  }
  return out;
}

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_real("list", item));
  return out;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "model") cfg.model = std::string(value);
  else if (key == "variant") cfg.variant = parse_variant(value);
  else if (key == "alpha") cfg.alphas = parse_reals(value);
  else if (key == "T") cfg.horizon = parse_real(key, value);
  else if (key == "steps") cfg.steps = parse_steps(value);
  else if (key == "ref_steps") {
    const auto s = parse_steps(value);
    if (s.size() != 1) throw ConfigError("ref_steps takes a single value");
    cfg.ref_steps = s.front();
  } else if (key == "h") cfg.h = parse_real(key, value);
  else if (key == "ref_h") cfg.ref_h = parse_real(key, value);
  else if (key == "paths") cfg.paths = parse_number<std::size_t>(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") cfg.out_dir = std::string(value);
  else if (key == "threads") cfg.threads = parse_number<int>(key, value);
  else if (key == "ks_threshold") cfg.ks_threshold = parse_real(key, value);
  else if (key == "alpha_ref") cfg.alpha_ref = parse_real(key, value);
  else if (key == "taming_exponent") cfg.taming_exponent = parse_real(key, value);
  else if (key == "x0") cfg.x0 = parse_reals(value);
  else if (key == "limit_paths") cfg.limit_paths = parse_number<std::size_t>(key, value);
  else if (key == "limit_steps") {
    const auto s = parse_steps(value);
    if (s.size() != 1) throw ConfigError("limit_steps takes a single value");
    cfg.limit_steps = s.front();
  } else if (key == "sigma") cfg.sigma = parse_real(key, value);
  else if (key == "a") cfg.a = parse_real(key, value);
  else if (key == "b") cfg.b = parse_reals(value);
  else if (key == "p0") cfg.p0 = parse_real(key, value);
  else if (key == "samples") cfg.samples = parse_number<std::size_t>(key, value);
  else if (key == "radius") cfg.radius = parse_real(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void resolve_defaults(RunConfig& cfg) {
  const auto& names = builtin_model_names();
  if (std::find(names.begin(), names.end(), cfg.model) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown model '" + cfg.model + "'; built-in models: " + list);
  }
  const bool quintic = cfg.model == "quintic-mult";
  const bool cubic = cfg.model == "cubic-add";
  const bool linear_add = cfg.model == "linear-add";
  const bool additive_model = cubic || linear_add;

  if (!cfg.variant) {
    cfg.variant = additive_model ? SchemeVariant::AdditiveTamed : SchemeVariant::MultiplicativeTamed;
  }
  const bool additive = *cfg.variant == SchemeVariant::AdditiveTamed;

  if (cfg.alphas.empty()) {
    switch (cfg.command) {
      case Command::Converge:
        if (additive) cfg.alphas = cubic ? std::vector<double>{0.2, 0.7, 1, 1.5, 2} : std::vector<double>{1, 2};
        else cfg.alphas = quintic ? std::vector<double>{0.2, 0.4, 0.5, 1} : std::vector<double>{0.5, 1};
        break;
      case Command::Evolve:
        cfg.alphas = additive ? std::vector<double>{1, 1.5, 2, 2.5} : std::vector<double>{0.5, 0.7, 0.8, 1};
        break;
      case Command::Distribution:
        cfg.alphas = {additive ? (linear_add ? 2.0 : 1.5) : 1.0};
        break;
      case Command::Validate:
        break;
    }
  }
  if (!cfg.horizon) cfg.horizon = cfg.command == Command::Evolve ? 5.0 : 1.0;
  if (cfg.command == Command::Evolve) {
    if (!cfg.h) cfg.h = 1e-2;
    if (!cfg.ref_h) cfg.ref_h = 1e-4;
  }
  if (cfg.steps.empty()) {
    if (cfg.command == Command::Converge) cfg.steps = quintic ? pow2_range(8, 12) : pow2_range(6, 10);
    else if (cfg.command == Command::Distribution) cfg.steps = {linear_add ? 1024u : 512u};
  }
  if (!cfg.ref_steps) {
    if (cfg.command == Command::Converge) cfg.ref_steps = quintic ? 1u << 16 : 1u << 14;
    else if (cfg.command == Command::Distribution) cfg.ref_steps = linear_add ? 1u << 16 : 1u << 14;
  }
  if (cfg.x0.empty()) {
    const auto model = make_builtin(cfg.model, {cfg.sigma, cfg.a, cfg.b});
    cfg.x0.assign(model->state_dim(), 1.0);
  }
}

void validate(const RunConfig& cfg) {
  std::unique_ptr<SdeModel> model;
  try {
    model = make_builtin(cfg.model, {cfg.sigma, cfg.a, cfg.b});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.x0.size() != model->state_dim()) {
    throw ConfigError("x0 has " + std::to_string(cfg.x0.size()) + " entries, model state has " +
                      std::to_string(model->state_dim()));
  }
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
  if (cfg.command == Command::Validate) {
    if (!(cfg.p0 > 2.0)) throw ConfigError("p0 must exceed 2");
    if (cfg.samples == 0) throw ConfigError("samples must be positive");
    if (!(cfg.radius > 0.0)) throw ConfigError("radius must be positive");
    return;
  }

  const auto variant = cfg.variant.value_or(SchemeVariant::MultiplicativeTamed);
  if (variant == SchemeVariant::AdditiveTamed && !model->is_additive()) {
    throw ConfigError("variant additive needs an additive-noise model (cubic-add or linear-add)");
  }
  if (cfg.alphas.empty()) throw ConfigError("no alpha given");
  for (double a : cfg.alphas) {
    if (!(a > 0.0)) throw ConfigError("alpha must be positive");
  }
  if (cfg.alpha_ref && !(*cfg.alpha_ref > 0.0)) throw ConfigError("alpha_ref must be positive");
  const double horizon = cfg.horizon.value_or(1.0);
  if (!(horizon > 0.0)) throw ConfigError("T must be positive");
  if (cfg.paths < 2) throw ConfigError("paths must be at least 2");

  auto check_steps = [&] {
    if (cfg.steps.empty() || !cfg.ref_steps) throw ConfigError("steps and ref_steps are required");
    for (auto s : cfg.steps) {
      if (s == 0) throw ConfigError("step counts must be positive");
      if (*cfg.ref_steps % s != 0) {
        throw ConfigError("step count " + std::to_string(s) + " does not divide ref_steps " +
                          std::to_string(*cfg.ref_steps));
      }
    }
  };

  switch (cfg.command) {
    case Command::Converge:
      check_steps();
      if (cfg.steps.size() < 2) throw ConfigError("converge needs at least two step counts");
      break;
    case Command::Evolve: {
      const double h = cfg.h.value_or(0.0), ref_h = cfg.ref_h.value_or(0.0);
      if (!(h > 0.0) || !(ref_h > 0.0)) throw ConfigError("h and ref_h must be positive");
      if (!is_multiple(horizon, h)) throw ConfigError("T must be a multiple of h");
      if (!is_multiple(h, ref_h)) throw ConfigError("h must be a multiple of ref_h");
      break;
    }
    case Command::Distribution:
      check_steps();
      if (cfg.alphas.size() != 1) throw ConfigError("distribution takes a single alpha");
      if (cfg.steps.size() != 1) throw ConfigError("distribution takes a single step count");
      if (variant == SchemeVariant::StandardEuler) {
        throw ConfigError("distribution needs a tamed variant");
      }
      if (variant == SchemeVariant::MultiplicativeTamed && cfg.alphas.front() > 1.0) {
        throw ConfigError("multiplicative limit process is defined for alpha in (0, 1]");
      }
      if (cfg.paths < 100 || cfg.limit_paths < 100) {
        throw ConfigError("distribution needs paths and limit_paths >= 100");
      }
      if (cfg.limit_steps == 0) throw ConfigError("limit_steps must be positive");
      if (!(cfg.ks_threshold > 0.0 && cfg.ks_threshold <= 1.0)) {
        throw ConfigError("ks_threshold must lie in (0, 1]");
      }
      break;
    case Command::Validate:
      break;
  }
}

std::string canonical_text(const RunConfig& cfg) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("-"); };
  std::ostringstream s;
  s << "command=" << to_string(cfg.command) << '\n';
  s << "model=" << cfg.model << '\n';
  s << "variant=" << (cfg.variant ? std::string(to_string(*cfg.variant)) : "-") << '\n';
  s << "alpha=" << join_reals(cfg.alphas) << '\n';
  s << "T=" << opt(cfg.horizon) << '\n';
  s << "steps=";
  for (std::size_t i = 0; i < cfg.steps.size(); ++i) s << (i ? "," : "") << cfg.steps[i];
  s << '\n';
  s << "ref_steps=" << (cfg.ref_steps ? std::to_string(*cfg.ref_steps) : "-") << '\n';
  s << "h=" << opt(cfg.h) << '\n';
  s << "ref_h=" << opt(cfg.ref_h) << '\n';
  s << "paths=" << cfg.paths << '\n';
  s << "seed=" << cfg.seed << '\n';
  s << "ks_threshold=" << format_real(cfg.ks_threshold) << '\n';
  s << "alpha_ref=" << opt(cfg.alpha_ref) << '\n';
  s << "taming_exponent=" << opt(cfg.taming_exponent) << '\n';
  s << "x0=" << join_reals(cfg.x0) << '\n';
  s << "limit_paths=" << cfg.limit_paths << '\n';
  s << "limit_steps=" << cfg.limit_steps << '\n';
  s << "sigma=" << format_real(cfg.sigma) << '\n';
  s << "a=" << format_real(cfg.a) << '\n';
  s << "b=" << join_reals(cfg.b) << '\n';
  s << "p0=" << format_real(cfg.p0) << '\n';
  s << "samples=" << cfg.samples << '\n';
  s << "radius=" << format_real(cfg.radius) << '\n';
  return s.str();
}

std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(canonical_text(cfg)); }

}  // namespace tamed
