#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tamed/commands.hpp"
#include "tamed/report.hpp"
#include "tamed/run_config.hpp"
#include "tamed/sde_model.hpp"

namespace {

struct FlagSpec {
  const char* key;
  const char* names;
  const char* help;
};

// Every flag maps onto a config key so the file and the command line share one parser.
const FlagSpec kFlags[] = {
    {"model", "-m,--model", "built-in model"},
    {"variant", "--variant", "multiplicative | additive | standard"},
    {"alpha", "-a,--alpha", "alpha or comma list of alphas"},
    {"T", "-T,--horizon", "time horizon"},
    {"steps", "-n,--steps", "coarse step counts, e.g. 2^8..2^12 or 64,128"},
    {"ref_steps", "--ref-steps", "reference step count"},
    {"h", "--dt", "coarse step size (evolve)"},
    {"ref_h", "--ref-dt", "reference step size (evolve)"},
    {"paths", "-p,--paths", "ensemble size"},
    {"seed", "-s,--seed", "master seed"},
    {"out", "-o,--out", "output directory"},
    {"threads", "-j,--threads", "worker threads; 1 runs the serial reference path"},
    {"ks_threshold", "--ks-threshold", "KS rejection threshold (distribution)"},
    {"alpha_ref", "--alpha-ref", "taming rate of the reference runs"},
    {"taming_exponent", "--taming-exponent", "multiplicative taming exponent"},
    {"x0", "--x0", "initial state, comma separated"},
    {"limit_paths", "--limit-paths", "limit-process ensemble size (distribution)"},
    {"limit_steps", "--limit-steps", "limit-process grid size (distribution)"},
    {"sigma", "--sigma", "additive noise intensity (cubic-add, linear-add)"},
    {"a", "--drift-a", "drift coefficient (linear, linear-add)"},
    {"b", "--diffusion-b", "diffusion coefficients (linear)"},
    {"p0", "--p0", "monotonicity exponent (validate)"},
    {"samples", "--samples", "sampled pairs (validate)"},
    {"radius", "--radius", "sampling radius (validate)"},
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw tamed::ConfigError("cannot read config file " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tamed Euler schemes for SDEs with super-linear coefficients: strong order,\n"
               "error evolution and asymptotic error distribution experiments."};
  app.set_version_flag("--version", std::string(tamed::kVersion));
  app.require_subcommand(1);

  std::string models;
  for (const auto& n : tamed::builtin_model_names()) models += (models.empty() ? "" : ", ") + n;

  std::string config_file;
  std::map<std::string, std::string> values;
  const std::pair<tamed::Command, const char*> commands[] = {
      {tamed::Command::Converge, "strong order study per alpha (CSV + log-log SVG)"},
      {tamed::Command::Evolve, "mean-square error over time per alpha"},
      {tamed::Command::Distribution, "normalized errors against limit-process samples"},
      {tamed::Command::Validate, "sampled monotonicity and derivative checks"},
  };
  std::map<CLI::App*, tamed::Command> by_app;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& [command, description] : commands) {
    auto* sub = app.add_subcommand(std::string(tamed::to_string(command)), description);
    sub->add_option("-c,--config", config_file, "key = value file; flags override it")
        ->check(CLI::ExistingFile);
    for (const auto& f : kFlags) {
      std::string help = f.help;
      if (std::string(f.key) == "model") help += " (" + models + ")";
      options.emplace_back(f.key, sub->add_option(f.names, values[f.key], help));
    }
    by_app[sub] = command;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tamed::kExitValidation;
  }

  tamed::RunConfig cfg;
  for (const auto& [sub, command] : by_app) {
    if (sub->parsed()) cfg.command = command;
  }
  try {
    if (!config_file.empty()) {
      for (const auto& [k, v] : tamed::parse_config_text(read_file(config_file))) {
        tamed::apply_setting(cfg, k, v);
      }
    }
    for (const auto& [key, option] : options) {
      if (option->count() > 0) tamed::apply_setting(cfg, key, values[key]);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tamed::kExitValidation;
  }
  return tamed::run_command(cfg, std::cout, std::cerr);
}
