#include <gtest/gtest.h>

#include "tamed/run_config.hpp"

using namespace tamed;

TEST(RunConfig, ParseText) {
  const auto kv = parse_config_text("# experiment\nmodel = cubic-add\n\n alpha=0.2, 0.7 # list\npaths=10\n");
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0].first, "model");
  EXPECT_EQ(kv[0].second, "cubic-add");
  EXPECT_EQ(kv[1].second, "0.2, 0.7");
  EXPECT_THROW(parse_config_text("model cubic-add\n"), ConfigError);
  EXPECT_THROW(parse_config_text("= 3\n"), ConfigError);
}

TEST(RunConfig, Steps) {
  EXPECT_EQ(parse_steps("2^3..2^5"), (std::vector<std::size_t>{8, 16, 32}));
  EXPECT_EQ(parse_steps("64, 2^7,256"), (std::vector<std::size_t>{64, 128, 256}));
  EXPECT_THROW(parse_steps("2^5..2^3"), ConfigError);
  EXPECT_THROW(parse_steps("abc"), ConfigError);
  EXPECT_THROW(parse_steps("8..16"), ConfigError);
}

TEST(RunConfig, FlagsOverrideFile) {
  RunConfig cfg;
  for (const auto& [k, v] : parse_config_text("paths = 10\nseed = 3\n")) apply_setting(cfg, k, v);
  apply_setting(cfg, "paths", "25");
  EXPECT_EQ(cfg.paths, 25u);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_THROW(apply_setting(cfg, "bogus", "1"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "paths", "-3"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "T", "nan"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "variant", "implicit"), ConfigError);
}

TEST(RunConfig, QuinticConvergeDefaults) {
  RunConfig cfg;
  resolve_defaults(cfg);
  EXPECT_EQ(cfg.steps, (std::vector<std::size_t>{256, 512, 1024, 2048, 4096}));
  EXPECT_EQ(*cfg.ref_steps, 65536u);
  EXPECT_EQ(cfg.paths, 1000u);
  EXPECT_EQ(cfg.x0, std::vector<double>{1.0});
  EXPECT_EQ(*cfg.horizon, 1.0);
  EXPECT_EQ(cfg.alphas, (std::vector<double>{0.2, 0.4, 0.5, 1.0}));
  EXPECT_EQ(*cfg.variant, SchemeVariant::MultiplicativeTamed);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(RunConfig, CubicAndEvolveDefaults) {
  RunConfig cfg;
  cfg.model = "cubic-add";
  resolve_defaults(cfg);
  EXPECT_EQ(*cfg.variant, SchemeVariant::AdditiveTamed);
  EXPECT_EQ(*cfg.ref_steps, 16384u);
  EXPECT_EQ(cfg.alphas, (std::vector<double>{0.2, 0.7, 1, 1.5, 2}));

  RunConfig ev;
  ev.command = Command::Evolve;
  ev.model = "cubic-add";
  resolve_defaults(ev);
  EXPECT_EQ(ev.alphas, (std::vector<double>{1, 1.5, 2, 2.5}));
  EXPECT_EQ(*ev.h, 1e-2);
  EXPECT_EQ(*ev.ref_h, 1e-4);
  EXPECT_NO_THROW(validate(ev));
}

TEST(RunConfig, ValidationErrors) {
  RunConfig cfg;
  cfg.model = "nope";
  try {
    resolve_defaults(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("quintic-mult"), std::string::npos);
  }

  RunConfig div;
  div.steps = {48, 64};
  resolve_defaults(div);
  EXPECT_THROW(validate(div), ConfigError);

  RunConfig add;
  add.variant = SchemeVariant::AdditiveTamed;
  resolve_defaults(add);
  EXPECT_THROW(validate(add), ConfigError);

  RunConfig val;
  val.command = Command::Validate;
  val.p0 = 2.0;
  resolve_defaults(val);
  EXPECT_THROW(validate(val), ConfigError);

  RunConfig dist;
  dist.command = Command::Distribution;
  dist.paths = 99;
  resolve_defaults(dist);
  EXPECT_THROW(validate(dist), ConfigError);

  RunConfig ev;
  ev.command = Command::Evolve;
  ev.h = 0.3;
  resolve_defaults(ev);
  EXPECT_THROW(validate(ev), ConfigError);

  RunConfig two;
  two.paths = 2;
  resolve_defaults(two);
  EXPECT_NO_THROW(validate(two));
}

TEST(RunConfig, HashIgnoresThreadsAndOutput) {
  RunConfig a;
  resolve_defaults(a);
  RunConfig b = a;
  b.threads = 7;
  b.out_dir = "/elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(RunConfig, CommandNames) {
  for (auto c : {Command::Converge, Command::Evolve, Command::Distribution, Command::Validate})
    EXPECT_EQ(parse_command(to_string(c)), c);
  EXPECT_FALSE(parse_command("plot").has_value());
}
