#include <gtest/gtest.h>

#include <sstream>

#include "howde/config.hpp"

namespace howde {
namespace {

RunConfig load(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  load_config(cfg, in, "test.cfg");
  return cfg;
}

TEST(Config, Defaults) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.params.delta_T_H, 28);
  EXPECT_EQ(cfg.params.delta_T_W, 42);
  EXPECT_DOUBLE_EQ(cfg.params.C_hours, 0.4);
  EXPECT_DOUBLE_EQ(cfg.params.C_days_H, 0.4);
  EXPECT_DOUBLE_EQ(cfg.params.C_days_W, 0.4);
  EXPECT_DOUBLE_EQ(cfg.params.f_hours_H, 0.7);
  EXPECT_DOUBLE_EQ(cfg.params.f_hours_W, 0.4);
  EXPECT_DOUBLE_EQ(cfg.params.f_days_W, 0.6);
  EXPECT_EQ(cfg.params.window_mode, WindowMode::kCentered);
  EXPECT_EQ(cfg.bootstrap_B, 1000);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, ParsesKeyValueLines) {
  const RunConfig cfg = load(
      "# comment\n"
      "delta_T_H = 14\n"
      "\n"
      "f_hours_H=0.55   # trailing comment\n"
      "window_mode = PAST_ONLY\n"
      "night_bins = 0-5,22,23\n"
      "business_days = Mon-Thu\n"
      "protocol = user\n"
      "detector = timegeo\n"
      "seed = 18446744073709551615\n"
      "users = 7\n");
  EXPECT_EQ(cfg.params.delta_T_H, 14);
  EXPECT_DOUBLE_EQ(cfg.params.f_hours_H, 0.55);
  EXPECT_EQ(cfg.params.window_mode, WindowMode::kPastOnly);
  EXPECT_EQ(cfg.params.windows.night_bins, HourSet::range(0, 6) | HourSet::range(22, 24));
  EXPECT_EQ(cfg.params.windows.business_days, WeekdaySet::range(0, 4));
  EXPECT_EQ(cfg.protocol, Granularity::kUser);
  EXPECT_EQ(cfg.detector, Detector::kTimeGeo);
  EXPECT_EQ(cfg.seed, 18446744073709551615ull);
  EXPECT_EQ(cfg.population.users, 7);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(load("delta_t_h = 3\n"), ConfigError);
  EXPECT_THROW(load("f_hours_H = lots\n"), ConfigError);
  EXPECT_THROW(load("window_mode = SIDEWAYS\n"), ConfigError);
  EXPECT_THROW(load("just a line\n"), ConfigError);
  EXPECT_THROW(load("night_bins = 3-30\n"), ConfigError);
  try {
    load("\n\nbogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("test.cfg:3"), std::string::npos);
  }
}

TEST(Config, LaterSettingsOverrideEarlier) {
  RunConfig cfg = load("C_hours = 0.2\nf_days_W = 0.3\n");
  set_config_key(cfg, "C_hours", "0.6");
  EXPECT_DOUBLE_EQ(cfg.params.C_hours, 0.6);
  EXPECT_DOUBLE_EQ(cfg.params.f_days_W, 0.3);
}

TEST(Config, ValidateRejectsOutOfRange) {
  RunConfig cfg;
  set_config_key(cfg, "delta_T_H", "27");
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = RunConfig{};
  set_config_key(cfg, "f_hours_W", "1.5");
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = RunConfig{};
  set_config_key(cfg, "bootstrap_B", "-1");
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Config, SetParsers) {
  EXPECT_EQ(parse_hour_set("9-15"), HourSet::range(9, 16));
  EXPECT_EQ(parse_weekday_set("Mon-Fri"), WeekdaySet::range(0, 5));
  EXPECT_EQ(parse_weekday_set("5,6"), WeekdaySet::range(5, 7));
  EXPECT_THROW(parse_weekday_set("Funday"), ConfigError);
  EXPECT_THROW(parse_hour_set(""), ConfigError);
  EXPECT_FALSE(config_keys().empty());
  for (const auto& k : config_keys()) {
    EXPECT_EQ(k.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_"), std::string::npos) << k;
  }
}

}  // namespace
}  // namespace howde
