#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ecp/cli/config.hpp"

namespace {

using ecp::cli::Mode;
using ecp::cli::Source;
using Flags = std::vector<std::pair<std::string, std::string>>;

ecp::cli::RunConfig from_flags(const Flags& flags) { return ecp::cli::resolve_config({}, flags); }

ecp::cli::Source source_of(const ecp::cli::RunConfig& cfg, std::string_view key) {
  for (const auto& p : cfg.provenance)
    if (p.key == key) return p.source;
  ADD_FAILURE() << "no provenance for " << key;
  return Source::default_value;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

TEST(Config, MinimalFlags) {
  const auto cfg = from_flags({{"J", "0.3"}, {"delta", "-1"}, {"lambda", "0.01"}, {"mode", "force-sweep"}, {"rmax", "10"}});
  EXPECT_EQ(cfg.mode, Mode::force_sweep);
  EXPECT_EQ(cfg.J, std::vector<double>{0.3});
  EXPECT_EQ(cfg.delta, std::vector<double>{-1.0});
  EXPECT_EQ(cfg.lambda, 0.01);
  EXPECT_EQ(cfg.rmax, 10);
  EXPECT_EQ(cfg.N, 400);
  EXPECT_FALSE(cfg.N_explicit);
  EXPECT_EQ(source_of(cfg, "J"), Source::flag);
  EXPECT_EQ(source_of(cfg, "omega"), Source::default_value);
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Config, ModeIsRequired) {
  EXPECT_THROW(from_flags({{"J", "0.3"}}), ecp::config_error);
  EXPECT_THROW(from_flags({{"mode", "sweep-everything"}}), ecp::config_error);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"lamda", "0.01"}}), ecp::config_error);
  const auto msg = message_of([] { ecp::cli::parse_config_text("mode = force-sweep\nlamda = 0.1\n", "run.cfg"); });
  EXPECT_NE(msg.find("run.cfg:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("lamda"), std::string::npos) << msg;
}

TEST(Config, FileGrammar) {
  const auto raw = ecp::cli::parse_config_text(
      "# comment line\n\n  mode = force-sweep   # trailing comment\nJ=0.3, 0.4\n delta = -1\n", "a.cfg");
  ASSERT_EQ(raw.size(), 3u);
  EXPECT_EQ(raw.at("J").text, "0.3, 0.4");
  EXPECT_EQ(raw.at("mode").origin, "a.cfg:3");
  const auto cfg = ecp::cli::resolve_config(raw, {});
  EXPECT_EQ(cfg.J, (std::vector<double>{0.3, 0.4}));
  EXPECT_EQ(source_of(cfg, "delta"), Source::file);
}

TEST(Config, FileErrorsCarryLineNumbers) {
  EXPECT_NE(message_of([] { ecp::cli::parse_config_text("mode force-sweep\n", "x.cfg"); }).find("x.cfg:1"),
            std::string::npos);
  EXPECT_NE(message_of([] { ecp::cli::parse_config_text("mode = a\nJ =\n", "x.cfg"); }).find("x.cfg:2"),
            std::string::npos);
  EXPECT_NE(message_of([] { ecp::cli::parse_config_text("J = 1\n\nJ = 2\n", "x.cfg"); }).find("x.cfg:3"),
            std::string::npos);
}

TEST(Config, NegativeHoppingInFileIsConfigError) {
  const auto raw = ecp::cli::parse_config_text("mode = force-sweep\nJ = -0.1\n", "bad.cfg");
  EXPECT_THROW(ecp::cli::resolve_config(raw, {}), ecp::config_error);
}

TEST(Config, FlagOverridesFileWithProvenance) {
  const auto raw = ecp::cli::parse_config_text("mode = force-sweep\nJ = 0.3\nlambda = 0.02\n", "f.cfg");
  const auto cfg = ecp::cli::resolve_config(raw, {{"J", "0.4"}});
  EXPECT_EQ(cfg.J, std::vector<double>{0.4});
  EXPECT_EQ(cfg.lambda, 0.02);
  EXPECT_EQ(source_of(cfg, "J"), Source::flag);
  EXPECT_EQ(source_of(cfg, "lambda"), Source::file);
}

TEST(Config, PresetsExpandAndYieldToFlags) {
  const auto fig2 = from_flags({{"preset", "fig2"}});
  EXPECT_EQ(fig2.mode, Mode::force_sweep);
  EXPECT_EQ(fig2.J, (std::vector<double>{0.3, 0.4}));
  EXPECT_EQ(fig2.delta, std::vector<double>{-1.0});
  EXPECT_EQ(source_of(fig2, "J"), Source::preset);

  const auto fig3 = from_flags({{"preset", "fig3"}});
  EXPECT_EQ(fig3.delta, (std::vector<double>{-2.0, -3.0}));
  EXPECT_EQ(fig3.J, std::vector<double>{0.6});

  const auto fig4 = from_flags({{"preset", "fig4"}});
  EXPECT_EQ(fig4.mode, Mode::decay_profile);
  EXPECT_EQ(fig4.asteps, 99);

  const auto fig5 = from_flags({{"preset", "fig5"}});
  EXPECT_EQ(fig5.mode, Mode::thermal_sweep);
  EXPECT_EQ(fig5.nlist, (std::vector<int>{100, 200, 400}));
  EXPECT_EQ(fig5.temperatures, (std::vector<double>{0.0, 0.1, 1.0}));
  EXPECT_EQ(fig5.lambda, 0.1);
  // lambda / gap = 0.25 is inside the warning band.
  EXPECT_FALSE(fig5.warnings.empty());

  const auto over = from_flags({{"preset", "fig2"}, {"J", "0.2"}});
  EXPECT_EQ(over.J, std::vector<double>{0.2});
  EXPECT_THROW(from_flags({{"preset", "fig9"}}), ecp::config_error);
}

TEST(Config, RegimeViolationsAreDistinct) {
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"J", "0.6"}, {"delta", "-1"}}), ecp::regime_violation);
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"J", "0.5"}, {"delta", "-1"}}), ecp::band_edge_error);
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"lambda", "0.3"}}), ecp::regime_violation);
  EXPECT_THROW(from_flags({{"mode", "decay-profile"}, {"amin", "-1"}}), ecp::regime_violation);
}

TEST(Config, ThermalSweepNeedsExplicitLength) {
  EXPECT_THROW(from_flags({{"mode", "thermal-sweep"}}), ecp::config_error);
  const auto cfg = from_flags({{"mode", "thermal-sweep"}, {"N", "50"}});
  EXPECT_EQ(cfg.nlist, std::vector<int>{50});
  EXPECT_THROW(from_flags({{"mode", "thermal-sweep"}, {"N", "50"}, {"temperatures", "1,0.5"}}), ecp::config_error);
  EXPECT_THROW(from_flags({{"mode", "thermal-sweep"}, {"nlist", "5"}}), ecp::config_error);
}

TEST(Config, Eps0AlternativeToDelta) {
  const auto cfg = from_flags({{"mode", "force-sweep"}, {"eps0", "1.2"}});
  ASSERT_EQ(cfg.delta.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.delta[0], -0.8);
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"eps0", "1.2"}, {"delta", "-1"}}), ecp::config_error);
}

TEST(Config, MalformedNumbers) {
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"lambda", "abc"}}), ecp::config_error);
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"N", "4.5"}}), ecp::config_error);
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"format", "xml"}}), ecp::config_error);
  EXPECT_THROW(from_flags({{"mode", "force-sweep"}, {"rmin", "5"}, {"rmax", "2"}}), ecp::config_error);
}

TEST(Config, OracleSeparationLimit) {
  EXPECT_NO_THROW(from_flags({{"mode", "oracle-check"}, {"N", "40"}, {"rmax", "10"}}));
  EXPECT_THROW(from_flags({{"mode", "oracle-check"}, {"N", "40"}, {"rmax", "11"}}), ecp::config_error);
  EXPECT_THROW(from_flags({{"mode", "oracle-check"}, {"J", "0"}, {"N", "40"}}), ecp::regime_violation);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "ecp_config_test.cfg";
  {
    std::ofstream out(path);
    out << "preset = fig2\nrmax = 5\n";
  }
  const auto cfg = ecp::cli::load_config(path, {{"format", "json"}});
  EXPECT_EQ(cfg.rmax, 5);
  EXPECT_EQ(cfg.format, ecp::cli::Format::json);
  std::filesystem::remove(path);
  EXPECT_THROW(ecp::cli::load_config(path, {}), ecp::config_error);
}

TEST(Config, Linspace) {
  EXPECT_EQ(ecp::cli::detail::linspace(0.0, 1.0, 1), std::vector<double>{0.0});
  const auto v = ecp::cli::detail::linspace(-4.0, -1.25, 56);
  ASSERT_EQ(v.size(), 56u);
  EXPECT_EQ(v.front(), -4.0);
  EXPECT_EQ(v.back(), -1.25);
}

}  // namespace
