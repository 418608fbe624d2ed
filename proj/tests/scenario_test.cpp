#include "spinchain/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spinchain;

namespace {

std::string error_of(const std::string& yaml) {
  try {
    validate(parse_config(yaml, "case.yaml"));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, Defaults) {
  const ScenarioConfig c;
  EXPECT_DOUBLE_EQ(c.dt, 0.005);
  EXPECT_DOUBLE_EQ(c.horizon, 20.0);
  EXPECT_DOUBLE_EQ(c.tau, 5.0);
  EXPECT_EQ(c.zero_pad, 4);
  EXPECT_EQ(c.steps(), 4000u);
}

TEST(Config, ParsesNestedKeys) {
  const auto c = parse_config(R"(
name: demo
model: aliphatic
n: 3
couplings: {J_gem: -12, delta_J: 4, sigma_J: 8}
initial: {flips: [1, 3], signs: [1, -1]}
observe: [SST, 2]
engine: full
order: 0
)");
  EXPECT_EQ(c.name, "demo");
  EXPECT_EQ(c.model, Model::Aliphatic);
  EXPECT_DOUBLE_EQ(c.j_gem, -12.0);
  EXPECT_DOUBLE_EQ(c.j_gauche, 6.0);
  EXPECT_DOUBLE_EQ(c.j_anti, 2.0);
  EXPECT_EQ(c.flips, (std::vector<int>{1, 3}));
  EXPECT_EQ(c.signs, (std::vector<int>{1, -1}));
  ASSERT_EQ(c.observe.size(), 2u);
  EXPECT_EQ(std::get<std::string>(c.observe[0]), "SST");
  EXPECT_EQ(std::get<int>(c.observe[1]), 2);
  EXPECT_EQ(c.engine, Engine::Full);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, ErrorsNameFieldAndLine) {
  const std::string e = error_of("model: xy\nn: 3\nobserve: [0]\n");
  EXPECT_NE(e.find("case.yaml:3"), std::string::npos) << e;
  EXPECT_NE(e.find("'observe'"), std::string::npos) << e;

  const std::string unknown = error_of("model: xy\nspeed: 3\n");
  EXPECT_NE(unknown.find("case.yaml:2"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("speed"), std::string::npos) << unknown;

  EXPECT_NE(error_of("model: quantum\n").find("'model'"), std::string::npos);
  EXPECT_NE(error_of("n: three\n").find("'n'"), std::string::npos);
  EXPECT_NE(error_of("dt: -1\n").find("'dt'"), std::string::npos);
  EXPECT_NE(error_of("tau: 0\n").find("'tau'"), std::string::npos);
  EXPECT_NE(error_of("zero_pad: 0\n").find("'zero_pad'"), std::string::npos);
  EXPECT_NE(error_of("peak_threshold: 1.5\n").find("'peak_threshold'"), std::string::npos);
  EXPECT_NE(error_of("n: 3\ninitial: {flips: [4]}\n").find("'initial.flips'"), std::string::npos);
  EXPECT_NE(error_of("model: aliphatic\nn: 3\ninitial: {flips: [1, 2], signs: [1]}\n").find("'initial.signs'"),
            std::string::npos);
  EXPECT_NE(error_of("model: aliphatic\nn: 3\norder: 1\n").find("'order'"), std::string::npos);
  EXPECT_NE(error_of("model: xy\nn: 3\nobserve: [TTS]\n").find("'observe'"), std::string::npos);
  EXPECT_NE(error_of("n: [1\n").find("case.yaml:"), std::string::npos);
}

TEST(Config, SizeGuardsNameTheLimit) {
  const std::string full = error_of("model: aliphatic\nn: 7\nengine: full\n");
  EXPECT_NE(full.find("4096"), std::string::npos) << full;
  EXPECT_NE(full.find("n <= 6"), std::string::npos) << full;
  EXPECT_TRUE(error_of("model: aliphatic\nn: 6\nengine: full\n").empty());
  const std::string restricted = error_of("model: aliphatic\nn: 15\nengine: restricted\n");
  EXPECT_NE(restricted.find("16384"), std::string::npos) << restricted;
  EXPECT_TRUE(error_of("model: aliphatic\nn: 14\nengine: restricted\n").empty());
  EXPECT_NE(error_of("model: xy\nn: 13\n").find("4096"), std::string::npos);
}

TEST(Scenario, SimulationReportsConservation) {
  ScenarioConfig c = xy_preset("t", 3, {1}, {}, true);
  c.horizon = 2.0;
  const auto r = run_simulation(c);
  ASSERT_EQ(r.trajectories.size(), 3u);
  EXPECT_EQ(r.trajectories[0].observable_id, "I1z");
  EXPECT_LT(r.conserved_deviation, 1e-10);
  EXPECT_LT(r.energy_deviation, 1e-10);
  EXPECT_NEAR(r.conserved_value, 0.5, 1e-12);  // (-1 + 1 + 1) / 2
}

TEST(Scenario, AliphaticEnginesGiveSameTrajectories) {
  ScenarioConfig c = aliphatic_preset("t", 3, {1, 2, 3}, {1, 1, -1}, {std::string("SST"), 1});
  c.horizon = 3.0;
  const auto restricted = run_simulation(c);
  c.engine = Engine::Full;
  const auto full = run_simulation(c);
  ASSERT_EQ(full.trajectories.size(), 2u);
  EXPECT_EQ(full.trajectories[1].observable_id, "P_TSS");
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < full.trajectories[k].size(); ++i) {
      EXPECT_NEAR(full.trajectories[k].values[i], restricted.trajectories[k].values[i], 1e-8);
    }
  }
}

TEST(Scenario, AnalyticTextXY) {
  ScenarioConfig c = xy_preset("t", 3, {1}, {1});
  const std::string text = analytic_text(c);
  EXPECT_NE(text.find("{k: 1, l: 2, nu: 3.5355}"), std::string::npos) << text;
  EXPECT_NE(text.find("{k: 1, l: 3, nu: 7.0711}"), std::string::npos) << text;
  c.n = 2;
  EXPECT_NE(analytic_text(c).find("{k: 1, l: 2, nu: 5.0000}"), std::string::npos);
}

TEST(Scenario, AnalyticTextAliphaticPrintsEstimateNextToSplittings) {
  const ScenarioConfig c = aliphatic_preset("t", 4, {1}, {}, {1});
  const std::string text = analytic_text(c);
  EXPECT_NE(text.find("pt2_splitting_estimate_hz: -0.4464"), std::string::npos) << text;
  EXPECT_NE(text.find("pair: nu12/nu34"), std::string::npos) << text;
  EXPECT_NE(text.find("pair: nu13/nu24"), std::string::npos) << text;
}

TEST(Scenario, BlocksTextForTwoGroups) {
  const ScenarioConfig c = aliphatic_preset("t", 2, {1}, {}, {1});
  const std::string text = blocks_text(c);
  const auto at = text.find("off_diagonal:");
  ASSERT_NE(at, std::string::npos);
  const std::string tail = text.substr(at);
  int count = 0;
  for (std::size_t p = tail.find("value: 2.5000"); p != std::string::npos; p = tail.find("value: 2.5000", p + 1)) ++count;
  EXPECT_EQ(count, 2);
  EXPECT_NE(tail.find("type-I}"), std::string::npos);
  EXPECT_NE(tail.find("type-II}"), std::string::npos);
}

TEST(Scenario, OutputsAreByteIdenticalAcrossRunsAndThreads) {
  const auto dir = std::filesystem::temp_directory_path() / "spinchain_scenario_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "a");
  std::filesystem::create_directories(dir / "b");
  ScenarioConfig c = xy_preset("det", 4, {1}, {}, true);
  c.horizon = 5.0;
  const auto r1 = run_simulation(c, 1);
  const auto r4 = run_simulation(c, 4);
  write_spectra(c, spectra_from(c, r1), (dir / "a").string());
  write_spectra(c, spectra_from(c, r4), (dir / "b").string());
  write_trajectories(c, r1, (dir / "a").string());
  write_trajectories(c, r4, (dir / "b").string());
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "a")) {
    EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / e.path().filename())) << e.path();
    ++files;
  }
  EXPECT_EQ(files, 12);
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "det.I3z.traj.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "det.I3z.spec.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "det.I3z.report.txt"));
  std::filesystem::remove_all(dir);
}

TEST(Scenario, TrajectoryFileFormat) {
  ScenarioConfig c = xy_preset("fmt", 2, {1}, {1});
  c.horizon = 0.01;
  const std::string csv = io::trajectory_csv(run_simulation(c).trajectories[0]);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_seconds,value");
  EXPECT_NE(csv.find("\n0,-0.5\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\n0.005,"), std::string::npos) << csv;
}
