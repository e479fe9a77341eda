// Copyright 2026 The mgrh Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <mgrh/experiment.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace mgrh {
namespace {

namespace fs = std::filesystem;

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, "test.cfg");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const io::FormatError& e) {
    return e.what();
  }
  return "";
}

MicrogridInstance small_synthetic() {
  SyntheticSpec spec;
  spec.days = 2;
  spec.households = 3;
  spec.evs = 2;
  spec.pv_systems = 2;
  spec.grid_capacity = 12.0;
  return generate_synthetic(spec);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("mgrh_exp_" + name);
  fs::remove_all(d);
  return d;
}

TEST(RunConfig, ParsesListsAndScalars) {
  const auto c = parse(
      "mode = classical, dynamic\nscenario = A, B@C\nstep_size = 48, 8\niterations = 6\nseeds = 1, 2, 3\n"
      "eta = 0.5\nhorizon_days = 2\nout_dir = /tmp/x\ntrace = true\n");
  EXPECT_EQ(c.modes, (std::vector<RunMode>{RunMode::classical, RunMode::dynamic}));
  EXPECT_EQ(c.scenarios, (std::vector<std::string>{"A", "B@C"}));
  EXPECT_EQ(c.step_sizes, (std::vector<int>{48, 8}));
  EXPECT_EQ(c.iteration_budgets, (std::vector<int>{6}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(c.eta, 0.5);
  EXPECT_EQ(c.horizon_days, 2);
  EXPECT_TRUE(c.trace);
  const auto mixed = c.scenario("B@C");
  const auto b = ScenarioConfig::preset("B"), cc = ScenarioConfig::preset("C");
  EXPECT_EQ(mixed.alpha_pv, b.alpha_pv);
  EXPECT_EQ(mixed.alpha_load, b.alpha_load);
  EXPECT_EQ(mixed.alpha_da, cc.alpha_da);
  EXPECT_EQ(mixed.alpha_id, cc.alpha_id);
}

TEST(RunConfig, CustomScenario) {
  const auto c = parse("mode = static\nscenario = custom\nalpha_pv = 0.3\ngamma_load = 2\nseeds = 1\n");
  const auto s = c.scenario("custom");
  EXPECT_EQ(s.alpha_pv, 0.3);
  EXPECT_EQ(s.alpha_load, 0.0);
  EXPECT_EQ(s.gamma_load, 2.0);
}

TEST(RunConfig, Errors) {
  EXPECT_NE(parse_error("mode = static\nseeds = 1\ncolour = red\n").find("test.cfg:3: unknown key 'colour'"),
            std::string::npos);
  EXPECT_NE(parse_error("mode = classical\nseeds = 1\n").find("classical mode needs step_size"), std::string::npos);
  EXPECT_NE(parse_error("mode = static\nstep_size = 8\nseeds = 1\n").find("only valid with classical"),
            std::string::npos);
  EXPECT_NE(parse_error("mode = dynamic\nseeds = 1\n").find("dynamic mode needs iterations"), std::string::npos);
  EXPECT_NE(parse_error("mode = static\n").find("seeds"), std::string::npos);
  EXPECT_NE(parse_error("mode = rolling\nseeds = 1\n").find("unknown mode 'rolling'"), std::string::npos);
  EXPECT_NE(parse_error("mode = static\nseeds = 1, x\n").find("seeds: cannot parse 'x'"), std::string::npos);
  EXPECT_NE(parse_error("mode = static\nseeds = 1\nscenario = D\n").find("unknown scenario preset"),
            std::string::npos);
}

TEST(RunConfig, HashFollowsContentNotLayout) {
  const auto a = parse("mode = static\nseeds = 1, 2\n");
  const auto b = parse("# same\nseeds=1,2\n\nmode=static   \n");
  const auto c = parse("mode = static\nseeds = 1, 3\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Experiment, StaticSingleSeedGivesOneRowAndMean) {
  const auto inst = small_synthetic();
  auto cfg = parse("mode = static\nseeds = 1\nhorizon_days = 2\n");
  cfg.out_dir = scratch_dir("static").string();
  const auto res = run_matrix(cfg, inst);
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_EQ(res.rows[0].seed, "1");
  EXPECT_EQ(res.rows[0].param, "full");
  EXPECT_TRUE(res.rows[1].is_mean());
  EXPECT_EQ(res.rows[1].cost, res.rows[0].cost);
  const std::string text = slurp(res.results_path);
  EXPECT_EQ(text.rfind("# config_hash=" + cfg.hash() + "\n", 0), 0u);
  const auto back = read_results(res.results_path.string());
  EXPECT_EQ(back.config_hash, cfg.hash());
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].cost, res.rows[0].cost);
  fs::remove_all(cfg.out_dir);
}

TEST(Experiment, StepSizeGridAndAggregates) {
  const auto inst = small_synthetic();
  auto cfg = parse("mode = classical\nstep_size = 96, 48, 24, 16, 12, 8, 4, 2\nseeds = 1, 2, 3, 4, 5\n"
                   "horizon_days = 2\n");
  cfg.out_dir = scratch_dir("grid").string();
  const auto res = run_matrix(cfg, inst);
  ASSERT_EQ(res.rows.size(), 48u);
  const auto back = read_results(res.results_path.string());
  ASSERT_EQ(back.rows.size(), 48u);
  int means = 0;
  for (size_t g = 0; g < 8; ++g) {
    const auto* first = &back.rows[g * 6];
    const ResultRow& m = back.rows[g * 6 + 5];
    ASSERT_TRUE(m.is_mean());
    ++means;
    double cost = 0.0, bought = 0.0, net = 0.0;
    for (int i = 0; i < 5; ++i) {
      const ResultRow& r = first[i];
      EXPECT_EQ(r.param, m.param);
      EXPECT_EQ(r.seed, std::to_string(i + 1));
      cost += ResultRow::value(r.cost) / 5;
      bought += ResultRow::value(r.bought) / 5;
      net += ResultRow::value(r.net_bought()) / 5;
    }
    EXPECT_NEAR(ResultRow::value(m.cost), cost, 1e-9 + 1e-12 * std::abs(cost));
    EXPECT_NEAR(ResultRow::value(m.bought), bought, 1e-9 + 1e-12 * bought);
    EXPECT_NEAR(ResultRow::value(m.net_bought()), net, 1e-9 + 1e-12 * std::abs(net));
  }
  EXPECT_EQ(means, 8);
  fs::remove_all(cfg.out_dir);
}

TEST(Experiment, SameConfigSameBytes) {
  const auto inst = small_synthetic();
  auto cfg = parse("mode = static, classical, dynamic\nstep_size = 24\niterations = 5\nseeds = 7, 8\n"
                   "horizon_days = 2\nscenario = A, B@C\ntrace = true\n");
  const fs::path d1 = scratch_dir("bytes1"), d2 = scratch_dir("bytes2");
  cfg.out_dir = d1.string();
  const auto a = run_matrix(cfg, inst);
  cfg.out_dir = d2.string();
  const auto b = run_matrix(cfg, inst);
  EXPECT_EQ(slurp(a.results_path), slurp(b.results_path));
  EXPECT_EQ(slurp(d1 / "trace_dynamic_B@C_5_8.csv"), slurp(d2 / "trace_dynamic_B@C_5_8.csv"));
  EXPECT_FALSE(slurp(d1 / "trace_dynamic_B@C_5_8.csv").empty());
  EXPECT_EQ(a.rows.size(), 3u * 2u * 3u);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Experiment, CompareJoinsOnIterationCount) {
  const auto inst = small_synthetic();
  auto cfg = parse("mode = classical, dynamic\nstep_size = 96, 24\niterations = 2, 8\nseeds = 1, 2\n"
                   "horizon_days = 2\n");
  cfg.out_dir = scratch_dir("compare").string();
  const auto res = run_matrix(cfg, inst);
  const auto rows = compare_results(res.rows, res.rows);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].iterations, 2);
  EXPECT_EQ(rows[0].classical_param, "96");
  EXPECT_EQ(rows[1].iterations, 8);
  EXPECT_EQ(rows[1].classical_param, "24");
  // Two iterations leave no choice: both modes use the day-ahead slots.
  EXPECT_EQ(rows[0].classical_cost, rows[0].dynamic_cost);
  ASSERT_TRUE(rows[0].improvement_pct.has_value());
  EXPECT_EQ(*rows[0].improvement_pct, 0.0);
  std::ostringstream os;
  write_comparison_csv(os, rows);
  EXPECT_EQ(os.str().rfind("scenario,iterations,classical_step,", 0), 0u);
  fs::remove_all(cfg.out_dir);
}

TEST(Experiment, FormatsNanoUnits) {
  EXPECT_EQ(detail::format_nano(1500000000), "1.500000000");
  EXPECT_EQ(detail::format_nano(-5), "-0.000000005");
  EXPECT_EQ(detail::format_nano(0), "0.000000000");
  EXPECT_EQ(detail::to_nano(0.1), 100000000);
}

TEST(Experiment, MissingDataDirectoryIsReported) {
  auto cfg = parse("mode = static\nseeds = 1\ndata_dir = /nonexistent/mgrh\n");
  EXPECT_THROW(instance_for(cfg), io::FormatError);
}

}  // namespace
}  // namespace mgrh
