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


// mgrh: synthetic data, simulation matrices, start-slot schedules and
// classical-versus-dynamic comparison tables.

#include <mgrh/config.hpp>
#include <mgrh/experiment.hpp>
#include <mgrh/instance_io.hpp>
#include <mgrh/scheduler.hpp>
#include <mgrh/synthetic.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace mgrh;

void print_summary(const MatrixResult& res) {
  std::printf("%-10s %-8s %-6s %12s %10s %12s %10s\n", "mode", "scenario", "param", "cost_eur", "pv_usage",
              "net_bought", "shortfall");
  for (const auto& r : res.rows) {
    if (!r.is_mean()) continue;
    std::printf("%-10s %-8s %-6s %12.4f %9s%% %12.3f %10.1f\n", r.mode.c_str(), r.scenario.c_str(), r.param.c_str(),
                ResultRow::value(r.cost),
                r.pv_usage_pct ? io::format_fixed(ResultRow::value(*r.pv_usage_pct), 2).c_str() : "-",
                ResultRow::value(r.net_bought()), ResultRow::value(r.shortfall_slots));
  }
  std::printf("wrote %s\n", res.results_path.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust rolling-horizon microgrid scheduling"};
  app.require_subcommand(1);

  SyntheticSpec spec;
  std::string data_out = "data";
  auto* gen = app.add_subcommand("gen-data", "Write a synthetic instance directory");
  gen->add_option("-o,--out", data_out, "Output directory")->capture_default_str();
  gen->add_option("--days", spec.days, "Horizon in days")->capture_default_str();
  gen->add_option("--households", spec.households)->capture_default_str();
  gen->add_option("--evs", spec.evs)->capture_default_str();
  gen->add_option("--pv-systems", spec.pv_systems)->capture_default_str();
  gen->add_option("--grid-capacity", spec.grid_capacity, "kWh per slot")->capture_default_str();
  gen->add_option("--seed", spec.seed)->capture_default_str();

  std::string config_path, out_override;
  auto* sim = app.add_subcommand("simulate", "Run the experiment matrix of a config file");
  sim->add_option("config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
  sim->add_option("-o,--out", out_override, "Override out_dir");

  std::string sched_config, sched_out = "schedule.csv", scenario = "B", data_dir;
  int budget = 36, days = 3;
  double eta = 1.0;
  int improved = 8;
  bool exact = false;
  std::uint64_t synthetic_seed = 42;
  auto* sch = app.add_subcommand("schedule", "Select dynamic start slots and write schedule.csv");
  sch->add_option("-k,--iterations", budget, "Iteration budget, forced slots included")->capture_default_str();
  sch->add_option("-s,--scenario", scenario)->capture_default_str();
  sch->add_option("--data", data_dir, "Instance directory (default: synthetic)");
  sch->add_option("--days", days, "Synthetic horizon in days")->capture_default_str();
  sch->add_option("--synthetic-seed", synthetic_seed)->capture_default_str();
  sch->add_option("--eta", eta)->capture_default_str();
  sch->add_option("--improved-window", improved, "Slots of improved PV forecast")->capture_default_str();
  sch->add_flag("--exact", exact, "Branch and bound instead of greedy");
  sch->add_option("-o,--out", sched_out)->capture_default_str();

  std::string classical_path, dynamic_path, compare_out = "compare.csv";
  auto* cmp = app.add_subcommand("compare", "Join classical and dynamic results on iteration count");
  cmp->add_option("classical", classical_path, "results.csv with classical rows")->required()->check(CLI::ExistingFile);
  cmp->add_option("dynamic", dynamic_path, "results.csv with dynamic rows (default: the first file)")
      ->check(CLI::ExistingFile);
  cmp->add_option("-o,--out", compare_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto inst = generate_synthetic(spec);
      write_instance(inst, data_out);
      std::printf("wrote %d slots, %zu households, %zu PV systems, %zu EVs to %s\n", inst.slots(),
                  inst.loads.size(), inst.pv.size(), inst.evs.size(), data_out.c_str());
    } else if (*sim) {
      RunConfig cfg = load_run_config(config_path);
      if (!out_override.empty()) cfg.out_dir = out_override;
      print_summary(run_matrix(cfg));
    } else if (*sch) {
      MicrogridInstance inst;
      if (data_dir.empty()) {
        SyntheticSpec s;
        s.days = days;
        s.seed = synthetic_seed;
        inst = generate_synthetic(s);
      } else {
        inst = load_instance(data_dir);
      }
      const auto d = dynamic_schedule_detail(inst, ScenarioConfig::preset(scenario), DynamicPvRamp{improved}, budget,
                                             eta, exact ? SelectionMode::exact : SelectionMode::greedy);
      std::ofstream out(sched_out);
      if (!out) throw std::runtime_error("cannot write " + sched_out);
      write_schedule_csv(out, d.schedule, d.selection);
      std::printf("%zu start slots, objective %.6f EUR, wrote %s\n", d.schedule.start_slots.size(),
                  d.selection.objective, sched_out.c_str());
    } else if (*cmp) {
      const auto a = read_results(classical_path);
      const auto b = dynamic_path.empty() ? a : read_results(dynamic_path);
      const auto rows = compare_results(a.rows, b.rows);
      std::ofstream out(compare_out);
      if (!out) throw std::runtime_error("cannot write " + compare_out);
      out << "# classical_config_hash=" << a.config_hash << "\n# dynamic_config_hash=" << b.config_hash << "\n";
      write_comparison_csv(out, rows);
      for (const auto& r : rows) {
        std::printf("%-6s k=%-4d classical %10.4f dynamic %10.4f improvement %s%%\n", r.scenario.c_str(),
                    r.iterations, r.classical_cost, r.dynamic_cost,
                    r.improvement_pct ? io::format_fixed(*r.improvement_pct, 2).c_str() : "-");
      }
      std::printf("wrote %s (%zu rows)\n", compare_out.c_str(), rows.size());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mgrh: %s\n", e.what());
    return 1;
  }
  return 0;
}
