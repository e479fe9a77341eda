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


// Experiment matrix (modes x scenarios x schedule parameters x seeds) and
// the result files it writes.
//
// results.csv starts with "# config_hash=<hex>", then one row per run and,
// after the runs of each (mode, scenario, param) group, a row with seed
// "mean". Energies and costs have 9 decimals; net_bought_kwh is computed
// from the printed bought and sold values so the identity holds exactly.

#pragma once

#include <mgrh/config.hpp>
#include <mgrh/horizon.hpp>
#include <mgrh/instance_io.hpp>
#include <mgrh/scheduler.hpp>
#include <mgrh/synthetic.hpp>
#include <mgrh/text_io.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mgrh {

inline const std::vector<std::string>& results_header() {
  static const std::vector<std::string> h{
      "mode",        "scenario",   "param",          "seed",           "cost_eur",      "pv_used_kwh",
      "pv_realized_kwh", "pv_usage_pct", "bought_kwh", "sold_kwh",       "net_bought_kwh", "shortfall_slots",
      "spilled_kwh", "iterations", "wall_ms"};
  return h;
}

// Values in units of 1e-9, as printed.
struct ResultRow {
  std::string mode, scenario, param, seed;
  std::int64_t cost = 0, pv_used = 0, pv_realized = 0;
  std::optional<std::int64_t> pv_usage_pct;
  std::int64_t bought = 0, sold = 0;
  std::int64_t shortfall_slots = 0;  // scaled like the rest so means keep 9 decimals
  std::int64_t spilled = 0, iterations = 0, wall_ms = 0;

  static ResultRow keyed(std::string mode, std::string scenario, std::string param, std::string seed) {
    ResultRow r;
    r.mode = std::move(mode), r.scenario = std::move(scenario), r.param = std::move(param), r.seed = std::move(seed);
    return r;
  }

  [[nodiscard]] std::int64_t net_bought() const { return bought - sold; }
  [[nodiscard]] bool is_mean() const { return seed == "mean"; }
  [[nodiscard]] static double value(std::int64_t nano) { return static_cast<double>(nano) * 1e-9; }
};

namespace detail {

inline std::int64_t to_nano(double v) { return std::llround(v * 1e9); }

inline std::string format_nano(std::int64_t n) {
  const bool neg = n < 0;
  const std::uint64_t a = neg ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  std::string frac = std::to_string(a % 1000000000ull);
  frac.insert(0, 9 - frac.size(), '0');
  return (neg ? "-" : "") + std::to_string(a / 1000000000ull) + "." + frac;
}

inline std::int64_t parse_nano(const io::Table& t, const io::Row& r, size_t col) {
  return to_nano(t.number(r, col));
}

// Rounded mean of integers.
inline std::int64_t mean_nano(const std::vector<std::int64_t>& v) {
  long double s = 0;
  for (auto x : v) s += static_cast<long double>(x);
  return std::llround(s / static_cast<long double>(v.size()));
}

}  // namespace detail

inline ResultRow make_result_row(const std::string& mode, const std::string& scenario, const std::string& param,
                                 std::uint64_t seed, const SimulationReport& r, double wall_ms) {
  using detail::to_nano;
  ResultRow row = ResultRow::keyed(mode, scenario, param, std::to_string(seed));
  row.cost = to_nano(r.actual_cost);
  row.pv_used = to_nano(r.pv_used);
  row.pv_realized = to_nano(r.pv_realized);
  if (const auto u = pv_usage(r)) row.pv_usage_pct = to_nano(*u);
  row.bought = to_nano(r.energy_bought);
  row.sold = to_nano(r.energy_sold);
  row.shortfall_slots = static_cast<std::int64_t>(r.shortfall_slots) * 1000000000;
  row.spilled = to_nano(r.spilled_energy);
  row.iterations = static_cast<std::int64_t>(r.iterations_run) * 1000000000;
  row.wall_ms = to_nano(wall_ms);
  return row;
}

inline ResultRow mean_row(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("mean of no rows");
  ResultRow m = ResultRow::keyed(rows[0].mode, rows[0].scenario, rows[0].param, "mean");
  auto mean = [&](auto field) {
    std::vector<std::int64_t> v;
    for (const auto& r : rows) v.push_back(r.*field);
    return detail::mean_nano(v);
  };
  m.cost = mean(&ResultRow::cost);
  m.pv_used = mean(&ResultRow::pv_used);
  m.pv_realized = mean(&ResultRow::pv_realized);
  std::vector<std::int64_t> usage;
  for (const auto& r : rows) {
    if (r.pv_usage_pct) usage.push_back(*r.pv_usage_pct);
  }
  if (usage.size() == rows.size()) m.pv_usage_pct = detail::mean_nano(usage);
  m.bought = mean(&ResultRow::bought);
  m.sold = mean(&ResultRow::sold);
  m.shortfall_slots = mean(&ResultRow::shortfall_slots);
  m.spilled = mean(&ResultRow::spilled);
  m.iterations = mean(&ResultRow::iterations);
  m.wall_ms = mean(&ResultRow::wall_ms);
  return m;
}

inline std::string format_result_row(const ResultRow& r) {
  using detail::format_nano;
  std::string s = r.mode + ',' + r.scenario + ',' + r.param + ',' + r.seed;
  for (std::int64_t v : {r.cost, r.pv_used, r.pv_realized}) s += ',' + format_nano(v);
  s += ',' + (r.pv_usage_pct ? format_nano(*r.pv_usage_pct) : std::string());
  for (std::int64_t v : {r.bought, r.sold, r.net_bought(), r.shortfall_slots, r.spilled, r.iterations, r.wall_ms}) {
    s += ',' + format_nano(v);
  }
  return s;
}

struct ResultsFile {
  std::string config_hash;
  std::vector<ResultRow> rows;
};

inline ResultsFile read_results(const std::string& path) {
  ResultsFile out;
  {
    std::ifstream in(path);
    std::string first;
    if (in && std::getline(in, first) && first.rfind("# config_hash=", 0) == 0) {
      out.config_hash = std::string(io::trim(first.substr(14)));
    }
  }
  const io::Table t = io::read_table(path, results_header());
  for (const auto& r : t.rows()) {
    ResultRow row = ResultRow::keyed(r.fields[0], r.fields[1], r.fields[2], r.fields[3]);
    row.cost = detail::parse_nano(t, r, 4);
    row.pv_used = detail::parse_nano(t, r, 5);
    row.pv_realized = detail::parse_nano(t, r, 6);
    if (!r.fields[7].empty()) row.pv_usage_pct = detail::parse_nano(t, r, 7);
    row.bought = detail::parse_nano(t, r, 8);
    row.sold = detail::parse_nano(t, r, 9);
    if (detail::parse_nano(t, r, 10) != row.net_bought()) t.fail(r, "net_bought_kwh is not bought_kwh - sold_kwh");
    row.shortfall_slots = detail::parse_nano(t, r, 11);
    row.spilled = detail::parse_nano(t, r, 12);
    row.iterations = detail::parse_nano(t, r, 13);
    row.wall_ms = detail::parse_nano(t, r, 14);
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline void write_trace_csv(std::ostream& os, const SimulationReport& r) {
  os << "slot,load_kwh,pv_realized_kwh,pv_used_kwh,da_buy_kwh,da_sell_kwh,id_buy_kwh,id_sell_kwh,bat_charge_kwh,"
        "bat_discharge_kwh,ev_charge_kwh,ev_discharge_kwh,ev_trip_kwh,shortfall_kwh,spill_kwh,bat_soc_kwh,ev_soc_kwh\n";
  for (const auto& s : r.trace) {
    os << s.slot;
    for (double v : {s.load, s.pv_realized, s.pv_used, s.da_buy, s.da_sell, s.id_buy, s.id_sell, s.bat_charge,
                     s.bat_discharge, s.ev_charge, s.ev_discharge, s.ev_trip_demand, s.shortfall, s.spill, s.bat_soc,
                     s.ev_soc}) {
      os << ',' << io::format_fixed(v, 9);
    }
    os << '\n';
  }
}

inline MicrogridInstance instance_for(const RunConfig& cfg) {
  if (!cfg.data_dir.empty()) {
    MicrogridInstance inst = load_instance(cfg.data_dir);
    if (inst.grid.days() != cfg.horizon_days) {
      throw std::invalid_argument("data in " + cfg.data_dir + " covers " + std::to_string(inst.grid.days()) +
                                  " days, config asks for " + std::to_string(cfg.horizon_days));
    }
    return inst;
  }
  SyntheticSpec spec;
  spec.days = cfg.horizon_days;
  spec.seed = cfg.synthetic_seed;
  return generate_synthetic(spec);
}

struct MatrixResult {
  std::filesystem::path results_path;
  std::vector<ResultRow> rows;  // in file order, mean rows included
};

// Runs every configured combination and writes results.csv (and traces when
// requested) to cfg.out_dir. Rows are flushed as they complete, so an
// exception leaves the finished runs on disk.
inline MatrixResult run_matrix(const RunConfig& cfg, const MicrogridInstance& inst) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  MatrixResult result;
  result.results_path = fs::path(cfg.out_dir) / "results.csv";
  std::ofstream out(result.results_path);
  if (!out) throw std::runtime_error("cannot write " + result.results_path.string());
  out << "# config_hash=" << cfg.hash() << "\n";
  for (size_t i = 0; i < results_header().size(); ++i) out << (i ? "," : "") << results_header()[i];
  out << "\n" << std::flush;
  {
    std::ofstream c(fs::path(cfg.out_dir) / "config_used.cfg");
    c << "# config_hash=" << cfg.hash() << "\n" << cfg.canonical();
  }

  lp::SolutionCache cache;
  HorizonOptions opt;
  opt.protection = cfg.load_protection;
  opt.lp = cfg.solver();
  opt.keep_trace = cfg.trace;
  opt.cache = &cache;
  const DynamicPvRamp ramp = cfg.ramp();

  for (RunMode mode : cfg.modes) {
    for (const auto& scen_name : cfg.scenarios) {
      const ScenarioConfig sc = cfg.scenario(scen_name);
      std::vector<std::pair<std::string, StartSchedule>> schedules;
      if (mode == RunMode::static_model) {
        schedules.emplace_back("full", classical_schedule(inst.grid, kFullHorizon));
      } else if (mode == RunMode::classical) {
        for (int step : cfg.step_sizes) schedules.emplace_back(std::to_string(step), classical_schedule(inst.grid, step));
      } else {
        for (int k : cfg.iteration_budgets) {
          schedules.emplace_back(std::to_string(k), dynamic_schedule(inst, sc, ramp, k, cfg.eta, cfg.selection));
        }
      }
      for (const auto& [param, schedule] : schedules) {
        std::vector<ResultRow> group;
        for (std::uint64_t seed : cfg.seeds) {
          const auto t0 = std::chrono::steady_clock::now();
          const SimulationReport rep = run(inst, sc, ramp, schedule, seed, opt);
          const double ms =
              cfg.record_wall_time
                  ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()
                  : 0.0;
          group.push_back(make_result_row(to_string(mode), sc.name, param, seed, rep, ms));
          out << format_result_row(group.back()) << "\n" << std::flush;
          if (cfg.trace) {
            std::ofstream tr(fs::path(cfg.out_dir) /
                             ("trace_" + std::string(to_string(mode)) + "_" + sc.name + "_" + param + "_" +
                              std::to_string(seed) + ".csv"));
            write_trace_csv(tr, rep);
          }
        }
        const ResultRow m = mean_row(group);
        out << format_result_row(m) << "\n" << std::flush;
        result.rows.insert(result.rows.end(), group.begin(), group.end());
        result.rows.push_back(m);
      }
    }
  }
  return result;
}

inline MatrixResult run_matrix(const RunConfig& cfg) { return run_matrix(cfg, instance_for(cfg)); }

// One line of the classical-versus-dynamic comparison.
struct ComparisonRow {
  std::string scenario;
  int iterations = 0;
  std::string classical_param;
  double classical_cost = 0.0, dynamic_cost = 0.0;
  std::optional<double> improvement_pct;  // cost reduction relative to classical
  std::optional<double> classical_pv_usage, dynamic_pv_usage;
};

// Joins the mean rows of classical runs with the mean rows of dynamic runs
// whose budget equals the classical iteration count.
inline std::vector<ComparisonRow> compare_results(const std::vector<ResultRow>& classical,
                                                  const std::vector<ResultRow>& dynamic) {
  std::map<std::pair<std::string, std::int64_t>, const ResultRow*> dyn;
  for (const auto& r : dynamic) {
    if (r.mode == "dynamic" && r.is_mean()) {
      dyn[{r.scenario, static_cast<std::int64_t>(std::stoll(r.param)) * 1000000000}] = &r;
    }
  }
  std::vector<ComparisonRow> out;
  for (const auto& c : classical) {
    if (c.mode != "classical" || !c.is_mean()) continue;
    const auto it = dyn.find({c.scenario, c.iterations});
    if (it == dyn.end()) continue;
    const ResultRow& d = *it->second;
    ComparisonRow row;
    row.scenario = c.scenario;
    row.iterations = static_cast<int>(c.iterations / 1000000000);
    row.classical_param = c.param;
    row.classical_cost = ResultRow::value(c.cost);
    row.dynamic_cost = ResultRow::value(d.cost);
    if (c.cost != 0) row.improvement_pct = 100.0 * (row.classical_cost - row.dynamic_cost) / std::abs(row.classical_cost);
    if (c.pv_usage_pct) row.classical_pv_usage = ResultRow::value(*c.pv_usage_pct);
    if (d.pv_usage_pct) row.dynamic_pv_usage = ResultRow::value(*d.pv_usage_pct);
    out.push_back(row);
  }
  return out;
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? io::format_fixed(*v, 9) : std::string(); };
  os << "scenario,iterations,classical_step,classical_cost_eur,dynamic_cost_eur,cost_improvement_pct,"
        "classical_pv_usage_pct,dynamic_pv_usage_pct,pv_usage_gain_pp\n";
  for (const auto& r : rows) {
    std::optional<double> gain;
    if (r.classical_pv_usage && r.dynamic_pv_usage) gain = *r.dynamic_pv_usage - *r.classical_pv_usage;
    os << r.scenario << ',' << r.iterations << ',' << r.classical_param << ',' << io::format_fixed(r.classical_cost, 9)
       << ',' << io::format_fixed(r.dynamic_cost, 9) << ',' << opt(r.improvement_pct) << ','
       << opt(r.classical_pv_usage) << ',' << opt(r.dynamic_pv_usage) << ',' << opt(gain) << '\n';
  }
}

inline void write_schedule_csv(std::ostream& os, const StartSchedule& schedule, const SelectionResult& sel) {
  os << "slot,is_forced,marginal_gain_eur\n";
  for (size_t i = 0; i < sel.chosen.size(); ++i) {
    const int s = sel.chosen[i];
    os << s << ',' << (schedule.is_forced(s) ? 1 : 0) << ',' << io::format_fixed(sel.marginal_gain[i], 9) << '\n';
  }
}

}  // namespace mgrh
