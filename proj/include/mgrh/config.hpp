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


// Experiment configuration read from a key = value file.
//
//   mode        = static, classical, dynamic
//   scenario    = A, B, C          presets; "custom" uses the alpha_* keys;
//                                  "B@A" takes device uncertainty from B and
//                                  market uncertainty from A
//   step_size   = 48, 24, 8        classical runs
//   iterations  = 6, 12, 36        dynamic iteration budgets
//   seeds       = 1, 2, 3, 4, 5
//   horizon_days, data_dir, out_dir, eta, improved_window_slots, selection,
//   synthetic_seed, gamma_load, gamma_pv, ev_time_window, load_protection,
//   feasibility_tol, optimality_tol, trace, record_wall_time

#pragma once

#include <mgrh/horizon.hpp>
#include <mgrh/robust.hpp>
#include <mgrh/scheduler.hpp>
#include <mgrh/text_io.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace mgrh {

enum class RunMode { static_model, classical, dynamic };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::static_model: return "static";
    case RunMode::classical: return "classical";
    case RunMode::dynamic: return "dynamic";
  }
  return "unknown";
}

struct RunConfig {
  std::vector<RunMode> modes;
  std::vector<std::string> scenarios{"B"};
  std::vector<int> step_sizes;
  std::vector<int> iteration_budgets;
  std::vector<std::uint64_t> seeds;
  double eta = 1.0;
  int improved_window_slots = 8;
  SelectionMode selection = SelectionMode::greedy;
  int horizon_days = 3;
  std::string data_dir;  // empty: synthetic instance
  std::uint64_t synthetic_seed = 42;
  std::string out_dir = "out";
  // Used by scenario "custom".
  double alpha_load = 0.0, alpha_pv = 0.0, alpha_ev = 0.0, alpha_da = 0.0, alpha_id = 0.0;
  std::optional<double> gamma_load, gamma_pv;
  std::optional<int> ev_time_window;
  LoadProtection load_protection = LoadProtection::constant;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  bool trace = false;
  bool record_wall_time = false;

  void validate() const {
    if (modes.empty()) throw std::invalid_argument("config: mode is required");
    if (seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
    if (scenarios.empty()) throw std::invalid_argument("config: scenario must not be empty");
    const bool classical = has(RunMode::classical), dynamic = has(RunMode::dynamic);
    if (classical != !step_sizes.empty()) {
      throw std::invalid_argument(classical ? "config: classical mode needs step_size"
                                            : "config: step_size is only valid with classical mode");
    }
    if (dynamic != !iteration_budgets.empty()) {
      throw std::invalid_argument(dynamic ? "config: dynamic mode needs iterations"
                                          : "config: iterations is only valid with dynamic mode");
    }
    for (int k : iteration_budgets) {
      if (k < 1) throw std::invalid_argument("config: iterations must be positive");
    }
    if (horizon_days < 1) throw std::invalid_argument("config: horizon_days must be positive");
    if (!(eta >= 0.0)) throw std::invalid_argument("config: eta must be non-negative");
    if (improved_window_slots < 1) throw std::invalid_argument("config: improved_window_slots must be positive");
    if (!(feasibility_tol > 0.0) || !(optimality_tol > 0.0)) {
      throw std::invalid_argument("config: tolerances must be positive");
    }
    for (const auto& s : scenarios) (void)scenario(s);
  }

  [[nodiscard]] bool has(RunMode m) const { return std::find(modes.begin(), modes.end(), m) != modes.end(); }

  [[nodiscard]] ScenarioConfig scenario(const std::string& name) const {
    ScenarioConfig s;
    if (name == "custom") {
      s.name = name;
      s.alpha_load = alpha_load, s.alpha_pv = alpha_pv, s.alpha_ev = alpha_ev;
      s.alpha_da = alpha_da, s.alpha_id = alpha_id;
    } else if (const auto at = name.find('@'); at != std::string::npos) {
      s = ScenarioConfig::preset(name.substr(0, at));
      const auto market = ScenarioConfig::preset(name.substr(at + 1));
      s.alpha_da = market.alpha_da;
      s.alpha_id = market.alpha_id;
      s.name = name;
    } else {
      s = ScenarioConfig::preset(name);
    }
    if (gamma_load) s.gamma_load = gamma_load;
    if (gamma_pv) s.gamma_pv = gamma_pv;
    if (ev_time_window) s.ev_time_window_slots = ev_time_window;
    return s;
  }

  [[nodiscard]] DynamicPvRamp ramp() const { return DynamicPvRamp{improved_window_slots}; }

  [[nodiscard]] lp::SimplexOptions solver() const {
    lp::SimplexOptions o;
    o.feasibility_tol = feasibility_tol;
    o.optimality_tol = optimality_tol;
    return o;
  }

  // Every setting in a fixed order; the basis of the config hash.
  [[nodiscard]] std::string canonical() const {
    std::ostringstream os;
    auto list = [&os](const char* key, const auto& v, auto fmt) {
      os << key << " =";
      for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : " ") << fmt(v[i]);
      os << '\n';
    };
    auto same = [](const auto& x) { return x; };
    list("mode", modes, [](RunMode m) { return std::string(to_string(m)); });
    list("scenario", scenarios, same);
    list("step_size", step_sizes, same);
    list("iterations", iteration_budgets, same);
    list("seeds", seeds, same);
    auto opt = [](const auto& o) { return o ? io::format_number(static_cast<double>(*o)) : std::string("default"); };
    os << "eta = " << io::format_number(eta) << "\n"
       << "improved_window_slots = " << improved_window_slots << "\n"
       << "selection = " << (selection == SelectionMode::exact ? "exact" : "greedy") << "\n"
       << "horizon_days = " << horizon_days << "\n"
       << "data_dir = " << data_dir << "\n"
       << "synthetic_seed = " << synthetic_seed << "\n"
       << "alpha = " << io::format_number(alpha_load) << ' ' << io::format_number(alpha_pv) << ' '
       << io::format_number(alpha_ev) << ' ' << io::format_number(alpha_da) << ' ' << io::format_number(alpha_id)
       << "\n"
       << "gamma_load = " << opt(gamma_load) << "\n"
       << "gamma_pv = " << opt(gamma_pv) << "\n"
       << "ev_time_window = " << opt(ev_time_window) << "\n"
       << "load_protection = " << (load_protection == LoadProtection::constant ? "constant" : "dualized") << "\n"
       << "feasibility_tol = " << io::format_number(feasibility_tol) << "\n"
       << "optimality_tol = " << io::format_number(optimality_tol) << "\n";
    return os.str();
  }

  [[nodiscard]] std::string hash() const { return io::hex64(io::fnv1a(canonical())); }
};

namespace detail {

template <class T>
T parse_value(const io::KeyValue& kv, const std::string& key, const std::string& file) {
  std::istringstream is(kv.value);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof()) {
    throw io::FormatError(file, kv.line, key + ": cannot parse '" + kv.value + "'");
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const io::KeyValue& kv, const std::string& key, const std::string& file) {
  std::vector<T> out;
  for (const auto& item : io::split(kv.value)) {
    if (item.empty()) throw io::FormatError(file, kv.line, key + ": empty list item");
    out.push_back(parse_value<T>(io::KeyValue{item, kv.line}, key, file));
  }
  return out;
}

inline bool parse_bool(const io::KeyValue& kv, const std::string& key, const std::string& file) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
  throw io::FormatError(file, kv.line, key + ": expected true or false");
}

}  // namespace detail

inline RunConfig parse_run_config(std::istream& in, const std::string& name = "config") {
  const auto kv = io::read_key_values(in, name);
  RunConfig c;
  using detail::parse_list;
  using detail::parse_value;
  for (const auto& [key, v] : kv) {
    if (key == "mode") {
      c.modes.clear();
      for (const auto& m : parse_list<std::string>(v, key, name)) {
        if (m == "static") {
          c.modes.push_back(RunMode::static_model);
        } else if (m == "classical") {
          c.modes.push_back(RunMode::classical);
        } else if (m == "dynamic") {
          c.modes.push_back(RunMode::dynamic);
        } else {
          throw io::FormatError(name, v.line, "mode: unknown mode '" + m + "'");
        }
      }
    } else if (key == "scenario") {
      c.scenarios = parse_list<std::string>(v, key, name);
    } else if (key == "step_size") {
      c.step_sizes = parse_list<int>(v, key, name);
    } else if (key == "iterations") {
      c.iteration_budgets = parse_list<int>(v, key, name);
    } else if (key == "seeds") {
      c.seeds = parse_list<std::uint64_t>(v, key, name);
    } else if (key == "eta") {
      c.eta = parse_value<double>(v, key, name);
    } else if (key == "improved_window_slots") {
      c.improved_window_slots = parse_value<int>(v, key, name);
    } else if (key == "selection") {
      if (v.value != "greedy" && v.value != "exact") throw io::FormatError(name, v.line, "selection: greedy or exact");
      c.selection = v.value == "exact" ? SelectionMode::exact : SelectionMode::greedy;
    } else if (key == "horizon_days") {
      c.horizon_days = parse_value<int>(v, key, name);
    } else if (key == "data_dir") {
      c.data_dir = v.value == "synthetic" ? "" : v.value;
    } else if (key == "synthetic_seed") {
      c.synthetic_seed = parse_value<std::uint64_t>(v, key, name);
    } else if (key == "out_dir") {
      c.out_dir = v.value;
    } else if (key == "alpha_load") {
      c.alpha_load = parse_value<double>(v, key, name);
    } else if (key == "alpha_pv") {
      c.alpha_pv = parse_value<double>(v, key, name);
    } else if (key == "alpha_ev") {
      c.alpha_ev = parse_value<double>(v, key, name);
    } else if (key == "alpha_da") {
      c.alpha_da = parse_value<double>(v, key, name);
    } else if (key == "alpha_id") {
      c.alpha_id = parse_value<double>(v, key, name);
    } else if (key == "gamma_load") {
      c.gamma_load = parse_value<double>(v, key, name);
    } else if (key == "gamma_pv") {
      c.gamma_pv = parse_value<double>(v, key, name);
    } else if (key == "ev_time_window") {
      c.ev_time_window = parse_value<int>(v, key, name);
    } else if (key == "load_protection") {
      if (v.value != "constant" && v.value != "dualized") {
        throw io::FormatError(name, v.line, "load_protection: constant or dualized");
      }
      c.load_protection = v.value == "constant" ? LoadProtection::constant : LoadProtection::dualized;
    } else if (key == "feasibility_tol") {
      c.feasibility_tol = parse_value<double>(v, key, name);
    } else if (key == "optimality_tol") {
      c.optimality_tol = parse_value<double>(v, key, name);
    } else if (key == "trace") {
      c.trace = detail::parse_bool(v, key, name);
    } else if (key == "record_wall_time") {
      c.record_wall_time = detail::parse_bool(v, key, name);
    } else {
      throw io::FormatError(name, v.line, "unknown key '" + key + "'");
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw io::FormatError(name, 0, e.what());
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::FormatError(path, 0, "cannot open file");
  return parse_run_config(in, path);
}

}  // namespace mgrh
