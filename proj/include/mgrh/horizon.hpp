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

// Rolling/folding horizon simulation over an arbitrary set of start slots.
//
// At every start s a robust window LP is solved with everything revealed
// before s. Day-ahead submission slots (slot 0 and the noon slots) look 36
// hours ahead and fix the hourly day-ahead volumes of the next day; the other
// starts look ahead to the end of the last submitted day. Decisions on
// [s, next start) are executed against the sampled realization.

#pragma once

#include <mgrh/model.hpp>
#include <mgrh/robust.hpp>
#include <mgrh/simplex.hpp>
#include <mgrh/window.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgrh {

struct StartSchedule {
  std::vector<int> start_slots;
  std::vector<int> forced_da_slots;
  // One window over the whole horizon that submits every day at slot 0.
  bool full_horizon = false;

  [[nodiscard]] bool is_forced(int s) const {
    return std::binary_search(forced_da_slots.begin(), forced_da_slots.end(), s);
  }

  void validate(const TimeGrid& grid) const {
    if (start_slots.empty() || start_slots.front() != 0) throw std::invalid_argument("schedule must start at slot 0");
    for (size_t i = 0; i < start_slots.size(); ++i) {
      if (start_slots[i] < 0 || start_slots[i] >= grid.horizon_slots) {
        throw std::invalid_argument("schedule slot " + std::to_string(start_slots[i]) + " is outside the horizon");
      }
      if (i > 0 && start_slots[i] <= start_slots[i - 1]) {
        throw std::invalid_argument("schedule slots must be strictly increasing");
      }
    }
    const std::vector<int> want = full_horizon ? std::vector<int>{0} : grid.day_ahead_submission_slots();
    if (forced_da_slots != want) throw std::invalid_argument("schedule does not list the day-ahead submission slots");
    for (int s : forced_da_slots) {
      if (!std::binary_search(start_slots.begin(), start_slots.end(), s)) {
        throw std::invalid_argument("day-ahead slot " + std::to_string(s) + " is not a start slot");
      }
    }
    if (full_horizon && start_slots.size() != 1) throw std::invalid_argument("full-horizon schedule has one start");
  }
};

inline constexpr int kFullHorizon = 0;

// step_size = kFullHorizon (or the horizon length) gives the static model;
// step_size = slots_per_day gives the day-ahead slots only; otherwise the
// step must divide half a day.
inline StartSchedule classical_schedule(const TimeGrid& grid, int step_size) {
  grid.validate();
  StartSchedule s;
  if (step_size == kFullHorizon || step_size == grid.horizon_slots) {
    s.start_slots = {0};
    s.forced_da_slots = {0};
    s.full_horizon = true;
    return s;
  }
  s.forced_da_slots = grid.day_ahead_submission_slots();
  if (step_size == grid.slots_per_day) {
    s.start_slots = s.forced_da_slots;
    return s;
  }
  const int half = grid.slots_per_day / 2;
  if (step_size < 1 || half % step_size != 0) {
    throw std::invalid_argument("step size " + std::to_string(step_size) + " does not divide " +
                                std::to_string(half));
  }
  for (int t = 0; t < grid.horizon_slots; t += step_size) s.start_slots.push_back(t);
  return s;
}

struct HorizonOptions {
  LoadProtection protection = LoadProtection::constant;
  lp::SimplexOptions lp;
  // Start each window from the previous window's optimal basis.
  bool warm_start = true;
  // Cold window solves go through this cache when set.
  lp::SolutionCache* cache = nullptr;
  bool keep_trace = true;
};

// Execution of one slot.
struct SlotTrace {
  int slot = 0;
  double load = 0.0;
  double pv_realized = 0.0;
  double pv_used = 0.0;
  double da_buy = 0.0, da_sell = 0.0;  // energy in this slot
  double id_buy = 0.0, id_sell = 0.0;
  double bat_charge = 0.0, bat_discharge = 0.0;
  double ev_charge = 0.0, ev_discharge = 0.0;
  double ev_trip_demand = 0.0;
  double shortfall = 0.0;
  double spill = 0.0;
  double bat_soc = 0.0, ev_soc = 0.0;  // summed over devices, end of slot
};

struct ShortfallEntry {
  int slot = 0;
  double energy = 0.0;
};

struct HorizonState {
  int now = 0;
  FixedDecisions fixed;  // submitted day-ahead volumes and realized SoC
  DecisionSet final_decisions;
  std::vector<ShortfallEntry> shortfall_log;
};

struct IterationView {
  int index = 0;
  int start = 0;
  int next = 0;
  SlotRange window;
  double planned_cost = 0.0;
  const HorizonState* state = nullptr;
};

using IterationObserver = std::function<void(const IterationView&)>;

struct SimulationReport {
  double actual_cost = 0.0;
  double market_cost = 0.0;
  double settlement_cost = 0.0;
  double pv_realized = 0.0;
  double pv_used = 0.0;
  double energy_bought = 0.0;
  double energy_sold = 0.0;
  double net_bought = 0.0;
  int iterations_run = 0;
  int shortfall_slots = 0;
  double shortfall_energy = 0.0;
  double spilled_energy = 0.0;
  double max_soc_violation = 0.0;  // before clamping to [0, capacity]
  std::int64_t simplex_iterations = 0;
  DecisionSet final_decisions;
  std::vector<SlotTrace> trace;
};

inline std::optional<double> pv_usage(const SimulationReport& r) {
  if (!(r.pv_realized > 0.0)) return std::nullopt;
  return 100.0 * r.pv_used / r.pv_realized;
}

namespace detail {

// Deficits below this are solver round-off, settled but not counted.
inline constexpr double kShortfallTolerance = 1e-6;

inline SlotRange window_for(const TimeGrid& grid, const StartSchedule& sch, int s, int committed_hours) {
  const int H = grid.horizon_slots;
  if (sch.full_horizon) return {s, H};
  if (sch.is_forced(s)) return {s, std::min(s + 3 * grid.slots_per_day / 2, H)};
  return {s, committed_hours * grid.slots_per_hour};
}

// Hours submitted at forced slot s: the whole horizon for the static model,
// day 0 at slot 0, the following day at a noon slot.
inline std::pair<int, int> submitted_hours(const TimeGrid& grid, const StartSchedule& sch, int s) {
  const int hpd = grid.slots_per_day / grid.slots_per_hour;
  if (sch.full_horizon) return {0, grid.hours()};
  const int day = s == 0 ? 0 : s / grid.slots_per_day + 1;
  return {day * hpd, (day + 1) * hpd};
}

inline double clamp_soc(double soc, double cap, double& worst) {
  worst = std::max({worst, -soc, soc - cap});
  return std::clamp(soc, 0.0, cap);
}

}  // namespace detail

// Runs the schedule against one realization drawn from `rng`.
inline SimulationReport run(const MicrogridInstance& inst, const ScenarioConfig& scenario,
                            const DynamicPvRamp& ramp, const StartSchedule& schedule, std::mt19937_64& rng,
                            const HorizonOptions& opt = {}, const IterationObserver& observer = {}) {
  validate(inst);
  scenario.validate(inst);
  schedule.validate(inst.grid);
  const Realization real = sample_realization(rng, inst, scenario);
  const MarketPrices prices = realized_prices(inst, scenario, real);
  const TimeGrid& grid = inst.grid;
  const int H = inst.slots();
  const int sph = grid.slots_per_hour;

  HorizonState st;
  st.fixed = FixedDecisions::initial(inst);
  st.final_decisions = DecisionSet::zeros(inst);
  SimulationReport rep;

  // Realized trip times and demand, per EV.
  std::vector<std::vector<double>> trip_demand_at(inst.evs.size(), std::vector<double>(static_cast<size_t>(H), 0.0));
  for (size_t h = 0; h < inst.evs.size(); ++h) {
    for (size_t k = 0; k < inst.evs[h].trips.size(); ++k) {
      const Trip& tr = inst.evs[h].trips[k];
      const TripTimes eff = effective_trip(tr, &real, h, k);
      trip_demand_at[h][static_cast<size_t>(eff.arrive)] += realized_trip_demand(tr, scenario, &real, h, k);
    }
  }

  std::optional<WindowLp> prev_window;
  lp::Basis prev_basis;
  const auto& starts = schedule.start_slots;
  for (size_t i = 0; i < starts.size(); ++i) {
    const int s = starts[i];
    const int next = i + 1 < starts.size() ? starts[i + 1] : H;
    const SlotRange range = detail::window_for(grid, schedule, s, st.fixed.committed_hours);
    st.now = s;

    const InfoState info{s, &real};
    const WindowLp w =
        assemble_window(inst, range, st.fixed, robust_window_data(inst, range, scenario, ramp, info, opt.protection));
    lp::LpSolution sol;
    if (opt.warm_start && prev_window) {
      const lp::Basis start = carry_basis(*prev_window, prev_basis, w);
      sol = lp::solve_lp(w.lp, opt.lp, &start);
    } else {
      sol = opt.cache ? opt.cache->solve(w.lp, opt.lp) : lp::solve_lp(w.lp, opt.lp);
    }
    rep.simplex_iterations += sol.iterations;
    if (sol.status != lp::Status::optimal) {
      throw std::runtime_error("window [" + std::to_string(range.begin) + ", " + std::to_string(range.end) +
                               ") starting at slot " + std::to_string(s) + " is " + lp::to_string(sol.status));
    }

    if (opt.warm_start) prev_basis = std::move(sol.basis);

    if (schedule.is_forced(s)) {
      const auto [h0, h1] = detail::submitted_hours(grid, schedule, s);
      store_day_ahead(w, sol.x, h0, h1, st.fixed.da_buy, st.fixed.da_sell);
      st.fixed.committed_hours = h1;
    }
    DecisionSet& fin = st.final_decisions;
    store_decisions(w, sol.x, inst, fin, s, next);
    for (int h = s / sph; h < (next + sph - 1) / sph; ++h) {
      fin.da_buy[static_cast<size_t>(h)] = st.fixed.da_buy[static_cast<size_t>(h)];
      fin.da_sell[static_cast<size_t>(h)] = st.fixed.da_sell[static_cast<size_t>(h)];
    }

    // Execute [s, next) against the realization.
    for (int t = s; t < next; ++t) {
      const auto tu = static_cast<size_t>(t);
      SlotTrace tr;
      tr.slot = t;
      tr.load = realized_load(inst, scenario, real, t);
      for (size_t j = 0; j < inst.pv.size(); ++j) {
        const double avail = realized_pv(inst, scenario, real, j, t);
        fin.pv_used[j][tu] = std::min(fin.pv_used[j][tu], avail);
        tr.pv_realized += avail;
        tr.pv_used += fin.pv_used[j][tu];
      }
      tr.da_buy = fin.da_buy_slot(t, sph);
      tr.da_sell = fin.da_sell_slot(t, sph);
      tr.id_buy = fin.id_buy[tu];
      tr.id_sell = fin.id_sell[tu];
      for (size_t k = 0; k < inst.batteries.size(); ++k) {
        const auto& sp = inst.batteries[k].storage;
        const double c = fin.bat_charge[k][tu], d = fin.bat_discharge[k][tu];
        tr.bat_charge += c;
        tr.bat_discharge += d;
        st.fixed.battery_soc[k] = detail::clamp_soc(
            st.fixed.battery_soc[k] + sp.charge_eff * c - d / sp.discharge_eff, sp.capacity, rep.max_soc_violation);
        tr.bat_soc += st.fixed.battery_soc[k];
      }
      for (size_t h = 0; h < inst.evs.size(); ++h) {
        const auto& sp = inst.evs[h].storage;
        const double c = fin.ev_charge[h][tu], d = fin.ev_discharge[h][tu];
        tr.ev_charge += c;
        tr.ev_discharge += d;
        tr.ev_trip_demand += trip_demand_at[h][tu];
        st.fixed.ev_soc[h] =
            detail::clamp_soc(st.fixed.ev_soc[h] + sp.charge_eff * c - d / sp.discharge_eff - trip_demand_at[h][tu],
                              sp.capacity, rep.max_soc_violation);
        tr.ev_soc += st.fixed.ev_soc[h];
      }
      const double net = tr.pv_used + tr.bat_discharge + tr.ev_discharge + tr.da_buy + tr.id_buy -
                         (tr.load + tr.bat_charge + tr.ev_charge + tr.da_sell + tr.id_sell);
      if (net < 0.0) {
        tr.shortfall = -net;
        rep.settlement_cost += tr.shortfall * prices.id_buy[tu];
        rep.shortfall_energy += tr.shortfall;
        if (tr.shortfall > detail::kShortfallTolerance) {
          ++rep.shortfall_slots;
          st.shortfall_log.push_back({t, tr.shortfall});
        }
      } else {
        tr.spill = net;
        rep.spilled_energy += net;
      }
      rep.pv_realized += tr.pv_realized;
      rep.pv_used += tr.pv_used;
      rep.energy_bought += tr.da_buy + tr.id_buy + tr.shortfall;
      rep.energy_sold += tr.da_sell + tr.id_sell;
      if (opt.keep_trace) rep.trace.push_back(tr);
    }
    ++rep.iterations_run;
    st.now = next;
    if (opt.warm_start) prev_window = w;
    if (observer) observer({static_cast<int>(i), s, next, range, sol.objective, &st});
  }

  rep.market_cost = evaluate_actual_cost(st.final_decisions, prices);
  rep.actual_cost = rep.market_cost + rep.settlement_cost;
  rep.net_bought = rep.energy_bought - rep.energy_sold;
  rep.final_decisions = std::move(st.final_decisions);
  return rep;
}

inline SimulationReport run(const MicrogridInstance& inst, const ScenarioConfig& scenario, const DynamicPvRamp& ramp,
                            const StartSchedule& schedule, std::uint64_t seed, const HorizonOptions& opt = {},
                            const IterationObserver& observer = {}) {
  std::mt19937_64 rng(seed);
  return run(inst, scenario, ramp, schedule, rng, opt, observer);
}

}  // namespace mgrh
