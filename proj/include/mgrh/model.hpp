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

// Microgrid domain types. Energy is in kWh per 15-minute slot, money in EUR.
// Day-ahead quantities are hourly totals; each hour delivers a quarter of its
// volume in each of its four slots.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgrh {

struct TimeGrid {
  int horizon_slots = 288;
  int slots_per_hour = 4;
  int slots_per_day = 96;

  [[nodiscard]] int days() const { return horizon_slots / slots_per_day; }
  [[nodiscard]] int hours() const { return horizon_slots / slots_per_hour; }
  [[nodiscard]] int hour_of(int slot) const { return slot / slots_per_hour; }
  [[nodiscard]] int noon(int day) const { return day * slots_per_day + slots_per_day / 2; }

  // Slot 0 plus the noon slot of every day whose successor lies inside the
  // horizon.
  [[nodiscard]] std::vector<int> day_ahead_submission_slots() const {
    std::vector<int> out{0};
    for (int d = 0; d + 1 < days(); ++d) out.push_back(noon(d));
    return out;
  }

  void validate() const {
    if (slots_per_hour <= 0 || slots_per_day <= 0 || slots_per_day % slots_per_hour != 0 ||
        slots_per_day % 2 != 0) {
      throw std::invalid_argument("time grid: inconsistent slot counts");
    }
    if (horizon_slots <= 0 || horizon_slots % slots_per_day != 0) {
      throw std::invalid_argument("time grid: horizon must be a positive multiple of a day");
    }
  }
};

struct MarketPrices {
  std::vector<double> da_price;  // per hour
  std::vector<double> id_buy;    // per slot
  std::vector<double> id_sell;   // per slot
};

struct LoadProfile {
  std::string id;
  std::vector<double> load;
};

struct PvSystem {
  std::string id;
  std::vector<double> forecast;
};

struct StorageParams {
  double capacity = 0.0;
  double charge_limit = 0.0;
  double discharge_limit = 0.0;
  double charge_eff = 1.0;
  double discharge_eff = 1.0;
  double initial_soc = 0.0;
};

struct Battery {
  std::string id;
  StorageParams storage;
};

// The EV is away (cannot charge or discharge) on the closed slot interval
// [depart, arrive]; the trip's energy is taken out of the SoC at `arrive`.
struct Trip {
  int depart = 0;
  int arrive = 0;
  int depart_window = 0;
  int arrive_window = 0;
  double demand = 0.0;
};

struct Ev {
  std::string id;
  StorageParams storage;
  std::vector<Trip> trips;
};

struct MicrogridInstance {
  TimeGrid grid;
  MarketPrices prices;
  std::vector<LoadProfile> loads;
  std::vector<PvSystem> pv;
  std::vector<Battery> batteries;
  std::vector<Ev> evs;
  double grid_capacity = 0.0;

  [[nodiscard]] int slots() const { return grid.horizon_slots; }
  [[nodiscard]] double total_load(int t) const {
    double s = 0.0;
    for (const auto& l : loads) s += l.load[static_cast<size_t>(t)];
    return s;
  }
  [[nodiscard]] double total_pv(int t) const {
    double s = 0.0;
    for (const auto& p : pv) s += p.forecast[static_cast<size_t>(t)];
    return s;
  }
};

namespace detail {

inline void check_series(const std::vector<double>& v, size_t n, const std::string& what, bool nonneg) {
  if (v.size() != n) {
    throw std::invalid_argument(what + ": expected " + std::to_string(n) + " entries, got " +
                                std::to_string(v.size()));
  }
  for (size_t t = 0; t < n; ++t) {
    if (!std::isfinite(v[t]) || (nonneg && v[t] < 0.0)) {
      throw std::invalid_argument(what + ": invalid value at index " + std::to_string(t));
    }
  }
}

inline void check_storage(const StorageParams& s, const std::string& what) {
  const bool ok = std::isfinite(s.capacity) && s.capacity >= 0.0 && s.charge_limit >= 0.0 &&
                  s.discharge_limit >= 0.0 && s.charge_eff > 0.0 && s.charge_eff <= 1.0 &&
                  s.discharge_eff > 0.0 && s.discharge_eff <= 1.0 && s.initial_soc >= 0.0 &&
                  s.initial_soc <= s.capacity && std::isfinite(s.charge_limit) &&
                  std::isfinite(s.discharge_limit);
  if (!ok) throw std::invalid_argument(what + ": invalid storage parameters");
}

}  // namespace detail

// Trips are checked against the horizon using their widest (pessimistic)
// interval, and consecutive trips of one EV must not overlap even at the
// extremes of their time windows.
inline void validate(const MicrogridInstance& inst) {
  inst.grid.validate();
  const auto H = static_cast<size_t>(inst.slots());
  if (!(inst.grid_capacity > 0.0) || !std::isfinite(inst.grid_capacity)) {
    throw std::invalid_argument("grid capacity must be positive");
  }
  detail::check_series(inst.prices.da_price, static_cast<size_t>(inst.grid.hours()), "da_price", false);
  detail::check_series(inst.prices.id_buy, H, "id_buy price", false);
  detail::check_series(inst.prices.id_sell, H, "id_sell price", false);
  for (const auto& l : inst.loads) detail::check_series(l.load, H, "load " + l.id, true);
  for (const auto& p : inst.pv) detail::check_series(p.forecast, H, "pv " + p.id, true);
  for (const auto& b : inst.batteries) detail::check_storage(b.storage, "battery " + b.id);
  for (const auto& ev : inst.evs) {
    detail::check_storage(ev.storage, "ev " + ev.id);
    int last_end = -1;
    for (size_t k = 0; k < ev.trips.size(); ++k) {
      const Trip& tr = ev.trips[k];
      const std::string where = "ev " + ev.id + " trip " + std::to_string(k);
      if (tr.depart >= tr.arrive) throw std::invalid_argument(where + ": arrive must follow depart");
      if (tr.depart_window < 0 || tr.arrive_window < 0 || !(tr.demand >= 0.0) || !std::isfinite(tr.demand)) {
        throw std::invalid_argument(where + ": invalid window or demand");
      }
      if (tr.depart + tr.depart_window >= tr.arrive - tr.arrive_window) {
        throw std::invalid_argument(where + ": departure and arrival windows overlap");
      }
      if (tr.depart - tr.depart_window < 0 || tr.arrive + tr.arrive_window >= inst.slots()) {
        throw std::invalid_argument(where + ": pessimistic interval leaves the horizon");
      }
      if (tr.depart - tr.depart_window <= last_end) {
        throw std::invalid_argument(where + ": overlaps the previous trip");
      }
      last_end = tr.arrive + tr.arrive_window;
    }
  }
}

// Per-slot values of every decision variable. Day-ahead vectors are hourly.
struct DecisionSet {
  std::vector<double> da_buy, da_sell;
  std::vector<double> id_buy, id_sell;
  std::vector<std::vector<double>> pv_used;
  std::vector<std::vector<double>> bat_charge, bat_discharge;
  std::vector<std::vector<double>> ev_charge, ev_discharge;

  static DecisionSet zeros(const MicrogridInstance& inst) {
    const auto H = static_cast<size_t>(inst.slots());
    DecisionSet d;
    d.da_buy.assign(static_cast<size_t>(inst.grid.hours()), 0.0);
    d.da_sell = d.da_buy;
    d.id_buy.assign(H, 0.0);
    d.id_sell.assign(H, 0.0);
    d.pv_used.assign(inst.pv.size(), std::vector<double>(H, 0.0));
    d.bat_charge.assign(inst.batteries.size(), std::vector<double>(H, 0.0));
    d.bat_discharge = d.bat_charge;
    d.ev_charge.assign(inst.evs.size(), std::vector<double>(H, 0.0));
    d.ev_discharge = d.ev_charge;
    return d;
  }

  // Day-ahead energy delivered in `slot`.
  [[nodiscard]] double da_buy_slot(int slot, int slots_per_hour) const {
    return da_buy[static_cast<size_t>(slot / slots_per_hour)] / slots_per_hour;
  }
  [[nodiscard]] double da_sell_slot(int slot, int slots_per_hour) const {
    return da_sell[static_cast<size_t>(slot / slots_per_hour)] / slots_per_hour;
  }
};

// Market cost of `final` under the given prices (buy legs minus sell legs).
inline double evaluate_actual_cost(const DecisionSet& final, const MarketPrices& prices) {
  const size_t hours = prices.da_price.size();
  const size_t slots = prices.id_buy.size();
  if (final.da_buy.size() != hours || final.da_sell.size() != hours || final.id_buy.size() != slots ||
      final.id_sell.size() != slots || prices.id_sell.size() != slots) {
    throw std::invalid_argument("evaluate_actual_cost: decisions do not cover the horizon");
  }
  double cost = 0.0;
  for (size_t h = 0; h < hours; ++h) cost += prices.da_price[h] * (final.da_buy[h] - final.da_sell[h]);
  for (size_t t = 0; t < slots; ++t) {
    cost += prices.id_buy[t] * final.id_buy[t] - prices.id_sell[t] * final.id_sell[t];
  }
  return cost;
}

}  // namespace mgrh
