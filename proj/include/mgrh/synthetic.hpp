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

// Synthetic residential microgrid: households with a double-peaked daily
// load, clear-sky PV, a communal battery, EVs with one evening trip a day and
// bundled day-ahead/intraday price shapes.

#pragma once

#include <mgrh/model.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace mgrh {

struct SyntheticSpec {
  int days = 3;
  int households = 20;
  int evs = 15;
  int pv_systems = 17;
  double annual_demand_kwh = 3500.0;
  double daily_load_min_kwh = 8.0;
  double daily_load_max_kwh = 10.0;
  double pv_daily_peak_kwh = 11.0;
  // Forecast share of the clear-sky peak, drawn per system.
  double pv_forecast_share_min = 0.85;
  double pv_forecast_share_max = 0.95;
  StorageParams battery{42.0, 3.75, 3.75, 0.95, 0.95, 0.0};
  bool scale_battery_to_peak_load = true;
  StorageParams ev{58.0, 2.75, 2.75, 0.95, 0.95, 0.0};
  double trip_km_min = 20.0;
  double trip_km_max = 70.0;
  double kwh_per_km = 0.18;
  int trip_time_window_slots = 2;
  double grid_capacity = 45.0;
  std::uint64_t seed = 42;

  void validate() const {
    if (days <= 0 || households < 0 || evs < 0 || pv_systems < 0) {
      throw std::invalid_argument("synthetic spec: counts must be non-negative and days positive");
    }
    if (!(daily_load_min_kwh > 0.0) || daily_load_max_kwh < daily_load_min_kwh || !(annual_demand_kwh > 0.0)) {
      throw std::invalid_argument("synthetic spec: bad household demand");
    }
    if (pv_daily_peak_kwh < 0.0 || pv_forecast_share_min < 0.0 || pv_forecast_share_max < pv_forecast_share_min) {
      throw std::invalid_argument("synthetic spec: bad PV parameters");
    }
    if (trip_km_min < 0.0 || trip_km_max < trip_km_min || kwh_per_km < 0.0 || trip_time_window_slots < 0) {
      throw std::invalid_argument("synthetic spec: bad trip parameters");
    }
    if (!(grid_capacity > 0.0)) throw std::invalid_argument("synthetic spec: grid capacity must be positive");
    detail::check_storage(battery, "synthetic battery");
    detail::check_storage(ev, "synthetic EV");
  }
};

namespace detail {

// Draws from the top 53 bits so the stream does not depend on the standard
// library's distribution implementations.
class SyntheticRng {
 public:
  explicit SyntheticRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + std::min(hi - lo, static_cast<int>(uniform() * (hi - lo + 1))); }
  double normal() {  // Box-Muller, one value per call
    const double u1 = 1.0 - uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * uniform());
  }

 private:
  std::mt19937_64 eng_;
};

inline double bump(double x, double centre, double width) {
  const double z = (x - centre) / width;
  return std::exp(-0.5 * z * z);
}

// Relative household demand at hour-of-day h (fractional).
inline double load_shape(double h) {
  return 0.35 + 0.55 * bump(h, 7.5, 1.2) + 0.35 * bump(h, 12.5, 1.8) + 1.0 * bump(h, 19.0, 2.0);
}

// Day-ahead price shape in EUR/kWh.
inline double da_shape(double h) {
  return 0.062 + 0.020 * bump(h, 8.0, 1.5) + 0.030 * bump(h, 19.5, 2.0) - 0.012 * bump(h, 13.5, 2.5) -
         0.008 * bump(h, 3.5, 2.0);
}

}  // namespace detail

inline MicrogridInstance generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  detail::SyntheticRng rng(spec.seed);
  MicrogridInstance inst;
  inst.grid.horizon_slots = spec.days * inst.grid.slots_per_day;
  inst.grid_capacity = spec.grid_capacity;
  const int H = inst.slots();
  const int spd = inst.grid.slots_per_day;
  const int sph = inst.grid.slots_per_hour;
  auto hour_of_day = [&](int t) { return static_cast<double>(t % spd) / sph + 0.5 / sph; };

  // Households: a personal daily shape scaled to the daily energy.
  const double mean_daily = spec.annual_demand_kwh / 365.0;
  for (int i = 0; i < spec.households; ++i) {
    LoadProfile lp{"h" + std::to_string(i + 1), std::vector<double>(static_cast<size_t>(H), 0.0)};
    const double shift = rng.uniform(-1.0, 1.0);
    for (int d = 0; d < spec.days; ++d) {
      const double energy = std::clamp(mean_daily * rng.uniform(0.85, 1.05), spec.daily_load_min_kwh,
                                       spec.daily_load_max_kwh);
      std::vector<double> day(static_cast<size_t>(spd));
      double sum = 0.0;
      for (int r = 0; r < spd; ++r) {
        const double noise = 1.0 + 0.25 * rng.uniform(-1.0, 1.0);
        day[static_cast<size_t>(r)] = detail::load_shape(hour_of_day(r) - shift) * noise;
        sum += day[static_cast<size_t>(r)];
      }
      for (int r = 0; r < spd; ++r) {
        lp.load[static_cast<size_t>(d * spd + r)] = energy * day[static_cast<size_t>(r)] / sum;
      }
    }
    inst.loads.push_back(std::move(lp));
  }

  // PV: clear-sky sin^2 curve between 06:00 and 20:00.
  const int rise = 6 * sph, set = 20 * sph;
  for (int j = 0; j < spec.pv_systems; ++j) {
    PvSystem pv{"pv" + std::to_string(j + 1), std::vector<double>(static_cast<size_t>(H), 0.0)};
    const double daily = spec.pv_daily_peak_kwh * rng.uniform(spec.pv_forecast_share_min, spec.pv_forecast_share_max);
    const double amplitude = 2.0 * daily / (set - rise);
    for (int t = 0; t < H; ++t) {
      const int r = t % spd;
      if (r < rise || r >= set) continue;
      const double x = std::sin(std::numbers::pi * (r - rise + 0.5) / (set - rise));
      pv.forecast[static_cast<size_t>(t)] = amplitude * x * x;
    }
    inst.pv.push_back(std::move(pv));
  }

  // Communal battery, scaled so that its discharge covers the peak load.
  if (spec.battery.capacity > 0.0) {
    StorageParams b = spec.battery;
    double peak = 0.0;
    for (int t = 0; t < H; ++t) peak = std::max(peak, inst.total_load(t));
    if (spec.scale_battery_to_peak_load && peak > 0.0 && b.discharge_limit > 0.0) {
      const double f = peak / b.discharge_limit;
      b.capacity *= f;
      b.charge_limit *= f;
      b.discharge_limit *= f;
      b.initial_soc *= f;
    }
    inst.batteries.push_back({"battery", b});
  }

  // EVs: one evening trip per day, leaving 17:00-19:00 for 1.5-4 hours.
  const int w = spec.trip_time_window_slots;
  for (int h = 0; h < spec.evs; ++h) {
    Ev ev{"ev" + std::to_string(h + 1), spec.ev, {}};
    for (int d = 0; d < spec.days; ++d) {
      const int depart = d * spd + rng.integer(17 * sph, 19 * sph);
      const int arrive = depart + rng.integer(std::max(6, 2 * w + 2), 16);
      const double km = rng.uniform(spec.trip_km_min, spec.trip_km_max);
      ev.trips.push_back({depart, arrive, w, w, km * spec.kwh_per_km});
    }
    inst.evs.push_back(std::move(ev));
  }

  // Prices: one day-ahead level per day, intraday scattered around it.
  inst.prices.da_price.assign(static_cast<size_t>(inst.grid.hours()), 0.0);
  inst.prices.id_buy.assign(static_cast<size_t>(H), 0.0);
  inst.prices.id_sell.assign(static_cast<size_t>(H), 0.0);
  const int hpd = spd / sph;
  for (int d = 0; d < spec.days; ++d) {
    const double level = rng.uniform(0.92, 1.08);
    for (int hh = 0; hh < hpd; ++hh) {
      const double p = level * detail::da_shape(hh + 0.5) * (1.0 + 0.04 * rng.uniform(-1.0, 1.0));
      inst.prices.da_price[static_cast<size_t>(d * hpd + hh)] = std::clamp(p, 0.03, 0.15);
    }
  }
  for (int t = 0; t < H; ++t) {
    const double da = inst.prices.da_price[static_cast<size_t>(t / sph)];
    const double mid = da * std::exp(0.15 * rng.normal());
    inst.prices.id_buy[static_cast<size_t>(t)] = mid * 1.06;
    inst.prices.id_sell[static_cast<size_t>(t)] = mid * 0.94;
  }
  validate(inst);
  return inst;
}

}  // namespace mgrh
