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

// Uncertainty sets and the robust counterpart of a window LP.
//
// Every uncertain parameter is p = p_hat * (1 + alpha * u). Household loads
// live in a per-slot budget set {|u|_inf <= 1, |u|_1 <= gamma}; PV, EV trip
// energy and prices in boxes; trip departure/arrival in integer slot windows.
//
// PV forecasts improve inside the ramp window. For lead l the forecast is
// centred at p_hat + (1 - r(l)) * (p - p_hat) with half-width
// alpha * p_hat * r(l): the realized value is always inside, the set shrinks
// monotonically as l decreases, and at l = 0 it is the realization itself.

#pragma once

#include <mgrh/model.hpp>
#include <mgrh/window.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgrh {

struct ScenarioConfig {
  std::string name = "none";
  double alpha_load = 0.0;
  double alpha_pv = 0.0;
  double alpha_ev = 0.0;
  double alpha_da = 0.0;
  double alpha_id = 0.0;
  std::optional<double> gamma_load;  // default: number of households
  std::optional<double> gamma_pv;    // default: number of PV systems
  // Replaces the per-trip departure/arrival windows when set.
  std::optional<int> ev_time_window_slots;

  static ScenarioConfig preset(const std::string& name) {
    ScenarioConfig s;
    s.name = name;
    if (name == "A") {
      s.alpha_load = 0.10, s.alpha_pv = 0.10, s.alpha_ev = 0.05, s.alpha_da = 0.10, s.alpha_id = 0.20;
    } else if (name == "B") {
      s.alpha_load = 0.20, s.alpha_pv = 0.25, s.alpha_ev = 0.10, s.alpha_da = 0.15, s.alpha_id = 0.35;
    } else if (name == "C") {
      s.alpha_load = 0.35, s.alpha_pv = 0.40, s.alpha_ev = 0.20, s.alpha_da = 0.20, s.alpha_id = 0.50;
    } else if (name == "none") {
      s.ev_time_window_slots = 0;
    } else {
      throw std::invalid_argument("unknown scenario preset '" + name + "'");
    }
    return s;
  }

  [[nodiscard]] double load_gamma(const MicrogridInstance& inst) const {
    return gamma_load.value_or(static_cast<double>(inst.loads.size()));
  }
  [[nodiscard]] double pv_gamma(const MicrogridInstance& inst) const {
    return gamma_pv.value_or(static_cast<double>(inst.pv.size()));
  }
  [[nodiscard]] int depart_window(const Trip& t) const { return ev_time_window_slots.value_or(t.depart_window); }
  [[nodiscard]] int arrive_window(const Trip& t) const { return ev_time_window_slots.value_or(t.arrive_window); }

  void validate(const MicrogridInstance& inst) const {
    for (double a : {alpha_load, alpha_pv, alpha_ev, alpha_da, alpha_id}) {
      if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("scenario " + name + ": alpha must lie in [0, 1)");
    }
    const double gl = load_gamma(inst), gp = pv_gamma(inst);
    if (!(gl >= 0.0) || gl > static_cast<double>(inst.loads.size())) {
      throw std::invalid_argument("scenario " + name + ": gamma_load outside [0, households]");
    }
    if (!(gp >= 0.0) || gp > static_cast<double>(inst.pv.size())) {
      throw std::invalid_argument("scenario " + name + ": gamma_pv outside [0, pv systems]");
    }
    if (ev_time_window_slots && *ev_time_window_slots < 0) {
      throw std::invalid_argument("scenario " + name + ": negative EV time window");
    }
    if (ev_time_window_slots) {
      MicrogridInstance copy = inst;
      for (auto& ev : copy.evs) {
        for (auto& t : ev.trips) t.depart_window = t.arrive_window = *ev_time_window_slots;
      }
      mgrh::validate(copy);
    }
  }
};

// r(l) = min(l / improved_window_slots, 1) with r(0) = 0.
struct DynamicPvRamp {
  int improved_window_slots = 8;

  [[nodiscard]] double reduction(int lead) const {
    if (lead <= 0) return 0.0;
    if (lead >= improved_window_slots) return 1.0;
    return static_cast<double>(lead) / improved_window_slots;
  }
};

inline double effective_pv_alpha(double alpha_pv, int lead, const DynamicPvRamp& ramp) {
  if (lead < 0) throw std::invalid_argument("effective_pv_alpha: negative lead");
  return alpha_pv * ramp.reduction(lead);
}

inline double realized_value(double nominal, double alpha, double u) { return nominal * (1.0 + alpha * u); }

// max { coeffs . u : |u|_inf <= 1, |u|_1 <= gamma } for coeffs >= 0: the
// floor(gamma) largest entries plus the fractional remainder of the next one.
inline double support_budget(std::vector<double> coeffs, double gamma) {
  if (!(gamma >= 0.0) || gamma > static_cast<double>(coeffs.size()) + 1e-12) {
    throw std::invalid_argument("support_budget: gamma outside [0, dimension]");
  }
  for (double c : coeffs) {
    if (!(c >= 0.0)) throw std::invalid_argument("support_budget: coefficients must be nonnegative");
  }
  if (gamma >= static_cast<double>(coeffs.size())) {
    // Box case, summed in input order so it equals sum(coeffs) bit for bit.
    double s = 0.0;
    for (double c : coeffs) s += c;
    return s;
  }
  std::sort(coeffs.begin(), coeffs.end(), std::greater<>());
  const auto whole = std::min(coeffs.size(), static_cast<size_t>(std::floor(gamma + 1e-12)));
  double s = 0.0;
  for (size_t i = 0; i < whole; ++i) s += coeffs[i];
  const double frac = gamma - static_cast<double>(whole);
  if (whole < coeffs.size() && frac > 0.0) s += frac * coeffs[whole];
  return s;
}

struct Realization {
  std::vector<std::vector<double>> load;  // [household][slot]
  std::vector<std::vector<double>> pv;    // [system][slot]
  std::vector<std::vector<double>> ev_demand;         // [ev][trip]
  std::vector<std::vector<int>> depart_offset;        // [ev][trip]
  std::vector<std::vector<int>> arrive_offset;        // [ev][trip]
  std::vector<double> da;                             // [hour]
  std::vector<double> id_buy, id_sell;                // [slot]

  bool operator==(const Realization&) const = default;
};

namespace detail {

// Uniform on [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
inline double symmetric_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

inline int offset_in_window(std::mt19937_64& rng, int w) {
  if (w <= 0) return 0;
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::min(2 * w, static_cast<int>(u * (2 * w + 1))) - w;
}

}  // namespace detail

// Draw order: loads, PV, EV trips (demand, departure, arrival), day-ahead,
// intraday buy, intraday sell.
inline Realization sample_realization(std::mt19937_64& rng, const MicrogridInstance& inst,
                                      const ScenarioConfig& scenario) {
  const auto H = static_cast<size_t>(inst.slots());
  Realization r;
  auto series = [&](size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = detail::symmetric_unit(rng);
    return v;
  };
  for (size_t i = 0; i < inst.loads.size(); ++i) r.load.push_back(series(H));
  for (size_t j = 0; j < inst.pv.size(); ++j) r.pv.push_back(series(H));
  for (const auto& ev : inst.evs) {
    std::vector<double> dem;
    std::vector<int> dep, arr;
    for (const auto& t : ev.trips) {
      dem.push_back(detail::symmetric_unit(rng));
      dep.push_back(detail::offset_in_window(rng, scenario.depart_window(t)));
      arr.push_back(detail::offset_in_window(rng, scenario.arrive_window(t)));
    }
    r.ev_demand.push_back(std::move(dem));
    r.depart_offset.push_back(std::move(dep));
    r.arrive_offset.push_back(std::move(arr));
  }
  r.da = series(static_cast<size_t>(inst.grid.hours()));
  r.id_buy = series(H);
  r.id_sell = series(H);
  return r;
}

inline MarketPrices realized_prices(const MicrogridInstance& inst, const ScenarioConfig& s, const Realization& r) {
  MarketPrices p = inst.prices;
  for (size_t h = 0; h < p.da_price.size(); ++h) p.da_price[h] = realized_value(p.da_price[h], s.alpha_da, r.da[h]);
  for (size_t t = 0; t < p.id_buy.size(); ++t) {
    p.id_buy[t] = realized_value(p.id_buy[t], s.alpha_id, r.id_buy[t]);
    p.id_sell[t] = realized_value(p.id_sell[t], s.alpha_id, r.id_sell[t]);
  }
  return p;
}

inline double realized_load(const MicrogridInstance& inst, const ScenarioConfig& s, const Realization& r, int t) {
  double sum = 0.0;
  for (size_t i = 0; i < inst.loads.size(); ++i) {
    sum += realized_value(inst.loads[i].load[static_cast<size_t>(t)], s.alpha_load, r.load[i][static_cast<size_t>(t)]);
  }
  return sum;
}

inline double realized_pv(const MicrogridInstance& inst, const ScenarioConfig& s, const Realization& r, size_t j, int t) {
  return realized_value(inst.pv[j].forecast[static_cast<size_t>(t)], s.alpha_pv, r.pv[j][static_cast<size_t>(t)]);
}

// Effective trip times; nominal when no realization is attached.
struct TripTimes {
  int depart = 0;
  int arrive = 0;
};

inline TripTimes effective_trip(const Trip& t, const Realization* r, size_t ev, size_t k) {
  if (r == nullptr) return {t.depart, t.arrive};
  return {t.depart + r->depart_offset[ev][k], t.arrive + r->arrive_offset[ev][k]};
}

inline double realized_trip_demand(const Trip& t, const ScenarioConfig& s, const Realization* r, size_t ev, size_t k) {
  return r == nullptr ? t.demand : realized_value(t.demand, s.alpha_ev, r->ev_demand[ev][k]);
}

// What the planner knows at the start of slot `now`: all realizations of
// slots before `now`, and the improved PV forecasts of the ramp window. A
// null realization means nothing has been revealed beyond nominal values.
struct InfoState {
  int now = 0;
  const Realization* realization = nullptr;
};

enum class LoadProtection { dualized, constant };

inline WindowData robust_window_data(const MicrogridInstance& inst, const SlotRange& range,
                                     const ScenarioConfig& sc, const DynamicPvRamp& ramp, const InfoState& info,
                                     LoadProtection protection = LoadProtection::dualized) {
  WindowData d = nominal_window_data(inst, range);
  const int n = range.size();
  const Realization* real = info.realization;

  if (sc.alpha_load > 0.0 && !inst.loads.empty()) {
    const double gamma = sc.load_gamma(inst);
    for (int r = 0; r < n; ++r) {
      std::vector<double> dev;
      for (const auto& l : inst.loads) dev.push_back(sc.alpha_load * l.load[static_cast<size_t>(range.begin + r)]);
      if (protection == LoadProtection::constant) {
        d.load_margin.push_back(support_budget(std::move(dev), gamma));
      } else {
        d.load_deviation.push_back(std::move(dev));
        d.load_gamma.push_back(gamma);
      }
    }
  }

  const double pv_scale = std::min(1.0, sc.pv_gamma(inst));
  for (size_t j = 0; j < inst.pv.size(); ++j) {
    for (int r = 0; r < n; ++r) {
      const int t = range.begin + r;
      const double p_hat = inst.pv[j].forecast[static_cast<size_t>(t)];
      const double red = ramp.reduction(t - info.now);
      const double actual = real ? realized_pv(inst, sc, *real, j, t) : p_hat;
      const double centre = p_hat + (1.0 - red) * (actual - p_hat);
      d.pv_cap[j][static_cast<size_t>(r)] = std::max(0.0, centre - sc.alpha_pv * p_hat * red * pv_scale);
    }
  }

  for (auto& p : d.da_buy_price) p *= 1.0 + sc.alpha_da;
  for (auto& p : d.da_sell_price) p *= 1.0 - sc.alpha_da;
  for (auto& p : d.id_buy_price) p *= 1.0 + sc.alpha_id;
  for (auto& p : d.id_sell_price) p *= 1.0 - sc.alpha_id;

  for (size_t h = 0; h < inst.evs.size(); ++h) {
    EvWindowData ed(n);
    const auto& trips = inst.evs[h].trips;
    for (size_t k = 0; k < trips.size(); ++k) {
      const Trip& tr = trips[k];
      const TripTimes eff = effective_trip(tr, real, h, k);
      if (eff.arrive < info.now) continue;  // arrived: its energy is already in the SoC
      const int away_begin = eff.depart < info.now ? eff.depart : tr.depart - sc.depart_window(tr);
      const int away_end = tr.arrive + sc.arrive_window(tr);
      if (away_begin >= range.end || away_end < range.begin) continue;
      const double worst = tr.demand * (1.0 + sc.alpha_ev);
      place_trip(ed, range, {away_begin, away_end, std::min(away_end, range.end - 1), worst,
                             2.0 * sc.alpha_ev * tr.demand});
    }
    d.ev[h] = std::move(ed);
  }
  return d;
}

// Robust counterpart of a window built by build_deterministic_window for the
// window starting at info.now. The window range and fixed state are reused;
// all uncertain data is replaced by its protected form.
inline WindowLp robustify_window(const WindowLp& lp, const MicrogridInstance& inst, const ScenarioConfig& scenario,
                                 const DynamicPvRamp& ramp, const InfoState& info,
                                 LoadProtection protection = LoadProtection::dualized) {
  if (info.now < 0 || info.now >= inst.slots()) throw std::invalid_argument("robustify_window: now outside horizon");
  if (info.now != lp.range.begin) throw std::invalid_argument("robustify_window: window does not start at now");
  return assemble_window(inst, lp.range, lp.fixed,
                         robust_window_data(inst, lp.range, scenario, ramp, info, protection));
}

}  // namespace mgrh
