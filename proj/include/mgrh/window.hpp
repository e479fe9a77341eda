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

// Window linear program of the microgrid model.
//
// Columns per slot t of the window [begin, end):
//   id_buy, id_sell           intraday trades
//   pv[j]                     used PV energy (absent when the cap is 0)
//   bat_c/bat_d/bat_soc[k]    battery charge, discharge, SoC after slot t
//   ev_c/ev_d/ev_soc[h]       EV charge, discharge (only while connected), SoC
// and per uncommitted day-ahead hour inside the window: da_buy, da_sell.
//
// Rows per slot: the balance row (supply >= demand), one SoC recursion per
// storage device, and the two grid-capacity rows when the slot's day-ahead
// hour is still free. Committed day-ahead volume is a constant: it moves to
// the right-hand side of the balance row and tightens the intraday bounds.

#pragma once

#include <mgrh/model.hpp>
#include <mgrh/simplex.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mgrh {

struct SlotRange {
  int begin = 0;
  int end = 0;
  [[nodiscard]] int size() const { return end - begin; }
  [[nodiscard]] bool contains(int t) const { return t >= begin && t < end; }
};

// State carried into a window: submitted day-ahead volumes and the SoC of
// every storage device at the start of the window.
struct FixedDecisions {
  int committed_hours = 0;  // hours [0, committed_hours) are submitted
  std::vector<double> da_buy, da_sell;
  std::vector<double> battery_soc, ev_soc;

  static FixedDecisions initial(const MicrogridInstance& inst) {
    FixedDecisions f;
    f.da_buy.assign(static_cast<size_t>(inst.grid.hours()), 0.0);
    f.da_sell = f.da_buy;
    for (const auto& b : inst.batteries) f.battery_soc.push_back(b.storage.initial_soc);
    for (const auto& e : inst.evs) f.ev_soc.push_back(e.storage.initial_soc);
    return f;
  }
};

// Connection and trip energy of one EV inside a window (relative slots).
struct EvWindowData {
  std::vector<char> available;
  std::vector<double> demand;    // energy removed from the SoC at the slot
  std::vector<double> headroom;  // reduction of the SoC upper bound

  explicit EvWindowData(int n = 0)
      : available(static_cast<size_t>(n), 1), demand(static_cast<size_t>(n), 0.0),
        headroom(static_cast<size_t>(n), 0.0) {}
};

// Away interval [away_begin, away_end] and booking slot in absolute slots.
// `spread` is the gap between the booked (largest) demand and the smallest
// possible demand; it lowers the SoC ceiling from the booking slot on.
struct TripPlacement {
  int away_begin = 0;
  int away_end = 0;
  int book = 0;
  double demand = 0.0;
  double spread = 0.0;
};

inline void place_trip(EvWindowData& ev, const SlotRange& range, const TripPlacement& p) {
  for (int t = std::max(p.away_begin, range.begin); t <= std::min(p.away_end, range.end - 1); ++t) {
    ev.available[static_cast<size_t>(t - range.begin)] = 0;
  }
  if (!range.contains(p.book)) return;
  const auto r = static_cast<size_t>(p.book - range.begin);
  ev.demand[r] += p.demand;
  for (size_t t = r; t < ev.headroom.size(); ++t) ev.headroom[t] += p.spread;
}

// Everything the assembler needs beyond the instance topology. Slot vectors
// are relative to the window start, hour vectors to its first hour.
struct WindowData {
  std::vector<double> load;        // aggregate load to cover
  std::vector<double> load_margin;  // constant protection added to `load`
  // Dualized budget protection: per slot the deviations alpha * p_hat of
  // every household and the budget. Empty means no dualized protection.
  std::vector<std::vector<double>> load_deviation;
  std::vector<double> load_gamma;
  std::vector<std::vector<double>> pv_cap;  // [system][slot]
  std::vector<double> da_buy_price, da_sell_price;
  std::vector<double> id_buy_price, id_sell_price;
  std::vector<EvWindowData> ev;
};

struct WindowLayout {
  int first_hour = 0;
  int end_hour = 0;
  std::vector<int> da_buy, da_sell;  // per hour, -1 when committed
  std::vector<int> id_buy, id_sell;
  // PV systems share one column per slot (all PV has zero cost and only
  // enters the balance); `pv_cap` splits its value back per system.
  std::vector<int> pv;
  std::vector<std::vector<double>> pv_cap;  // [system][relative slot]
  std::vector<std::vector<int>> bat_c, bat_d, bat_soc;
  std::vector<std::vector<int>> ev_c, ev_d, ev_soc;
  std::vector<int> balance_row;
  std::vector<int> protection_z;  // -1 when the slot has none
};

struct WindowLp {
  lp::StandardFormLp lp;
  std::vector<std::string> column_names;
  std::vector<std::string> row_names;
  WindowLayout layout;
  SlotRange range;
  FixedDecisions fixed;
};

namespace detail {

inline constexpr double kSocTolerance = 1e-7;

class WindowAssembler {
 public:
  WindowAssembler(const MicrogridInstance& inst, const SlotRange& range, const FixedDecisions& fixed,
                  const WindowData& data)
      : inst_(inst), range_(range), fixed_(fixed), data_(data) {}

  WindowLp build() {
    check_inputs();
    out_.range = range_;
    out_.fixed = fixed_;
    out_.layout.pv_cap = data_.pv_cap;
    const int n = range_.size();
    auto& L = out_.layout;
    const int sph = inst_.grid.slots_per_hour;
    L.first_hour = range_.begin / sph;
    L.end_hour = (range_.end + sph - 1) / sph;
    const double cap = inst_.grid_capacity;

    for (int h = L.first_hour; h < L.end_hour; ++h) {
      const auto rh = static_cast<size_t>(h - L.first_hour);
      if (hour_committed(h)) {
        L.da_buy.push_back(-1);
        L.da_sell.push_back(-1);
        continue;
      }
      if (h * sph < range_.begin || (h + 1) * sph > range_.end) {
        throw std::invalid_argument("window splits the uncommitted hour " + std::to_string(h));
      }
      L.da_buy.push_back(column("da_buy[" + std::to_string(h) + "]", data_.da_buy_price[rh], 0.0, sph * cap));
      L.da_sell.push_back(column("da_sell[" + std::to_string(h) + "]", -data_.da_sell_price[rh], 0.0, sph * cap));
    }

    for (int r = 0; r < n; ++r) {
      const int t = range_.begin + r;
      const auto ru = static_cast<size_t>(r);
      const std::string ts = "[" + std::to_string(t) + "]";
      const int h = t / sph;
      const bool committed = hour_committed(h);
      const double fixed_buy = committed ? fixed_.da_buy[static_cast<size_t>(h)] / sph : 0.0;
      const double fixed_sell = committed ? fixed_.da_sell[static_cast<size_t>(h)] / sph : 0.0;
      L.id_buy.push_back(column("id_buy" + ts, data_.id_buy_price[ru], 0.0, std::max(0.0, cap - fixed_buy)));
      L.id_sell.push_back(column("id_sell" + ts, -data_.id_sell_price[ru], 0.0, std::max(0.0, cap - fixed_sell)));

      std::vector<lp::Term> balance;
      balance.push_back({L.id_buy.back(), 1.0});
      balance.push_back({L.id_sell.back(), -1.0});
      if (!committed) {
        const auto rh = static_cast<size_t>(h - L.first_hour);
        balance.push_back({L.da_buy[rh], 1.0 / sph});
        balance.push_back({L.da_sell[rh], -1.0 / sph});
        row("grid_buy" + ts, {{L.da_buy[rh], 1.0 / sph}, {L.id_buy.back(), 1.0}}, lp::Sense::less_equal, cap);
        row("grid_sell" + ts, {{L.da_sell[rh], 1.0 / sph}, {L.id_sell.back(), 1.0}}, lp::Sense::less_equal, cap);
      }

      double pv_total = 0.0;
      for (const auto& cap_j : data_.pv_cap) pv_total += cap_j[ru];
      const int pv = pv_total > 0.0 ? column("pv" + ts, 0.0, 0.0, pv_total) : -1;
      L.pv.push_back(pv);
      if (pv >= 0) balance.push_back({pv, 1.0});

      for (size_t k = 0; k < inst_.batteries.size(); ++k) {
        if (r == 0) {
          L.bat_c.emplace_back();
          L.bat_d.emplace_back();
          L.bat_soc.emplace_back();
        }
        const auto& s = inst_.batteries[k].storage;
        if (s.capacity <= 0.0) {
          L.bat_c[k].push_back(-1);
          L.bat_d[k].push_back(-1);
          L.bat_soc[k].push_back(-1);
          continue;
        }
        const std::string name = std::to_string(k) + ts;
        const int c = column("bat_c" + name, 0.0, 0.0, s.charge_limit);
        const int d = column("bat_d" + name, 0.0, 0.0, s.discharge_limit);
        double lo = 0.0, hi = s.capacity;
        if (range_.end == inst_.slots() && t == range_.end - 1) lo = hi = s.initial_soc;
        const int soc = column("bat_soc" + name, 0.0, lo, hi);
        L.bat_c[k].push_back(c);
        L.bat_d[k].push_back(d);
        L.bat_soc[k].push_back(soc);
        balance.push_back({c, -1.0});
        balance.push_back({d, 1.0});
        soc_row("bat_soc_balance" + name, soc, r == 0 ? -1 : L.bat_soc[k][ru - 1], c, d, s,
                r == 0 ? fixed_.battery_soc[k] : 0.0);
      }

      for (size_t h2 = 0; h2 < inst_.evs.size(); ++h2) {
        if (r == 0) {
          L.ev_c.emplace_back();
          L.ev_d.emplace_back();
          L.ev_soc.emplace_back();
        }
        const auto& s = inst_.evs[h2].storage;
        const auto& ed = data_.ev[h2];
        if (!ev_active_[h2]) {
          L.ev_c[h2].push_back(-1);
          L.ev_d[h2].push_back(-1);
          L.ev_soc[h2].push_back(-1);
          continue;
        }
        const std::string name = std::to_string(h2) + ts;
        int c = -1, d = -1;
        if (ed.available[ru]) {
          if (s.charge_limit > 0.0) c = column("ev_c" + name, 0.0, 0.0, s.charge_limit);
          if (s.discharge_limit > 0.0) d = column("ev_d" + name, 0.0, 0.0, s.discharge_limit);
        }
        const int soc = column("ev_soc" + name, 0.0, 0.0, s.capacity - ed.headroom[ru]);
        L.ev_c[h2].push_back(c);
        L.ev_d[h2].push_back(d);
        L.ev_soc[h2].push_back(soc);
        if (c >= 0) balance.push_back({c, -1.0});
        if (d >= 0) balance.push_back({d, 1.0});
        soc_row("ev_soc_balance" + name, soc, r == 0 ? -1 : L.ev_soc[h2][ru - 1], c, d, s,
                (r == 0 ? fixed_.ev_soc[h2] : 0.0) - ed.demand[ru]);
      }

      double rhs = data_.load[ru] + (data_.load_margin.empty() ? 0.0 : data_.load_margin[ru]);
      rhs -= fixed_buy - fixed_sell;
      int z = -1;
      if (!data_.load_deviation.empty()) z = add_protection(r, ts, balance);
      L.protection_z.push_back(z);
      L.balance_row.push_back(row("balance" + ts, std::move(balance), lp::Sense::greater_equal, rhs));
    }
    return std::move(out_);
  }

 private:
  [[nodiscard]] bool hour_committed(int h) const { return h < fixed_.committed_hours; }

  void check_inputs() {
    const int H = inst_.slots();
    if (range_.begin < 0 || range_.end > H || range_.begin >= range_.end) {
      throw std::invalid_argument("window [" + std::to_string(range_.begin) + ", " +
                                  std::to_string(range_.end) + ") is outside the horizon");
    }
    const auto n = static_cast<size_t>(range_.size());
    const int sph = inst_.grid.slots_per_hour;
    const auto hours = static_cast<size_t>((range_.end + sph - 1) / sph - range_.begin / sph);
    auto sized = [&](size_t got, size_t want, const char* what) {
      if (got != want) throw std::invalid_argument(std::string("window data: bad size of ") + what);
    };
    sized(data_.load.size(), n, "load");
    if (!data_.load_margin.empty()) sized(data_.load_margin.size(), n, "load_margin");
    if (!data_.load_deviation.empty()) {
      sized(data_.load_deviation.size(), n, "load_deviation");
      sized(data_.load_gamma.size(), n, "load_gamma");
    }
    sized(data_.pv_cap.size(), inst_.pv.size(), "pv_cap");
    for (const auto& p : data_.pv_cap) sized(p.size(), n, "pv_cap");
    sized(data_.da_buy_price.size(), hours, "da_buy_price");
    sized(data_.da_sell_price.size(), hours, "da_sell_price");
    sized(data_.id_buy_price.size(), n, "id_buy_price");
    sized(data_.id_sell_price.size(), n, "id_sell_price");
    sized(data_.ev.size(), inst_.evs.size(), "ev");
    sized(fixed_.battery_soc.size(), inst_.batteries.size(), "battery_soc");
    sized(fixed_.ev_soc.size(), inst_.evs.size(), "ev_soc");
    if (fixed_.committed_hours < 0 || fixed_.committed_hours > inst_.grid.hours() ||
        fixed_.da_buy.size() < static_cast<size_t>(fixed_.committed_hours) ||
        fixed_.da_sell.size() < static_cast<size_t>(fixed_.committed_hours)) {
      throw std::invalid_argument("fixed day-ahead volumes do not cover the committed hours");
    }
    for (int h = range_.begin / sph; h < std::min(fixed_.committed_hours, static_cast<int>(range_.end + sph - 1) / sph); ++h) {
      const double b = fixed_.da_buy[static_cast<size_t>(h)], s = fixed_.da_sell[static_cast<size_t>(h)];
      if (b < 0.0 || s < 0.0 || b / sph > inst_.grid_capacity + 1e-9 || s / sph > inst_.grid_capacity + 1e-9) {
        throw std::invalid_argument("fixed day-ahead volume of hour " + std::to_string(h) +
                                    " violates the grid capacity");
      }
    }
    auto soc_ok = [](double soc, double cap) { return soc >= -kSocTolerance && soc <= cap + kSocTolerance; };
    for (size_t k = 0; k < inst_.batteries.size(); ++k) {
      if (!soc_ok(fixed_.battery_soc[k], inst_.batteries[k].storage.capacity)) {
        throw std::invalid_argument("fixed SoC of battery " + std::to_string(k) + " is outside [0, capacity]");
      }
    }
    ev_active_.assign(inst_.evs.size(), false);
    for (size_t h = 0; h < inst_.evs.size(); ++h) {
      if (!soc_ok(fixed_.ev_soc[h], inst_.evs[h].storage.capacity)) {
        throw std::invalid_argument("fixed SoC of EV " + std::to_string(h) + " is outside [0, capacity]");
      }
      const auto& ed = data_.ev[h];
      sized(ed.available.size(), n, "ev.available");
      sized(ed.demand.size(), n, "ev.demand");
      sized(ed.headroom.size(), n, "ev.headroom");
      bool demand = false;
      for (double v : ed.demand) demand = demand || v > 0.0;
      ev_active_[h] = inst_.evs[h].storage.capacity > 0.0 || demand;
    }
  }

  int column(std::string name, double cost, double lo, double hi) {
    out_.column_names.push_back(std::move(name));
    return out_.lp.add_column(cost, lo, hi);
  }

  int row(std::string name, std::vector<lp::Term> terms, lp::Sense sense, double rhs) {
    out_.row_names.push_back(std::move(name));
    return out_.lp.add_row(std::move(terms), sense, rhs);
  }

  // soc_t - soc_{t-1} - CE * c + d / DE = rhs
  void soc_row(std::string name, int soc, int prev, int c, int d, const StorageParams& s, double rhs) {
    std::vector<lp::Term> terms{{soc, 1.0}};
    if (prev >= 0) terms.push_back({prev, -1.0});
    if (c >= 0) terms.push_back({c, -s.charge_eff});
    if (d >= 0) terms.push_back({d, 1.0 / s.discharge_eff});
    row(std::move(name), std::move(terms), lp::Sense::equal, rhs);
  }

  // Dual form of max { dev . u : |u|_inf <= 1, |u|_1 <= gamma }:
  //   min gamma * z + sum_i w_i  s.t.  z + w_i >= dev_i,  z, w >= 0.
  int add_protection(int r, const std::string& ts, std::vector<lp::Term>& balance) {
    const auto& dev = data_.load_deviation[static_cast<size_t>(r)];
    bool any = false;
    for (double v : dev) any = any || v > 0.0;
    if (!any) return -1;
    const int z = column("prot_z" + ts, 0.0, 0.0, lp::kInfinity);
    balance.push_back({z, -data_.load_gamma[static_cast<size_t>(r)]});
    for (size_t i = 0; i < dev.size(); ++i) {
      if (dev[i] <= 0.0) continue;
      const std::string name = std::to_string(i) + ts;
      const int w = column("prot_w" + name, 0.0, 0.0, lp::kInfinity);
      balance.push_back({w, -1.0});
      row("prot" + name, {{z, 1.0}, {w, 1.0}}, lp::Sense::greater_equal, dev[i]);
    }
    return z;
  }

  const MicrogridInstance& inst_;
  SlotRange range_;
  const FixedDecisions& fixed_;
  const WindowData& data_;
  std::vector<bool> ev_active_;
  WindowLp out_;
};

}  // namespace detail

inline WindowLp assemble_window(const MicrogridInstance& inst, const SlotRange& range,
                                const FixedDecisions& fixed, const WindowData& data) {
  return detail::WindowAssembler(inst, range, fixed, data).build();
}

// Window data with every uncertain parameter at its nominal value. Trips that
// ended before the window are ignored; a trip still under way at the window
// end is charged at the last slot of the window.
inline WindowData nominal_window_data(const MicrogridInstance& inst, const SlotRange& range) {
  const int n = range.size();
  const int sph = inst.grid.slots_per_hour;
  WindowData d;
  for (int t = range.begin; t < range.end; ++t) d.load.push_back(inst.total_load(t));
  for (const auto& p : inst.pv) {
    d.pv_cap.emplace_back(p.forecast.begin() + range.begin, p.forecast.begin() + range.end);
  }
  for (int h = range.begin / sph; h < (range.end + sph - 1) / sph; ++h) {
    d.da_buy_price.push_back(inst.prices.da_price[static_cast<size_t>(h)]);
  }
  d.da_sell_price = d.da_buy_price;
  d.id_buy_price.assign(inst.prices.id_buy.begin() + range.begin, inst.prices.id_buy.begin() + range.end);
  d.id_sell_price.assign(inst.prices.id_sell.begin() + range.begin, inst.prices.id_sell.begin() + range.end);
  for (const auto& ev : inst.evs) {
    EvWindowData ed(n);
    for (const auto& tr : ev.trips) {
      if (tr.arrive < range.begin || tr.depart >= range.end) continue;
      place_trip(ed, range, {tr.depart, tr.arrive, std::min(tr.arrive, range.end - 1), tr.demand, 0.0});
    }
    d.ev.push_back(std::move(ed));
  }
  return d;
}

inline WindowLp build_deterministic_window(const MicrogridInstance& inst, const SlotRange& range,
                                           const FixedDecisions& fixed) {
  if (range.begin < 0 || range.end > inst.slots() || range.begin >= range.end) {
    throw std::invalid_argument("window is outside the horizon");
  }
  return assemble_window(inst, range, fixed, nominal_window_data(inst, range));
}

// Copies the window's primal values into `into` (full-horizon sized). Only
// slots in [from, to) and uncommitted hours starting in that span are written.
inline void store_decisions(const WindowLp& w, const std::vector<double>& x, const MicrogridInstance& inst,
                            DecisionSet& into, int from, int to) {
  const auto& L = w.layout;
  const int sph = inst.grid.slots_per_hour;
  auto val = [&](int c) { return c < 0 ? 0.0 : std::max(0.0, x[static_cast<size_t>(c)]); };
  for (int h = L.first_hour; h < L.end_hour; ++h) {
    const auto rh = static_cast<size_t>(h - L.first_hour);
    if (L.da_buy[rh] < 0 || h * sph < from || h * sph >= to) continue;
    into.da_buy[static_cast<size_t>(h)] = val(L.da_buy[rh]);
    into.da_sell[static_cast<size_t>(h)] = val(L.da_sell[rh]);
  }
  for (int t = std::max(from, w.range.begin); t < std::min(to, w.range.end); ++t) {
    const auto r = static_cast<size_t>(t - w.range.begin);
    const auto tu = static_cast<size_t>(t);
    into.id_buy[tu] = val(L.id_buy[r]);
    into.id_sell[tu] = val(L.id_sell[r]);
    double pv_total = 0.0;
    for (const auto& cap_j : L.pv_cap) pv_total += cap_j[r];
    const double pv = val(L.pv[r]);
    for (size_t j = 0; j < L.pv_cap.size(); ++j) {
      into.pv_used[j][tu] = pv_total > 0.0 ? std::min(L.pv_cap[j][r], pv * (L.pv_cap[j][r] / pv_total)) : 0.0;
    }
    for (size_t k = 0; k < L.bat_c.size(); ++k) {
      into.bat_charge[k][tu] = val(L.bat_c[k][r]);
      into.bat_discharge[k][tu] = val(L.bat_d[k][r]);
    }
    for (size_t h = 0; h < L.ev_c.size(); ++h) {
      into.ev_charge[h][tu] = val(L.ev_c[h][r]);
      into.ev_discharge[h][tu] = val(L.ev_d[h][r]);
    }
  }
}

// Day-ahead hours covered by the window that are still free.
inline void store_day_ahead(const WindowLp& w, const std::vector<double>& x, int first_hour, int end_hour,
                            std::vector<double>& da_buy, std::vector<double>& da_sell) {
  const auto& L = w.layout;
  for (int h = std::max(first_hour, L.first_hour); h < std::min(end_hour, L.end_hour); ++h) {
    const auto rh = static_cast<size_t>(h - L.first_hour);
    if (L.da_buy[rh] < 0) continue;
    da_buy[static_cast<size_t>(h)] = std::max(0.0, x[static_cast<size_t>(L.da_buy[rh])]);
    da_sell[static_cast<size_t>(h)] = std::max(0.0, x[static_cast<size_t>(L.da_sell[rh])]);
  }
}

// Starting basis for `to` from the basis `b` of the solved window `from`.
// Columns and rows are matched by name; new columns start at their lower
// bound and new rows with their logical in the basis.
inline lp::Basis carry_basis(const WindowLp& from, const lp::Basis& b, const WindowLp& to) {
  std::unordered_map<std::string, lp::BasisStatus> cols, rows;
  cols.reserve(from.column_names.size());
  rows.reserve(from.row_names.size());
  for (size_t j = 0; j < from.column_names.size() && j < b.columns.size(); ++j) cols.emplace(from.column_names[j], b.columns[j]);
  for (size_t i = 0; i < from.row_names.size() && i < b.rows.size(); ++i) rows.emplace(from.row_names[i], b.rows[i]);
  lp::Basis out;
  out.columns.reserve(to.column_names.size());
  for (const auto& name : to.column_names) {
    const auto it = cols.find(name);
    out.columns.push_back(it == cols.end() ? lp::BasisStatus::at_lower : it->second);
  }
  out.rows.reserve(to.row_names.size());
  for (const auto& name : to.row_names) {
    const auto it = rows.find(name);
    out.rows.push_back(it == rows.end() ? lp::BasisStatus::basic : it->second);
  }
  return out;
}

}  // namespace mgrh
