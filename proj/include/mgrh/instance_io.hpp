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


// Instance directory layout:
//   instance.cfg  horizon_slots, slots_per_hour, slots_per_day, grid_capacity_kwh
//   prices.csv    slot,da_price_eur_per_kwh,id_buy_eur_per_kwh,id_sell_eur_per_kwh
//   loads.csv     slot,household_id,load_kwh
//   pv.csv        slot,system_id,forecast_kwh
//   devices.csv   kind,id,capacity_kwh,charge_limit_kwh,discharge_limit_kwh,charge_eff,discharge_eff,initial_soc_kwh
//   trips.csv     ev_id,depart_slot,arrive_slot,demand_kwh,depart_window,arrive_window
// The day-ahead price is repeated on every slot of its hour.

#pragma once

#include <mgrh/model.hpp>
#include <mgrh/text_io.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mgrh {

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

inline void check_id(const std::string& id, const std::string& what) {
  if (id.empty() || id.find_first_of(",#\n\r") != std::string::npos || id != io::trim(id)) {
    throw std::invalid_argument(what + " id '" + id + "' cannot be written to a CSV file");
  }
}

// Reads `slot,id,value` rows into one series per id, in order of first
// appearance. Every id needs exactly one row per slot.
template <class Item, std::vector<double> Item::*Series>
std::vector<Item> read_series(const std::string& path, const std::vector<std::string>& header, int slots) {
  const io::Table table = io::read_table(path, header);
  std::vector<Item> items;
  std::map<std::string, size_t> index;
  const double missing = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : table.rows()) {
    const int t = table.integer(r, 0);
    if (t < 0 || t >= slots) {
      table.fail(r, "slot " + std::to_string(t) + " is outside the horizon of " + std::to_string(slots) + " slots");
    }
    const std::string& id = r.fields[1];
    if (id.empty()) table.fail(r, "empty id");
    auto [it, inserted] = index.emplace(id, items.size());
    if (inserted) {
      Item item;
      item.id = id;
      (item.*Series).assign(static_cast<size_t>(slots), missing);
      items.push_back(std::move(item));
    }
    const double v = table.number(r, 2);
    if (!(v >= 0.0) || !std::isfinite(v)) table.fail(r, "value must be finite and non-negative");
    double& cell = (items[it->second].*Series)[static_cast<size_t>(t)];
    if (!std::isnan(cell)) table.fail(r, "duplicate row for " + id + " at slot " + std::to_string(t));
    cell = v;
  }
  for (const auto& item : items) {
    const auto& s = item.*Series;
    for (int t = 0; t < slots; ++t) {
      if (std::isnan(s[static_cast<size_t>(t)])) {
        throw io::FormatError(path, 0, item.id + " has no row for slot " + std::to_string(t));
      }
    }
  }
  return items;
}

}  // namespace detail

inline void write_instance(const MicrogridInstance& inst, const std::filesystem::path& dir) {
  validate(inst);
  std::filesystem::create_directories(dir);
  const int H = inst.slots();
  using io::format_number;
  {
    auto out = detail::open_out(dir / "instance.cfg");
    out << "horizon_slots = " << inst.grid.horizon_slots << "\n"
        << "slots_per_hour = " << inst.grid.slots_per_hour << "\n"
        << "slots_per_day = " << inst.grid.slots_per_day << "\n"
        << "grid_capacity_kwh = " << format_number(inst.grid_capacity) << "\n";
  }
  {
    auto out = detail::open_out(dir / "prices.csv");
    out << "slot,da_price_eur_per_kwh,id_buy_eur_per_kwh,id_sell_eur_per_kwh\n";
    for (int t = 0; t < H; ++t) {
      const auto i = static_cast<size_t>(t);
      out << t << ',' << format_number(inst.prices.da_price[static_cast<size_t>(inst.grid.hour_of(t))]) << ','
          << format_number(inst.prices.id_buy[i]) << ',' << format_number(inst.prices.id_sell[i]) << '\n';
    }
  }
  {
    auto out = detail::open_out(dir / "loads.csv");
    out << "slot,household_id,load_kwh\n";
    for (const auto& l : inst.loads) detail::check_id(l.id, "household");
    for (int t = 0; t < H; ++t) {
      for (const auto& l : inst.loads) out << t << ',' << l.id << ',' << format_number(l.load[static_cast<size_t>(t)]) << '\n';
    }
  }
  {
    auto out = detail::open_out(dir / "pv.csv");
    out << "slot,system_id,forecast_kwh\n";
    for (const auto& p : inst.pv) detail::check_id(p.id, "PV system");
    for (int t = 0; t < H; ++t) {
      for (const auto& p : inst.pv) out << t << ',' << p.id << ',' << format_number(p.forecast[static_cast<size_t>(t)]) << '\n';
    }
  }
  {
    auto out = detail::open_out(dir / "devices.csv");
    out << "kind,id,capacity_kwh,charge_limit_kwh,discharge_limit_kwh,charge_eff,discharge_eff,initial_soc_kwh\n";
    auto row = [&](const char* kind, const std::string& id, const StorageParams& s) {
      detail::check_id(id, kind);
      out << kind << ',' << id << ',' << format_number(s.capacity) << ',' << format_number(s.charge_limit) << ','
          << format_number(s.discharge_limit) << ',' << format_number(s.charge_eff) << ','
          << format_number(s.discharge_eff) << ',' << format_number(s.initial_soc) << '\n';
    };
    for (const auto& b : inst.batteries) row("battery", b.id, b.storage);
    for (const auto& ev : inst.evs) row("ev", ev.id, ev.storage);
  }
  {
    auto out = detail::open_out(dir / "trips.csv");
    out << "ev_id,depart_slot,arrive_slot,demand_kwh,depart_window,arrive_window\n";
    for (const auto& ev : inst.evs) {
      for (const auto& tr : ev.trips) {
        out << ev.id << ',' << tr.depart << ',' << tr.arrive << ',' << format_number(tr.demand) << ','
            << tr.depart_window << ',' << tr.arrive_window << '\n';
      }
    }
  }
}

inline MicrogridInstance load_instance(const std::filesystem::path& dir) {
  MicrogridInstance inst;
  {
    const std::string path = (dir / "instance.cfg").string();
    const auto kv = io::read_key_values(path);
    auto get = [&](const std::string& key) -> const io::KeyValue& {
      const auto it = kv.find(key);
      if (it == kv.end()) throw io::FormatError(path, 0, "missing key '" + key + "'");
      return it->second;
    };
    auto as_int = [&](const std::string& key) {
      const auto& v = get(key);
      try {
        size_t used = 0;
        const int x = std::stoi(v.value, &used);
        if (used == v.value.size()) return x;
      } catch (const std::exception&) {
      }
      throw io::FormatError(path, v.line, key + ": '" + v.value + "' is not an integer");
    };
    for (const auto& [key, v] : kv) {
      if (key != "horizon_slots" && key != "slots_per_hour" && key != "slots_per_day" && key != "grid_capacity_kwh") {
        throw io::FormatError(path, v.line, "unknown key '" + key + "'");
      }
    }
    inst.grid.horizon_slots = as_int("horizon_slots");
    inst.grid.slots_per_hour = as_int("slots_per_hour");
    inst.grid.slots_per_day = as_int("slots_per_day");
    const auto& cap = get("grid_capacity_kwh");
    try {
      size_t used = 0;
      inst.grid_capacity = std::stod(cap.value, &used);
      if (used != cap.value.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw io::FormatError(path, cap.line, "grid_capacity_kwh: '" + cap.value + "' is not a number");
    }
    try {
      inst.grid.validate();
    } catch (const std::invalid_argument& e) {
      throw io::FormatError(path, 0, e.what());
    }
  }
  const int H = inst.slots();
  const int sph = inst.grid.slots_per_hour;

  {
    const io::Table table = io::read_table(
        (dir / "prices.csv").string(), {"slot", "da_price_eur_per_kwh", "id_buy_eur_per_kwh", "id_sell_eur_per_kwh"});
    const double missing = std::numeric_limits<double>::quiet_NaN();
    inst.prices.da_price.assign(static_cast<size_t>(inst.grid.hours()), missing);
    inst.prices.id_buy.assign(static_cast<size_t>(H), missing);
    inst.prices.id_sell.assign(static_cast<size_t>(H), missing);
    for (const auto& r : table.rows()) {
      const int t = table.integer(r, 0);
      if (t < 0 || t >= H) {
        table.fail(r, "slot " + std::to_string(t) + " is outside the horizon of " + std::to_string(H) + " slots");
      }
      const auto i = static_cast<size_t>(t);
      if (!std::isnan(inst.prices.id_buy[i])) table.fail(r, "duplicate price row for slot " + std::to_string(t));
      const double da = table.number(r, 1);
      double& hour = inst.prices.da_price[static_cast<size_t>(t / sph)];
      if (!std::isnan(hour) && hour != da) {
        table.fail(r, "day-ahead price differs within hour " + std::to_string(t / sph));
      }
      hour = da;
      inst.prices.id_buy[i] = table.number(r, 2);
      inst.prices.id_sell[i] = table.number(r, 3);
      for (double p : {da, inst.prices.id_buy[i], inst.prices.id_sell[i]}) {
        if (!std::isfinite(p)) table.fail(r, "price must be finite");
      }
    }
    for (int t = 0; t < H; ++t) {
      if (std::isnan(inst.prices.id_buy[static_cast<size_t>(t)])) {
        throw io::FormatError(table.file(), 0, "missing price row for slot " + std::to_string(t));
      }
    }
  }

  inst.loads = detail::read_series<LoadProfile, &LoadProfile::load>((dir / "loads.csv").string(),
                                                                    {"slot", "household_id", "load_kwh"}, H);
  inst.pv = detail::read_series<PvSystem, &PvSystem::forecast>((dir / "pv.csv").string(),
                                                                {"slot", "system_id", "forecast_kwh"}, H);

  std::map<std::string, size_t> ev_index;
  {
    const io::Table table =
        io::read_table((dir / "devices.csv").string(), {"kind", "id", "capacity_kwh", "charge_limit_kwh",
                                                        "discharge_limit_kwh", "charge_eff", "discharge_eff",
                                                        "initial_soc_kwh"});
    std::map<std::string, int> seen;
    for (const auto& r : table.rows()) {
      const std::string& kind = r.fields[0];
      const std::string& id = r.fields[1];
      if (id.empty()) table.fail(r, "empty id");
      if (!seen.emplace(id, r.line).second) table.fail(r, "duplicate device id '" + id + "'");
      StorageParams s{table.number(r, 2), table.number(r, 3), table.number(r, 4),
                      table.number(r, 5), table.number(r, 6), table.number(r, 7)};
      try {
        detail::check_storage(s, kind + " " + id);
      } catch (const std::invalid_argument& e) {
        table.fail(r, e.what());
      }
      if (kind == "battery") {
        inst.batteries.push_back({id, s});
      } else if (kind == "ev") {
        ev_index.emplace(id, inst.evs.size());
        inst.evs.push_back({id, s, {}});
      } else {
        table.fail(r, "unknown device kind '" + kind + "' (battery or ev)");
      }
    }
  }

  {
    const io::Table table =
        io::read_table((dir / "trips.csv").string(),
                       {"ev_id", "depart_slot", "arrive_slot", "demand_kwh", "depart_window", "arrive_window"});
    for (const auto& r : table.rows()) {
      const auto it = ev_index.find(r.fields[0]);
      if (it == ev_index.end()) table.fail(r, "unknown EV '" + r.fields[0] + "'");
      Trip tr{table.integer(r, 1), table.integer(r, 2), table.integer(r, 4), table.integer(r, 5),
              table.number(r, 3)};
      if (tr.arrive <= tr.depart) table.fail(r, "arrive_slot must be after depart_slot");
      if (tr.depart < 0 || tr.arrive >= H) table.fail(r, "trip is outside the horizon of " + std::to_string(H) + " slots");
      if (!(tr.demand >= 0.0) || !std::isfinite(tr.demand)) table.fail(r, "demand must be finite and non-negative");
      if (tr.depart_window < 0 || tr.arrive_window < 0) table.fail(r, "time windows must be non-negative");
      inst.evs[it->second].trips.push_back(tr);
    }
    for (auto& ev : inst.evs) {
      std::stable_sort(ev.trips.begin(), ev.trips.end(),
                       [](const Trip& a, const Trip& b) { return a.depart < b.depart; });
    }
  }

  try {
    validate(inst);
  } catch (const std::invalid_argument& e) {
    throw io::FormatError(dir.string(), 0, e.what());
  }
  return inst;
}

}  // namespace mgrh
