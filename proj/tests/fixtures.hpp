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

#pragma once

#include <mgrh/model.hpp>
#include <mgrh/window.hpp>

#include <string>
#include <vector>

namespace mgrh::test {

// Empty instance with flat prices.
inline MicrogridInstance empty_instance(int days = 1, double da = 0.08, double id_buy = 0.10,
                                        double id_sell = 0.05, double grid_capacity = 10.0) {
  MicrogridInstance inst;
  inst.grid.horizon_slots = days * 96;
  inst.grid_capacity = grid_capacity;
  inst.prices.da_price.assign(static_cast<size_t>(inst.grid.hours()), da);
  inst.prices.id_buy.assign(static_cast<size_t>(inst.slots()), id_buy);
  inst.prices.id_sell.assign(static_cast<size_t>(inst.slots()), id_sell);
  return inst;
}

inline void add_household(MicrogridInstance& inst, double load) {
  inst.loads.push_back({"h" + std::to_string(inst.loads.size()),
                        std::vector<double>(static_cast<size_t>(inst.slots()), load)});
}

inline void add_pv(MicrogridInstance& inst, double forecast) {
  inst.pv.push_back({"pv" + std::to_string(inst.pv.size()),
                     std::vector<double>(static_cast<size_t>(inst.slots()), forecast)});
}

inline StorageParams storage(double capacity, double limit, double eff = 0.95, double soc = 0.0) {
  return StorageParams{capacity, limit, limit, eff, eff, soc};
}

inline void add_battery(MicrogridInstance& inst, const StorageParams& s) {
  inst.batteries.push_back({"b" + std::to_string(inst.batteries.size()), s});
}

inline void add_ev(MicrogridInstance& inst, const StorageParams& s, std::vector<Trip> trips) {
  inst.evs.push_back({"ev" + std::to_string(inst.evs.size()), s, std::move(trips)});
}

// Fixed state with every day-ahead hour already submitted at zero volume.
inline FixedDecisions no_day_ahead(const MicrogridInstance& inst) {
  FixedDecisions f = FixedDecisions::initial(inst);
  f.committed_hours = inst.grid.hours();
  return f;
}

inline int column_named(const WindowLp& w, const std::string& name) {
  for (size_t i = 0; i < w.column_names.size(); ++i) {
    if (w.column_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace mgrh::test
