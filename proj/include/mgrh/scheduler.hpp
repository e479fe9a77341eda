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

// Choice of rolling-horizon start slots by information gain.
//
//   F(S) = sum_t [ max_{s in S} v[t][s] + eta * max_{s in S} w[t][s] ]
//
// v rewards starting shortly before a PV slot (its forecast is sharper), w
// rewards starting after an EV arrival (the surplus over the worst-case trip
// demand becomes usable). F is a facility-location function, so it is
// monotone and submodular and greedy selection is a (1 - 1/e) approximation.

#pragma once

#include <mgrh/branch_and_bound.hpp>
#include <mgrh/horizon.hpp>
#include <mgrh/model.hpp>
#include <mgrh/robust.hpp>

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgrh {

// Dense |T| x |T| matrices indexed [t][s].
struct GainMatrix {
  int slots = 0;
  std::vector<double> v, w;
  double eta = 1.0;

  GainMatrix() = default;
  explicit GainMatrix(int n, double eta_weight = 1.0)
      : slots(n), v(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0), w(v), eta(eta_weight) {}

  [[nodiscard]] double& v_at(int t, int s) { return v[index(t, s)]; }
  [[nodiscard]] double& w_at(int t, int s) { return w[index(t, s)]; }
  [[nodiscard]] double v_at(int t, int s) const { return v[index(t, s)]; }
  [[nodiscard]] double w_at(int t, int s) const { return w[index(t, s)]; }

  // Value of starting at every slot of `starts`.
  [[nodiscard]] double objective(const std::vector<int>& starts) const {
    double f = 0.0;
    for (int t = 0; t < slots; ++t) {
      double bv = 0.0, bw = 0.0;
      for (int s : starts) {
        bv = std::max(bv, v_at(t, s));
        bw = std::max(bw, w_at(t, s));
      }
      f += bv + eta * bw;
    }
    return f;
  }

  // Total gain slot s could contribute on its own.
  [[nodiscard]] double column_mass(int s) const {
    double m = 0.0;
    for (int t = 0; t < slots; ++t) m += v_at(t, s) + eta * w_at(t, s);
    return m;
  }

 private:
  [[nodiscard]] size_t index(int t, int s) const {
    return static_cast<size_t>(t) * static_cast<size_t>(slots) + static_cast<size_t>(s);
  }
};

// Gain from the sharper PV forecast at slot t when an iteration starts at s.
inline double compute_v(int t, int s, double pv_total_forecast, const ScenarioConfig& scenario,
                        const DynamicPvRamp& ramp, double id_sell_price) {
  if (s > t) return 0.0;
  const double beta = std::max(0.0, 1.0 - static_cast<double>(t - s) / ramp.improved_window_slots);
  return pv_total_forecast * scenario.alpha_pv * beta * id_sell_price * (1.0 - scenario.alpha_id);
}

// Gain from the EV surplus of trips arriving at t when an iteration starts
// at s > t. `best_sell_from_s` is max_{l >= s} of the worst-case sell price.
inline double compute_w(int t, int s, const std::vector<double>& arriving_demand, const ScenarioConfig& scenario,
                        double best_sell_from_s) {
  if (s <= t) return 0.0;
  double sum = 0.0;
  for (double d : arriving_demand) sum += d * scenario.alpha_ev * best_sell_from_s;
  return sum;
}

inline GainMatrix build_gain_matrix(const MicrogridInstance& inst, const ScenarioConfig& scenario,
                                    const DynamicPvRamp& ramp, double eta = 1.0) {
  const int H = inst.slots();
  GainMatrix g(H, eta);
  std::vector<double> best_sell(static_cast<size_t>(H) + 1, 0.0);
  for (int l = H - 1; l >= 0; --l) {
    const double p = inst.prices.id_sell[static_cast<size_t>(l)] * (1.0 - scenario.alpha_id);
    best_sell[static_cast<size_t>(l)] = std::max(best_sell[static_cast<size_t>(l) + 1], p);
  }
  std::vector<std::vector<double>> arrivals(static_cast<size_t>(H));
  for (const auto& ev : inst.evs) {
    for (const auto& tr : ev.trips) arrivals[static_cast<size_t>(tr.arrive)].push_back(tr.demand);
  }
  for (int t = 0; t < H; ++t) {
    const double pv = inst.total_pv(t);
    const double price = inst.prices.id_sell[static_cast<size_t>(t)];
    if (pv > 0.0) {
      for (int s = std::max(0, t - ramp.improved_window_slots + 1); s <= t; ++s) {
        g.v_at(t, s) = compute_v(t, s, pv, scenario, ramp, price);
      }
    }
    const auto& arr = arrivals[static_cast<size_t>(t)];
    if (!arr.empty()) {
      for (int s = t + 1; s < H; ++s) g.w_at(t, s) = compute_w(t, s, arr, scenario, best_sell[static_cast<size_t>(s)]);
    }
  }
  return g;
}

enum class SelectionMode { greedy, exact };

struct SelectionResult {
  std::vector<int> chosen;              // increasing
  std::vector<double> marginal_gain;    // per chosen slot, in the order of `chosen`
  std::vector<int> assignment_v;        // per t, chosen s or -1
  std::vector<int> assignment_w;
  double objective = 0.0;
};

namespace detail {

inline void assign(const GainMatrix& g, SelectionResult& r) {
  r.assignment_v.assign(static_cast<size_t>(g.slots), -1);
  r.assignment_w.assign(static_cast<size_t>(g.slots), -1);
  for (int t = 0; t < g.slots; ++t) {
    double bv = 0.0, bw = 0.0;
    for (int s : r.chosen) {  // increasing, so ties keep the smallest s
      if (g.v_at(t, s) > bv) bv = g.v_at(t, s), r.assignment_v[static_cast<size_t>(t)] = s;
      if (g.w_at(t, s) > bw) bw = g.w_at(t, s), r.assignment_w[static_cast<size_t>(t)] = s;
    }
  }
  r.objective = g.objective(r.chosen);
}

inline void check_selection_inputs(const GainMatrix& g, int k, const std::vector<int>& forced) {
  if (k < static_cast<int>(forced.size())) {
    throw std::invalid_argument("iteration budget " + std::to_string(k) + " is below the " +
                                std::to_string(forced.size()) + " forced slots");
  }
  for (int s : forced) {
    if (s < 0 || s >= g.slots) throw std::invalid_argument("forced slot outside the gain matrix");
  }
}

struct Candidate {
  double gain;
  int slot;
  bool operator<(const Candidate& o) const { return gain < o.gain || (gain == o.gain && slot > o.slot); }
};

inline SelectionResult select_greedy(const GainMatrix& g, int k, const std::vector<int>& forced) {
  const int n = g.slots;
  std::vector<double> bv(static_cast<size_t>(n), 0.0), bw(static_cast<size_t>(n), 0.0);
  std::vector<char> in(static_cast<size_t>(n), 0);
  // Nonzero entries per column, gathered in one row-major pass.
  struct Entry {
    int t;
    double v, w;
  };
  std::vector<std::vector<Entry>> col(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      const double v = g.v_at(t, s), w = g.w_at(t, s);
      if (v != 0.0 || w != 0.0) col[static_cast<size_t>(s)].push_back({t, v, w});
    }
  }
  auto marginal = [&](int s) {
    double m = 0.0;
    for (const Entry& e : col[static_cast<size_t>(s)]) {
      m += std::max(0.0, e.v - bv[static_cast<size_t>(e.t)]) + g.eta * std::max(0.0, e.w - bw[static_cast<size_t>(e.t)]);
    }
    return m;
  };
  std::vector<std::pair<int, double>> picked;
  auto take = [&](int s, double gain) {
    in[static_cast<size_t>(s)] = 1;
    for (const Entry& e : col[static_cast<size_t>(s)]) {
      bv[static_cast<size_t>(e.t)] = std::max(bv[static_cast<size_t>(e.t)], e.v);
      bw[static_cast<size_t>(e.t)] = std::max(bw[static_cast<size_t>(e.t)], e.w);
    }
    picked.emplace_back(s, gain);
  };
  for (int s : forced) {
    if (!in[static_cast<size_t>(s)]) take(s, marginal(s));
  }

  // Lazy evaluation: stored gains are upper bounds by submodularity.
  std::priority_queue<Candidate> heap;
  for (int s = 0; s < n; ++s) {
    if (!in[static_cast<size_t>(s)]) heap.push({marginal(s), s});
  }
  while (static_cast<int>(picked.size()) < k && !heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    top.gain = marginal(top.slot);
    if (!heap.empty() && top < heap.top()) {
      heap.push(top);
      continue;
    }
    if (top.gain <= 0.0) break;
    take(top.slot, top.gain);
  }

  SelectionResult r;
  std::sort(picked.begin(), picked.end());
  for (const auto& [s, gain] : picked) {
    r.chosen.push_back(s);
    r.marginal_gain.push_back(gain);
  }
  assign(g, r);
  return r;
}

inline SelectionResult select_exact(const GainMatrix& g, int k, const std::vector<int>& forced,
                                    const lp::BinaryOptions& opt) {
  const int n = g.slots;
  lp::BinaryProgram bp;
  std::vector<int> x(static_cast<size_t>(n), -1);
  std::vector<char> is_forced(static_cast<size_t>(n), 0);
  for (int s : forced) is_forced[static_cast<size_t>(s)] = 1;
  for (int s = 0; s < n; ++s) {
    if (is_forced[static_cast<size_t>(s)]) {
      x[static_cast<size_t>(s)] = bp.add_variable(0.0, true, 1.0, 1.0);
    } else if (g.column_mass(s) > 0.0) {
      x[static_cast<size_t>(s)] = bp.add_variable(0.0);
    }
  }
  lp::Constraint budget{{}, lp::Sense::less_equal, static_cast<double>(k)};
  for (int s = 0; s < n; ++s) {
    if (x[static_cast<size_t>(s)] >= 0) budget.terms.push_back({x[static_cast<size_t>(s)], 1.0});
  }
  bp.rows.push_back(budget);
  // y (and z) assign each t to at most one open slot; integral once x is.
  auto add_assignment = [&](auto value) {
    for (int t = 0; t < n; ++t) {
      lp::Constraint once{{}, lp::Sense::less_equal, 1.0};
      for (int s = 0; s < n; ++s) {
        const double c = value(t, s);
        if (c <= 0.0 || x[static_cast<size_t>(s)] < 0) continue;
        const int y = bp.add_variable(c, false);
        once.terms.push_back({y, 1.0});
        bp.rows.push_back({{{y, 1.0}, {x[static_cast<size_t>(s)], -1.0}}, lp::Sense::less_equal, 0.0});
      }
      if (!once.terms.empty()) bp.rows.push_back(std::move(once));
    }
  };
  add_assignment([&](int t, int s) { return g.v_at(t, s); });
  add_assignment([&](int t, int s) { return g.eta * g.w_at(t, s); });

  const lp::LpSolution sol = lp::solve_binary(bp, opt);
  if (sol.status != lp::Status::optimal) {
    throw std::runtime_error(std::string("exact start selection: ") + lp::to_string(sol.status));
  }
  SelectionResult r;
  std::vector<int> chosen;
  for (int s = 0; s < n; ++s) {
    const int c = x[static_cast<size_t>(s)];
    if (c >= 0 && sol.x[static_cast<size_t>(c)] > 0.5) chosen.push_back(s);
  }
  // Marginal gains in slot order.
  for (size_t i = 0; i < chosen.size(); ++i) {
    const std::vector<int> prefix(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(i));
    auto with = prefix;
    with.push_back(chosen[i]);
    r.marginal_gain.push_back(g.objective(with) - g.objective(prefix));
  }
  r.chosen = std::move(chosen);
  assign(g, r);
  return r;
}

}  // namespace detail

inline SelectionResult select_starts(const GainMatrix& gains, int k, std::vector<int> forced,
                                     SelectionMode mode = SelectionMode::greedy,
                                     const lp::BinaryOptions& exact_options = {}) {
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  detail::check_selection_inputs(gains, k, forced);
  return mode == SelectionMode::greedy ? detail::select_greedy(gains, k, forced)
                                       : detail::select_exact(gains, k, forced, exact_options);
}

struct DynamicSchedule {
  StartSchedule schedule;
  SelectionResult selection;
  GainMatrix gains;
};

inline DynamicSchedule dynamic_schedule_detail(const MicrogridInstance& inst, const ScenarioConfig& scenario,
                                               const DynamicPvRamp& ramp, int k, double eta = 1.0,
                                               SelectionMode mode = SelectionMode::greedy) {
  DynamicSchedule out;
  out.gains = build_gain_matrix(inst, scenario, ramp, eta);
  out.schedule.forced_da_slots = inst.grid.day_ahead_submission_slots();
  out.selection = select_starts(out.gains, k, out.schedule.forced_da_slots, mode);
  out.schedule.start_slots = out.selection.chosen;
  return out;
}

inline StartSchedule dynamic_schedule(const MicrogridInstance& inst, const ScenarioConfig& scenario,
                                      const DynamicPvRamp& ramp, int k, double eta = 1.0,
                                      SelectionMode mode = SelectionMode::greedy) {
  return dynamic_schedule_detail(inst, scenario, ramp, k, eta, mode).schedule;
}

}  // namespace mgrh
