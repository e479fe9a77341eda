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

// Depth-first branch and bound for 0/1 programs
//   maximize c . x  s.t.  rows,  x in {0, 1}^n.
// Node relaxations go through solve_lp. Variables marked `branch = false`
// are never branched on; the caller guarantees that they are integral in
// every relaxation optimum once the branched variables are integral.

#pragma once

#include <mgrh/simplex.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mgrh::lp {

struct BinaryProgram {
  std::vector<double> objective;  // maximized
  std::vector<double> lower, upper;  // each 0 or 1
  std::vector<char> branch;
  std::vector<Constraint> rows;

  int add_variable(double c, bool branch_on = true, double lo = 0.0, double hi = 1.0) {
    objective.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    branch.push_back(branch_on ? 1 : 0);
    return static_cast<int>(objective.size()) - 1;
  }
  [[nodiscard]] int num_variables() const { return static_cast<int>(objective.size()); }
};

struct BinaryOptions {
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  int max_branch_variables = 64;
  double integrality_tol = 1e-6;
  SimplexOptions lp;
};

namespace detail {

// Variables that can only hurt (objective <= 0) and only consume capacity
// in <= rows (coefficients >= 0, >= rows: <= 0) are fixed at their lower
// bound.
inline std::vector<char> presolve_fixed(const BinaryProgram& bp) {
  const int n = bp.num_variables();
  std::vector<char> harmless(static_cast<size_t>(n), 1);
  for (const auto& row : bp.rows) {
    for (const auto& t : row.terms) {
      const double v = row.sense == Sense::less_equal ? t.value : row.sense == Sense::greater_equal ? -t.value : 1.0;
      if (row.sense == Sense::equal || v < 0.0) harmless[static_cast<size_t>(t.column)] = 0;
    }
  }
  std::vector<char> fixed(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<size_t>(j);
    fixed[ju] = harmless[ju] && bp.objective[ju] <= 0.0 && bp.lower[ju] == 0.0;
  }
  return fixed;
}

}  // namespace detail

inline LpSolution solve_binary(const BinaryProgram& bp, const BinaryOptions& opt = {}) {
  const int n = bp.num_variables();
  if (bp.lower.size() != static_cast<size_t>(n) || bp.upper.size() != static_cast<size_t>(n) ||
      bp.branch.size() != static_cast<size_t>(n)) {
    throw std::invalid_argument("solve_binary: size mismatch");
  }
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<size_t>(j);
    const bool ok = (bp.lower[ju] == 0.0 || bp.lower[ju] == 1.0) && (bp.upper[ju] == 0.0 || bp.upper[ju] == 1.0);
    if (!ok || !std::isfinite(bp.objective[ju])) throw std::invalid_argument("solve_binary: invalid variable");
  }
  const auto fixed = detail::presolve_fixed(bp);

  StandardFormLp base;
  std::vector<int> branch_vars;
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<size_t>(j);
    base.add_column(-bp.objective[ju], bp.lower[ju], fixed[ju] ? 0.0 : bp.upper[ju]);
    if (bp.branch[ju] && !fixed[ju] && bp.lower[ju] != bp.upper[ju]) branch_vars.push_back(j);
  }
  if (static_cast<int>(branch_vars.size()) > opt.max_branch_variables) {
    throw std::invalid_argument("solve_binary: " + std::to_string(branch_vars.size()) +
                                " binaries remain after presolve (limit " +
                                std::to_string(opt.max_branch_variables) + ")");
  }
  base.rows = bp.rows;

  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    const std::chrono::duration<double> e = std::chrono::steady_clock::now() - start;
    return e.count() > opt.time_limit_seconds;
  };

  LpSolution best;
  best.status = Status::infeasible;
  double incumbent = -std::numeric_limits<double>::infinity();
  double open_bound = -std::numeric_limits<double>::infinity();
  bool timed_out = false;

  struct Node {
    std::vector<double> lower, upper;
    double parent_bound;
  };
  std::vector<Node> stack;
  stack.push_back({base.lower, base.upper, std::numeric_limits<double>::infinity()});
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.parent_bound <= incumbent + 1e-9) continue;
    // The root is always solved so a finite bound exists on timeout.
    if (nodes > 0 && out_of_time()) {
      timed_out = true;
      open_bound = std::max(open_bound, node.parent_bound);
      for (const auto& rest : stack) open_bound = std::max(open_bound, rest.parent_bound);
      break;
    }
    base.lower = node.lower;
    base.upper = node.upper;
    const LpSolution rel = solve_lp(base, opt.lp);
    ++nodes;
    iterations += rel.iterations;
    if (rel.status != Status::optimal) continue;
    const double bound = -rel.objective;
    if (bound <= incumbent + 1e-9) continue;

    int pick = -1;
    double best_frac = opt.integrality_tol;
    for (int j : branch_vars) {
      const double v = rel.x[static_cast<size_t>(j)];
      const double f = std::min(v - std::floor(v), std::ceil(v) - v);
      if (f > best_frac + 1e-12) {
        best_frac = f;
        pick = j;
      }
    }
    if (pick < 0) {
      incumbent = bound;
      best.status = Status::optimal;
      best.objective = bound;
      best.x = rel.x;
      for (int j = 0; j < n; ++j) {
        auto& v = best.x[static_cast<size_t>(j)];
        if (std::abs(v - std::round(v)) <= opt.integrality_tol) v = std::round(v);
      }
      continue;
    }
    const auto pu = static_cast<size_t>(pick);
    Node zero{node.lower, node.upper, bound};
    zero.upper[pu] = 0.0;
    Node one{std::move(node.lower), std::move(node.upper), bound};
    one.lower[pu] = 1.0;
    stack.push_back(std::move(zero));
    stack.push_back(std::move(one));  // explored first
  }

  best.iterations = iterations;
  if (timed_out) {
    // Reported with the incumbent (if any) and the best open bound.
    best.best_bound = std::max(open_bound, incumbent);
    best.status = Status::time_limit;
  } else {
    best.best_bound = best.status == Status::optimal ? best.objective : -std::numeric_limits<double>::infinity();
  }
  if (n == 0 && best.status == Status::optimal) best.objective = 0.0;
  return best;
}

}  // namespace mgrh::lp
