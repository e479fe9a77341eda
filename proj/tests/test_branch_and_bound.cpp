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

#include <gtest/gtest.h>

#include <mgrh/branch_and_bound.hpp>

#include <random>

namespace mgrh::lp {
namespace {

// Best objective over all 2^n assignments, or nullopt if none is feasible.
std::optional<double> enumerate(const BinaryProgram& bp) {
  const int n = bp.num_variables();
  std::optional<double> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    double obj = 0.0;
    for (int j = 0; j < n && ok; ++j) {
      const double v = (mask >> j) & 1u;
      ok = v >= bp.lower[static_cast<size_t>(j)] && v <= bp.upper[static_cast<size_t>(j)];
      obj += bp.objective[static_cast<size_t>(j)] * v;
    }
    for (const auto& r : bp.rows) {
      if (!ok) break;
      double a = 0.0;
      for (const auto& t : r.terms) a += t.value * ((mask >> t.column) & 1u);
      ok = r.sense == Sense::less_equal ? a <= r.rhs + 1e-9 : r.sense == Sense::greater_equal ? a >= r.rhs - 1e-9
                                                                                             : std::abs(a - r.rhs) <= 1e-9;
    }
    if (ok && (!best || obj > *best)) best = obj;
  }
  return best;
}

TEST(BranchAndBound, NoVariables) {
  const auto sol = solve_binary(BinaryProgram{});
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_EQ(sol.objective, 0.0);
}

TEST(BranchAndBound, TwoItemKnapsack) {
  BinaryProgram bp;
  const int a = bp.add_variable(3.0);
  const int b = bp.add_variable(4.0);
  bp.rows.push_back({{{a, 1.0}, {b, 1.0}}, Sense::less_equal, 1.0});
  const auto sol = solve_binary(bp);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_DOUBLE_EQ(sol.objective, 4.0);
  EXPECT_EQ(sol.x[0], 0.0);
  EXPECT_EQ(sol.x[1], 1.0);
}

TEST(BranchAndBound, MatchesEnumerationOnRandomInstances) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coef(-3, 9);
  std::uniform_int_distribution<int> nvars(1, 16);
  for (int trial = 0; trial < 60; ++trial) {
    BinaryProgram bp;
    const int n = trial < 30 ? 12 : nvars(rng);
    for (int j = 0; j < n; ++j) bp.add_variable(coef(rng));
    for (int r = 0; r < 1 + trial % 4; ++r) {
      Constraint c;
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        const int a = coef(rng);
        if (a != 0) c.terms.push_back({j, static_cast<double>(a)});
        total += std::max(0, a);
      }
      c.sense = (trial + r) % 5 == 0 ? Sense::greater_equal : Sense::less_equal;
      c.rhs = c.sense == Sense::less_equal ? std::floor(total * 0.4) : 2.0;
      bp.rows.push_back(c);
    }
    const auto oracle = enumerate(bp);
    const auto sol = solve_binary(bp);
    if (!oracle) {
      EXPECT_EQ(sol.status, Status::infeasible) << trial;
      continue;
    }
    ASSERT_EQ(sol.status, Status::optimal) << trial;
    EXPECT_NEAR(sol.objective, *oracle, 1e-7) << trial;
  }
}

TEST(BranchAndBound, RespectsFixedBounds) {
  BinaryProgram bp;
  const int a = bp.add_variable(-1.0, true, 1.0, 1.0);
  const int b = bp.add_variable(2.0);
  bp.rows.push_back({{{a, 1.0}, {b, 1.0}}, Sense::less_equal, 1.0});
  const auto sol = solve_binary(bp);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_DOUBLE_EQ(sol.objective, -1.0);
}

TEST(BranchAndBound, RejectsTooManyBinaries) {
  BinaryProgram bp;
  for (int j = 0; j < 70; ++j) bp.add_variable(1.0);
  EXPECT_THROW(solve_binary(bp), std::invalid_argument);
  // Presolve removes variables that can only cost.
  BinaryProgram cheap;
  for (int j = 0; j < 70; ++j) cheap.add_variable(j < 10 ? 1.0 : 0.0);
  EXPECT_NO_THROW(solve_binary(cheap));
}

TEST(BranchAndBound, TimeLimitReportsBound) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(1.0, 2.0);
  BinaryProgram bp;
  Constraint c;
  for (int j = 0; j < 40; ++j) {
    const double weight = w(rng);
    bp.add_variable(weight + 0.01 * w(rng));
    c.terms.push_back({j, weight});
  }
  c.rhs = 20.3;
  bp.rows.push_back(c);
  BinaryOptions opt;
  opt.time_limit_seconds = 0.0;
  const auto sol = solve_binary(bp, opt);
  EXPECT_EQ(sol.status, Status::time_limit);
  EXPECT_TRUE(std::isfinite(sol.best_bound));
}

}  // namespace
}  // namespace mgrh::lp
