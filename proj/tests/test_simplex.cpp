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

#include <mgrh/simplex.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "random_lp.hpp"

namespace mgrh::lp {
namespace {

TEST(Simplex, SingleBoundedVariable) {
  StandardFormLp lp;
  lp.add_column(-1.0, 0.0, 1.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.objective, -1.0, 1e-12);
}

TEST(Simplex, SimplexEdge) {
  StandardFormLp lp;
  const int x = lp.add_column(-1.0, 0.0, kInfinity);
  const int y = lp.add_column(-1.0, 0.0, kInfinity);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Sense::less_equal, 1.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective, -1.0, 1e-9);
  EXPECT_NEAR(sol.x[0] + sol.x[1], 1.0, 1e-9);
}

TEST(Simplex, ContradictoryRowsAreInfeasible) {
  StandardFormLp lp;
  const int x = lp.add_column(0.0, -kInfinity, kInfinity);
  lp.add_row({{x, 1.0}}, Sense::greater_equal, 2.0);
  lp.add_row({{x, 1.0}}, Sense::less_equal, 1.0);
  EXPECT_EQ(solve_lp(lp).status, Status::infeasible);
}

TEST(Simplex, CrossedBoundsAreInfeasible) {
  StandardFormLp lp;
  lp.add_column(0.0, 2.0, 1.0);
  EXPECT_EQ(solve_lp(lp).status, Status::infeasible);
}

TEST(Simplex, DetectsUnbounded) {
  StandardFormLp lp;
  const int x = lp.add_column(-1.0, 0.0, kInfinity);
  const int y = lp.add_column(0.0, 0.0, kInfinity);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Sense::less_equal, 1.0);
  EXPECT_EQ(solve_lp(lp).status, Status::unbounded);
}

TEST(Simplex, NoRows) {
  StandardFormLp lp;
  lp.add_column(2.0, -1.0, 3.0);
  lp.add_column(-1.0, -kInfinity, 4.0);
  lp.add_column(0.0, -kInfinity, kInfinity);
  lp.objective_offset = 0.5;
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_DOUBLE_EQ(sol.objective, 0.5 - 2.0 - 4.0);
}

TEST(Simplex, RejectsMalformedInput) {
  StandardFormLp lp;
  lp.add_column(1.0, 0.0, 1.0);
  lp.lower.push_back(0.0);
  EXPECT_THROW(solve_lp(lp), std::invalid_argument);

  StandardFormLp nan_cost;
  nan_cost.add_column(std::nan(""), 0.0, 1.0);
  EXPECT_THROW(solve_lp(nan_cost), std::invalid_argument);

  StandardFormLp bad_col;
  bad_col.add_column(1.0, 0.0, 1.0);
  bad_col.add_row({{3, 1.0}}, Sense::less_equal, 1.0);
  EXPECT_THROW(solve_lp(bad_col), std::invalid_argument);

  StandardFormLp inf_coef;
  inf_coef.add_column(1.0, 0.0, 1.0);
  inf_coef.add_row({{0, kInfinity}}, Sense::less_equal, 1.0);
  EXPECT_THROW(solve_lp(inf_coef), std::invalid_argument);
}

TEST(Simplex, EqualityAndFreeVariables) {
  // min x + 2y  s.t. x + y = 3, x - y >= -1, x free, y in [0, 10]
  StandardFormLp lp;
  const int x = lp.add_column(1.0, -kInfinity, kInfinity);
  const int y = lp.add_column(2.0, 0.0, 10.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Sense::equal, 3.0);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Sense::greater_equal, -1.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.x[0], 3.0, 1e-9);
  EXPECT_NEAR(sol.x[1], 0.0, 1e-9);
  EXPECT_NEAR(sol.objective, 3.0, 1e-9);
}

// Beale's example cycles under the textbook largest-coefficient rule.
TEST(Simplex, BealeDegenerateInstanceTerminates) {
  StandardFormLp lp;
  const int x4 = lp.add_column(-0.75, 0.0, kInfinity);
  const int x5 = lp.add_column(150.0, 0.0, kInfinity);
  const int x6 = lp.add_column(-0.02, 0.0, kInfinity);
  const int x7 = lp.add_column(6.0, 0.0, kInfinity);
  lp.add_row({{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, Sense::less_equal, 0.0);
  lp.add_row({{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, Sense::less_equal, 0.0);
  lp.add_row({{x6, 1.0}}, Sense::less_equal, 1.0);
  SimplexOptions opt;
  opt.stall_threshold = 1;
  const auto sol = solve_lp(lp, opt);
  ASSERT_EQ(sol.status, Status::optimal);
  EXPECT_NEAR(sol.objective, -0.05, 1e-9);
}

TEST(Simplex, HeavilyDegenerateAssignmentTerminates) {
  // Assignment polytope: every vertex is highly degenerate.
  const int n = 8;
  StandardFormLp lp;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cost(1, 9);
  for (int i = 0; i < n * n; ++i) lp.add_column(cost(rng), 0.0, kInfinity);
  for (int i = 0; i < n; ++i) {
    std::vector<Term> row, col;
    for (int j = 0; j < n; ++j) {
      row.push_back({i * n + j, 1.0});
      col.push_back({j * n + i, 1.0});
    }
    lp.add_row(row, Sense::equal, 1.0);
    lp.add_row(col, Sense::equal, 1.0);
  }
  for (int threshold : {1, 5, 1000}) {
    SimplexOptions opt;
    opt.stall_threshold = threshold;
    const auto sol = solve_lp(lp, opt);
    ASSERT_EQ(sol.status, Status::optimal);
    // Brute-force the assignment over all permutations.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    double best = 1e18;
    do {
      double c = 0;
      for (int i = 0; i < n; ++i) c += lp.cost[static_cast<size_t>(i * n + perm[static_cast<size_t>(i)])];
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(sol.objective, best, 1e-9);
  }
}

TEST(Simplex, MatchesVertexEnumerationOnRandomLps) {
  std::mt19937_64 rng(2026);
  int optimal = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto lp = test::random_bounded_lp(rng, 8, 8);
    const auto sol = solve_lp(lp);
    const auto oracle = test::vertex_enumeration_min(lp);
    if (!oracle) {
      EXPECT_EQ(sol.status, Status::infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(sol.status, Status::optimal) << "trial " << trial;
    EXPECT_NEAR(sol.objective, *oracle, 1e-6) << "trial " << trial;
    ++optimal;
  }
  EXPECT_GT(optimal, 60);
}

TEST(Oracle, FastVertexEnumerationMatchesNaive) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 150; ++trial) {
    const auto lp = test::random_bounded_lp(rng, 6, 6);
    const auto fast = test::vertex_enumeration_min(lp);
    const auto naive = test::vertex_enumeration_min_naive(lp);
    ASSERT_EQ(fast.has_value(), naive.has_value()) << "trial " << trial;
    if (fast) EXPECT_NEAR(*fast, *naive, 1e-9) << "trial " << trial;
  }
}

TEST(Simplex, OptimalSolutionsSatisfyKktConditions) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lp = test::random_bounded_lp(rng, 10, 10);
    const auto sol = solve_lp(lp);
    if (sol.status != Status::optimal) continue;
    const auto report = test::kkt_residuals(lp, sol);
    EXPECT_LE(report.primal, 1e-7) << "trial " << trial;
    EXPECT_LE(report.dual, 1e-7) << "trial " << trial;
    EXPECT_LE(report.complementarity, 1e-7) << "trial " << trial;
    double obj = lp.objective_offset;
    for (int j = 0; j < lp.num_columns(); ++j) obj += lp.cost[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
    EXPECT_NEAR(obj, sol.objective, 1e-7);
  }
}

TEST(Simplex, IsDeterministic) {
  std::mt19937_64 rng(5);
  const auto lp = test::random_bounded_lp(rng, 10, 10);
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Simplex, RefactorIntervalDoesNotChangeOptimum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto lp = test::random_bounded_lp(rng, 10, 10);
    SimplexOptions every;
    every.refactor_interval = 1;
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp, every);
    ASSERT_EQ(a.status, b.status);
    if (a.status == Status::optimal) EXPECT_NEAR(a.objective, b.objective, 1e-9);
  }
}

TEST(WarmStart, OwnOptimalBasisNeedsNoPivots) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto lp = test::random_bounded_lp(rng, 10, 10);
    const auto cold = solve_lp(lp);
    if (cold.status != Status::optimal) continue;
    const auto warm = solve_lp(lp, {}, &cold.basis);
    ASSERT_EQ(warm.status, Status::optimal) << "trial " << trial;
    EXPECT_TRUE(warm.warm_started);
    EXPECT_EQ(warm.iterations, 0) << "trial " << trial;
    EXPECT_NEAR(warm.objective, cold.objective, 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(WarmStart, PerturbedLpMatchesColdSolve) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (int trial = 0; trial < 80; ++trial) {
    auto lp = test::random_bounded_lp(rng, 10, 10);
    const auto first = solve_lp(lp);
    if (first.status != Status::optimal) continue;
    for (auto& c : lp.cost) c += jitter(rng);
    for (auto& r : lp.rows) r.rhs += jitter(rng);
    for (size_t j = 0; j < lp.upper.size(); ++j) lp.upper[j] = std::max(lp.lower[j], lp.upper[j] + jitter(rng));
    const auto cold = solve_lp(lp);
    const auto warm = solve_lp(lp, {}, &first.basis);
    ASSERT_EQ(warm.status, cold.status) << "trial " << trial;
    if (cold.status == Status::optimal) EXPECT_NEAR(warm.objective, cold.objective, 1e-7) << "trial " << trial;
  }
}

TEST(WarmStart, MismatchedOrSingularBasisFallsBack) {
  StandardFormLp lp;
  lp.add_column(-1.0, 0.0, 4.0);
  lp.add_column(-1.0, 0.0, 4.0);
  lp.add_row({{0, 1.0}, {1, 1.0}}, Sense::less_equal, 5.0);
  lp.add_row({{0, 2.0}, {1, 2.0}}, Sense::less_equal, 12.0);
  Basis wrong{{BasisStatus::basic}, {}};
  const auto a = solve_lp(lp, {}, &wrong);
  EXPECT_FALSE(a.warm_started);
  EXPECT_NEAR(a.objective, -5.0, 1e-9);
  // Both columns basic on two parallel rows: no matching covers the rows
  // with a nonsingular block, so the repair or the fallback must cope.
  Basis singular{{BasisStatus::basic, BasisStatus::basic}, {BasisStatus::at_lower, BasisStatus::at_lower}};
  const auto b = solve_lp(lp, {}, &singular);
  ASSERT_EQ(b.status, Status::optimal);
  EXPECT_NEAR(b.objective, -5.0, 1e-9);
}

TEST(SolutionCache, HitsOnlyIdenticalLps) {
  std::mt19937_64 rng(4);
  auto lp = test::random_bounded_lp(rng, 8, 8);
  SolutionCache cache(2);
  const auto a = cache.solve(lp);
  const auto b = cache.solve(lp);
  EXPECT_EQ(cache.hits(), 1);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.objective, solve_lp(lp).objective);
  lp.cost[0] += 1.0;
  EXPECT_NE(SolutionCache::hash(lp), SolutionCache::hash(test::random_bounded_lp(rng, 8, 8)));
  cache.solve(lp);
  EXPECT_EQ(cache.hits(), 1);
  EXPECT_EQ(cache.size(), 2u);
  cache.solve(test::random_bounded_lp(rng, 8, 8));
  EXPECT_EQ(cache.size(), 2u);
}

TEST(Simplex, TextDumpHasOneLinePerItem) {
  StandardFormLp lp;
  const int x = lp.add_column(1.0, 0.0, 2.0);
  lp.add_row({{x, 1.0}}, Sense::greater_equal, 1.0);
  lp.add_row({{x, 3.0}}, Sense::equal, 1.5);
  std::ostringstream os;
  write_lp_text(os, lp);
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 2 + 1);
  EXPECT_NE(s.find("row r1: 3 x0 = 1.5"), std::string::npos);
}

}  // namespace
}  // namespace mgrh::lp
