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

// Bounded revised primal simplex.
//
// Every row i gets a logical variable s_i = a_i . x bounded by the row's
// sense/rhs, so the working system is [A | -I] (x, s) = 0 and the slack
// basis -I is always available as a starting point. Phase 1 minimizes the
// sum of basic bound violations, phase 2 the true cost. The basis is held as
// a sparse LU factorization plus a product-form eta file that is rebuilt
// every `refactor_interval` pivots.
//
// Pricing is Dantzig (largest reduced cost, lowest index on ties) with a
// Harris two-pass ratio test. After `stall_threshold` consecutive
// degenerate pivots the solver switches to Bland's rule until it makes
// progress again.
//
// A starting basis may be supplied (for instance the optimal basis of a
// closely related LP). It is first reduced to a structurally nonsingular
// set by bipartite matching of basic columns to rows; rows left unmatched
// get their logical. If the result still fails to factorize the solver
// starts from the slack basis.

#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mgrh::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { less_equal, equal, greater_equal };

struct Term {
  int column = 0;
  double value = 0.0;
  bool operator==(const Term&) const = default;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::less_equal;
  double rhs = 0.0;
  bool operator==(const Constraint&) const = default;
};

// minimize objective_offset + cost . x  s.t.  rows, lower <= x <= upper
struct StandardFormLp {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Constraint> rows;
  double objective_offset = 0.0;

  int add_column(double c, double lo, double hi) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    return static_cast<int>(cost.size()) - 1;
  }

  int add_row(std::vector<Term> terms, Sense sense, double rhs) {
    rows.push_back(Constraint{std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
  }

  [[nodiscard]] int num_columns() const { return static_cast<int>(cost.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows.size()); }
  bool operator==(const StandardFormLp&) const = default;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit, time_limit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    case Status::time_limit: return "time_limit";
  }
  return "unknown";
}

enum class BasisStatus : std::uint8_t { basic, at_lower, at_upper };

// Status of every column and of every row's logical variable.
struct Basis {
  std::vector<BasisStatus> columns;
  std::vector<BasisStatus> rows;
};

struct LpSolution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  // Dual value per row (d objective / d rhs at the optimum).
  std::vector<double> row_duals;
  std::int64_t iterations = 0;
  Basis basis;
  bool warm_started = false;  // the supplied basis was used
  // Set by solve_binary: best proven bound on the optimum.
  double best_bound = 0.0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int stall_threshold = 60;
  std::int64_t max_iterations = 50'000'000;
};

// Writes one item per line: the objective, then one constraint per row,
// then one bound per column.
inline void write_lp_text(std::ostream& os, const StandardFormLp& lp,
                          const std::vector<std::string>* column_names = nullptr,
                          const std::vector<std::string>* row_names = nullptr) {
  auto col = [&](int j) {
    return column_names ? (*column_names)[static_cast<size_t>(j)]
                        : "x" + std::to_string(j);
  };
  os.precision(17);
  os << "minimize " << lp.objective_offset;
  for (int j = 0; j < lp.num_columns(); ++j) {
    if (lp.cost[static_cast<size_t>(j)] != 0.0) os << " + " << lp.cost[static_cast<size_t>(j)] << ' ' << col(j);
  }
  os << '\n';
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows[static_cast<size_t>(i)];
    os << "row " << (row_names ? (*row_names)[static_cast<size_t>(i)] : "r" + std::to_string(i)) << ':';
    for (const auto& t : r.terms) os << ' ' << t.value << ' ' << col(t.column);
    os << (r.sense == Sense::less_equal ? " <= " : r.sense == Sense::equal ? " = " : " >= ")
       << r.rhs << '\n';
  }
  for (int j = 0; j < lp.num_columns(); ++j) {
    os << "bound " << col(j) << ' ' << lp.lower[static_cast<size_t>(j)] << ' '
       << lp.upper[static_cast<size_t>(j)] << '\n';
  }
}

namespace detail {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// LU of the last refactored basis plus the eta file of later column swaps.
class BasisFactor {
 public:
  bool factorize(const SparseMatrix& basis) {
    etas_.clear();
    dim_ = static_cast<int>(basis.rows());
    if (dim_ == 0) return true;
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    return lu_.info() == Eigen::Success;
  }

  void ftran(Eigen::VectorXd& v) const {
    if (dim_ == 0) return;
    v = lu_.solve(v);
    for (const auto& e : etas_) {
      const double t = v[e.pivot] / e.pivot_value;
      if (t != 0.0) {
        for (size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * t;
      }
      v[e.pivot] = t;
    }
  }

  void btran(Eigen::VectorXd& v) const {
    if (dim_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->pivot];
      for (size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->pivot] = s / it->pivot_value;
    }
    Eigen::VectorXd rhs = v;
    v = lu_.transpose().solve(rhs);
  }

  // `column` is the FTRAN'd entering column, `pivot` its basis position.
  void push_eta(const Eigen::VectorXd& column, int pivot) {
    Eta e;
    e.pivot = pivot;
    e.pivot_value = column[pivot];
    for (int i = 0; i < column.size(); ++i) {
      if (i != pivot && column[i] != 0.0) {
        e.index.push_back(i);
        e.value.push_back(column[i]);
      }
    }
    etas_.push_back(std::move(e));
  }

  [[nodiscard]] size_t eta_count() const { return etas_.size(); }

 private:
  struct Eta {
    int pivot = 0;
    double pivot_value = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  int dim_ = 0;
};

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardFormLp& lp, const SimplexOptions& opt) : opt_(opt) {
    n_ = lp.num_columns();
    m_ = lp.num_rows();
    total_ = n_ + m_;
    build_columns(lp);
    lo_.resize(static_cast<size_t>(total_));
    hi_.resize(static_cast<size_t>(total_));
    cost_.assign(static_cast<size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<size_t>(j)] = lp.lower[static_cast<size_t>(j)];
      hi_[static_cast<size_t>(j)] = lp.upper[static_cast<size_t>(j)];
      cost_[static_cast<size_t>(j)] = lp.cost[static_cast<size_t>(j)];
    }
    for (int i = 0; i < m_; ++i) {
      const auto& r = lp.rows[static_cast<size_t>(i)];
      const auto k = static_cast<size_t>(n_ + i);
      lo_[k] = r.sense == Sense::less_equal ? -kInfinity : r.rhs;
      hi_[k] = r.sense == Sense::greater_equal ? kInfinity : r.rhs;
    }
    offset_ = lp.objective_offset;
  }

  LpSolution solve(const Basis* start = nullptr) {
    LpSolution out;
    for (int j = 0; j < total_; ++j) {
      if (lo_[static_cast<size_t>(j)] > hi_[static_cast<size_t>(j)]) {
        out.status = Status::infeasible;
        return out;
      }
    }
    if (start != nullptr && start->columns.size() == static_cast<size_t>(n_) &&
        start->rows.size() == static_cast<size_t>(m_) && install_basis(*start)) {
      out.warm_started = true;
    } else {
      slack_basis();
      refactor_or_reset();
    }

    bool fresh = true;
    std::int64_t iter = 0;
    int stall = 0;
    bool bland = false;
    Eigen::VectorXd cb(m_), y(m_), alpha(m_);

    for (;;) {
      if (iter >= opt_.max_iterations) {
        out.status = Status::iteration_limit;
        break;
      }
      if (static_cast<int>(factor_.eta_count()) >= opt_.refactor_interval) {
        refactor_or_reset();
        fresh = true;
      }

      bool phase1 = false;
      for (int i = 0; i < m_; ++i) {
        const int b = basis_[static_cast<size_t>(i)];
        const double v = x_[static_cast<size_t>(b)];
        if (v < lo_[static_cast<size_t>(b)] - opt_.feasibility_tol ||
            v > hi_[static_cast<size_t>(b)] + opt_.feasibility_tol) {
          phase1 = true;
          break;
        }
      }
      for (int i = 0; i < m_; ++i) {
        const int b = basis_[static_cast<size_t>(i)];
        if (phase1) {
          const double v = x_[static_cast<size_t>(b)];
          cb[i] = v < lo_[static_cast<size_t>(b)] - opt_.feasibility_tol   ? -1.0
                  : v > hi_[static_cast<size_t>(b)] + opt_.feasibility_tol ? 1.0
                                                                           : 0.0;
        } else {
          cb[i] = cost_[static_cast<size_t>(b)];
        }
      }
      y = cb;
      factor_.btran(y);

      const auto [q, dq] = price(y, phase1, bland);
      if (q < 0) {
        if (!fresh) {
          refactor_or_reset();
          fresh = true;
          continue;
        }
        if (phase1) {
          out.status = Status::infeasible;
        } else {
          out.status = Status::optimal;
          out.row_duals.assign(y.data(), y.data() + m_);
        }
        break;
      }

      column_into(q, alpha);
      factor_.ftran(alpha);
      const double dir = dq < 0.0 ? 1.0 : -1.0;

      const auto [r, theta, leave_value] = ratio_test(alpha, dir, phase1, bland);
      const double range = hi_[static_cast<size_t>(q)] - lo_[static_cast<size_t>(q)];

      if (r < 0 && !(range < kInfinity)) {
        if (phase1) {
          // Cannot happen with exact arithmetic; start over from a clean factorization.
          if (!fresh) {
            refactor_or_reset();
            fresh = true;
            continue;
          }
          out.status = Status::infeasible;
        } else {
          out.status = Status::unbounded;
        }
        break;
      }

      ++iter;
      double step;
      if (r < 0 || range <= theta) {
        step = range;
        for (int i = 0; i < m_; ++i) x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] -= dir * step * alpha[i];
        x_[static_cast<size_t>(q)] = dir > 0 ? hi_[static_cast<size_t>(q)] : lo_[static_cast<size_t>(q)];
      } else {
        step = theta;
        for (int i = 0; i < m_; ++i) x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] -= dir * step * alpha[i];
        x_[static_cast<size_t>(q)] += dir * step;
        const int leaving = basis_[static_cast<size_t>(r)];
        x_[static_cast<size_t>(leaving)] = leave_value;
        position_[static_cast<size_t>(leaving)] = -1;
        basis_[static_cast<size_t>(r)] = q;
        position_[static_cast<size_t>(q)] = r;
        factor_.push_eta(alpha, r);
        fresh = false;
      }

      if (step * std::abs(dq) <= 1e-12) {
        if (++stall >= opt_.stall_threshold) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
    }

    out.iterations = iter;
    out.basis = current_basis();
    out.x.assign(x_.begin(), x_.begin() + n_);
    double obj = offset_;
    for (int j = 0; j < n_; ++j) obj += cost_[static_cast<size_t>(j)] * x_[static_cast<size_t>(j)];
    out.objective = obj;
    return out;
  }

 private:
  void build_columns(const StandardFormLp& lp) {
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<size_t>(n_));
    for (int i = 0; i < m_; ++i) {
      for (const auto& t : lp.rows[static_cast<size_t>(i)].terms) {
        cols[static_cast<size_t>(t.column)].emplace_back(i, t.value);
      }
    }
    col_start_.assign(1, 0);
    for (auto& c : cols) {
      std::sort(c.begin(), c.end());
      for (size_t k = 0; k < c.size();) {
        int row = c[k].first;
        double v = 0.0;
        while (k < c.size() && c[k].first == row) v += c[k++].second;
        if (v != 0.0) {
          row_index_.push_back(row);
          value_.push_back(v);
        }
      }
      col_start_.push_back(static_cast<int>(row_index_.size()));
    }
  }

  void slack_basis() {
    x_.assign(static_cast<size_t>(total_), 0.0);
    position_.assign(static_cast<size_t>(total_), -1);
    basis_.resize(static_cast<size_t>(m_));
    for (int j = 0; j < n_; ++j) x_[static_cast<size_t>(j)] = resting_value(j, x_[static_cast<size_t>(j)]);
    for (int i = 0; i < m_; ++i) {
      basis_[static_cast<size_t>(i)] = n_ + i;
      position_[static_cast<size_t>(n_ + i)] = i;
    }
  }

  // Basic candidates from `b` matched to rows (augmenting paths); unmatched
  // rows take their logical. Returns false if the basis does not factorize.
  bool install_basis(const Basis& b) {
    x_.assign(static_cast<size_t>(total_), 0.0);
    position_.assign(static_cast<size_t>(total_), -1);
    basis_.assign(static_cast<size_t>(m_), -1);
    std::vector<int> row_owner(static_cast<size_t>(m_), -1);
    // Logicals first claim their own row.
    for (int i = 0; i < m_; ++i) {
      if (b.rows[static_cast<size_t>(i)] == BasisStatus::basic) row_owner[static_cast<size_t>(i)] = n_ + i;
    }
    std::vector<int> visited(static_cast<size_t>(m_), -1);
    std::vector<int> stack_col, stack_pos;
    auto augment = [&](int j0, int stamp) {
      // Iterative DFS over (column, next nonzero) frames.
      stack_col.assign(1, j0);
      stack_pos.assign(1, col_start_[static_cast<size_t>(j0)]);
      std::vector<int> path_rows;
      while (!stack_col.empty()) {
        const int j = stack_col.back();
        int& k = stack_pos.back();
        if (k == col_start_[static_cast<size_t>(j) + 1]) {
          stack_col.pop_back();
          stack_pos.pop_back();
          if (!path_rows.empty()) path_rows.pop_back();
          continue;
        }
        const int r = row_index_[static_cast<size_t>(k++)];
        if (visited[static_cast<size_t>(r)] == stamp) continue;
        visited[static_cast<size_t>(r)] = stamp;
        const int owner = row_owner[static_cast<size_t>(r)];
        if (owner < 0) {
          // Flip the path: every column on the stack takes the next row.
          path_rows.push_back(r);
          for (size_t d = 0; d < stack_col.size(); ++d) {
            row_owner[static_cast<size_t>(path_rows[d])] = stack_col[d];
          }
          return true;
        }
        if (owner >= n_) continue;  // logicals cannot move
        path_rows.push_back(r);
        stack_col.push_back(owner);
        stack_pos.push_back(col_start_[static_cast<size_t>(owner)]);
      }
      return false;
    };
    for (int j = 0; j < n_; ++j) {
      if (b.columns[static_cast<size_t>(j)] != BasisStatus::basic) continue;
      if (lo_[static_cast<size_t>(j)] == hi_[static_cast<size_t>(j)]) continue;
      augment(j, j);
    }
    for (int i = 0; i < m_; ++i) {
      int owner = row_owner[static_cast<size_t>(i)];
      if (owner < 0) owner = n_ + i;
      basis_[static_cast<size_t>(i)] = owner;
      position_[static_cast<size_t>(owner)] = i;
    }
    for (int j = 0; j < total_; ++j) {
      if (position_[static_cast<size_t>(j)] >= 0) continue;
      const BasisStatus st = j < n_ ? b.columns[static_cast<size_t>(j)] : b.rows[static_cast<size_t>(j - n_)];
      const double l = lo_[static_cast<size_t>(j)], h = hi_[static_cast<size_t>(j)];
      double v = resting_value(j, 0.0);
      if (st == BasisStatus::at_upper && h < kInfinity) v = h;
      if (st == BasisStatus::at_lower && l > -kInfinity) v = l;
      x_[static_cast<size_t>(j)] = v;
    }
    if (!factorize_current()) return false;
    recompute_basics();
    return true;
  }

  [[nodiscard]] Basis current_basis() const {
    Basis b;
    b.columns.resize(static_cast<size_t>(n_));
    b.rows.resize(static_cast<size_t>(m_));
    for (int j = 0; j < total_; ++j) {
      BasisStatus st = BasisStatus::at_lower;
      if (position_[static_cast<size_t>(j)] >= 0) {
        st = BasisStatus::basic;
      } else if (hi_[static_cast<size_t>(j)] < kInfinity &&
                 x_[static_cast<size_t>(j)] == hi_[static_cast<size_t>(j)] &&
                 hi_[static_cast<size_t>(j)] != lo_[static_cast<size_t>(j)]) {
        st = BasisStatus::at_upper;
      }
      (j < n_ ? b.columns[static_cast<size_t>(j)] : b.rows[static_cast<size_t>(j - n_)]) = st;
    }
    return b;
  }

  // Value a nonbasic variable sits at: a finite bound, or `current` clamped
  // to the bounds if free.
  [[nodiscard]] double resting_value(int j, double current) const {
    const double l = lo_[static_cast<size_t>(j)];
    const double h = hi_[static_cast<size_t>(j)];
    if (l > -kInfinity && h < kInfinity) return std::abs(current - l) <= std::abs(current - h) ? l : h;
    if (l > -kInfinity) return l;
    if (h < kInfinity) return h;
    return 0.0;
  }

  void refactor_or_reset() {
    if (!factorize_current()) {
      // Singular basis: fall back to the slack basis and let phase 1 recover.
      for (int i = 0; i < m_; ++i) {
        const int b = basis_[static_cast<size_t>(i)];
        position_[static_cast<size_t>(b)] = -1;
        if (b < n_) x_[static_cast<size_t>(b)] = resting_value(b, x_[static_cast<size_t>(b)]);
      }
      for (int i = 0; i < m_; ++i) {
        basis_[static_cast<size_t>(i)] = n_ + i;
        position_[static_cast<size_t>(n_ + i)] = i;
      }
      if (!factorize_current()) throw std::logic_error("slack basis failed to factorize");
    }
    recompute_basics();
  }

  bool factorize_current() {
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(static_cast<size_t>(m_) * 3);
    for (int p = 0; p < m_; ++p) {
      const int j = basis_[static_cast<size_t>(p)];
      if (j >= n_) {
        trip.emplace_back(j - n_, p, -1.0);
      } else {
        for (int k = col_start_[static_cast<size_t>(j)]; k < col_start_[static_cast<size_t>(j) + 1]; ++k) {
          trip.emplace_back(row_index_[static_cast<size_t>(k)], p, value_[static_cast<size_t>(k)]);
        }
      }
    }
    SparseMatrix b(m_, m_);
    b.setFromTriplets(trip.begin(), trip.end());
    b.makeCompressed();
    return factor_.factorize(b);
  }

  void recompute_basics() {
    if (m_ == 0) return;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < total_; ++j) {
      if (position_[static_cast<size_t>(j)] >= 0) continue;
      const double v = x_[static_cast<size_t>(j)];
      if (v == 0.0) continue;
      if (j >= n_) {
        rhs[j - n_] += v;
      } else {
        for (int k = col_start_[static_cast<size_t>(j)]; k < col_start_[static_cast<size_t>(j) + 1]; ++k) {
          rhs[row_index_[static_cast<size_t>(k)]] -= value_[static_cast<size_t>(k)] * v;
        }
      }
    }
    factor_.ftran(rhs);
    for (int i = 0; i < m_; ++i) x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = rhs[i];
  }

  void column_into(int j, Eigen::VectorXd& out) const {
    out.setZero(m_);
    if (j >= n_) {
      out[j - n_] = -1.0;
      return;
    }
    for (int k = col_start_[static_cast<size_t>(j)]; k < col_start_[static_cast<size_t>(j) + 1]; ++k) {
      out[row_index_[static_cast<size_t>(k)]] = value_[static_cast<size_t>(k)];
    }
  }

  // Returns (entering variable, its reduced cost), or (-1, 0) at optimality.
  std::pair<int, double> price(const Eigen::VectorXd& y, bool phase1, bool bland) const {
    int best = -1;
    double best_score = 0.0;
    double best_d = 0.0;
    const double tol = opt_.optimality_tol;
    for (int j = 0; j < total_; ++j) {
      if (position_[static_cast<size_t>(j)] >= 0) continue;
      const double l = lo_[static_cast<size_t>(j)];
      const double h = hi_[static_cast<size_t>(j)];
      if (l == h) continue;
      double d;
      if (j >= n_) {
        d = y[j - n_];
      } else {
        d = phase1 ? 0.0 : cost_[static_cast<size_t>(j)];
        for (int k = col_start_[static_cast<size_t>(j)]; k < col_start_[static_cast<size_t>(j) + 1]; ++k) {
          d -= y[row_index_[static_cast<size_t>(k)]] * value_[static_cast<size_t>(k)];
        }
      }
      const double v = x_[static_cast<size_t>(j)];
      const bool can_up = v < h;
      const bool can_down = v > l;
      double score = 0.0;
      if (d < -tol && can_up) score = -d;
      else if (d > tol && can_down) score = d;
      if (score <= 0.0) continue;
      if (bland) return {j, d};
      if (score > best_score) {
        best = j;
        best_score = score;
        best_d = d;
      }
    }
    return {best, best_d};
  }

  struct Ratio {
    int row = -1;
    double theta = kInfinity;
    double leave_value = 0.0;
  };

  // Basic i moves by -dir * alpha_i per unit step of the entering variable.
  Ratio ratio_test(const Eigen::VectorXd& alpha, double dir, bool phase1, bool bland) const {
    const double ftol = opt_.feasibility_tol;
    struct Candidate {
      int row;
      double exact;
      double bound;
      double magnitude;
    };
    std::vector<Candidate> cands;
    double theta_max = kInfinity;
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i] * dir;
      if (std::abs(a) < opt_.pivot_tol) continue;
      const int b = basis_[static_cast<size_t>(i)];
      const double v = x_[static_cast<size_t>(b)];
      const double l = lo_[static_cast<size_t>(b)];
      const double h = hi_[static_cast<size_t>(b)];
      double bound;
      if (a > 0.0) {  // decreasing
        if (phase1 && v > h + ftol) bound = h;
        else if (v < l - ftol || !(l > -kInfinity)) continue;
        else bound = l;
        const double exact = (v - bound) / a;
        theta_max = std::min(theta_max, (v - bound + ftol) / a);
        cands.push_back({i, exact, bound, a});
      } else {  // increasing
        if (phase1 && v < l - ftol) bound = l;
        else if (v > h + ftol || !(h < kInfinity)) continue;
        else bound = h;
        const double exact = (bound - v) / -a;
        theta_max = std::min(theta_max, (bound - v + ftol) / -a);
        cands.push_back({i, exact, bound, -a});
      }
    }
    Ratio out;
    if (cands.empty()) return out;
    if (bland) {
      double best = kInfinity;
      for (const auto& c : cands) best = std::min(best, c.exact);
      int best_var = -1;
      for (const auto& c : cands) {
        if (c.exact <= best + 1e-12) {
          const int var = basis_[static_cast<size_t>(c.row)];
          if (best_var < 0 || var < best_var) {
            best_var = var;
            out.row = c.row;
            out.theta = std::max(0.0, c.exact);
            out.leave_value = c.bound;
          }
        }
      }
      return out;
    }
    double best_mag = -1.0;
    for (const auto& c : cands) {
      if (c.exact <= theta_max && c.magnitude > best_mag) {
        best_mag = c.magnitude;
        out.row = c.row;
        out.theta = std::max(0.0, c.exact);
        out.leave_value = c.bound;
      }
    }
    return out;
  }

  SimplexOptions opt_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  double offset_ = 0.0;
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<double> x_;
  std::vector<int> basis_;
  std::vector<int> position_;
  BasisFactor factor_;
};

inline void validate(const StandardFormLp& lp) {
  const auto n = lp.cost.size();
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw std::invalid_argument("solve_lp: cost/lower/upper sizes differ");
  }
  for (size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.cost[j])) throw std::invalid_argument("solve_lp: non-finite cost in column " + std::to_string(j));
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] == kInfinity ||
        lp.upper[j] == -kInfinity) {
      throw std::invalid_argument("solve_lp: invalid bound on column " + std::to_string(j));
    }
  }
  if (!std::isfinite(lp.objective_offset)) throw std::invalid_argument("solve_lp: non-finite objective offset");
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& r = lp.rows[i];
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("solve_lp: non-finite rhs in row " + std::to_string(i));
    for (const auto& t : r.terms) {
      if (t.column < 0 || static_cast<size_t>(t.column) >= n) {
        throw std::invalid_argument("solve_lp: row " + std::to_string(i) + " references column " +
                                    std::to_string(t.column) + " out of range");
      }
      if (!std::isfinite(t.value)) throw std::invalid_argument("solve_lp: non-finite coefficient in row " + std::to_string(i));
    }
  }
}

}  // namespace detail

inline LpSolution solve_lp(const StandardFormLp& lp, const SimplexOptions& options = {},
                           const Basis* start = nullptr) {
  detail::validate(lp);
  detail::RevisedSimplex simplex(lp, options);
  return simplex.solve(start);
}

// Cold-start solutions keyed by the full LP content. A hit returns exactly
// what solve_lp would return, so sharing a cache between runs keeps them
// reproducible. Not thread-safe.
class SolutionCache {
 public:
  explicit SolutionCache(size_t capacity = 16) : capacity_(capacity) {}

  LpSolution solve(const StandardFormLp& lp, const SimplexOptions& options = {}) {
    const std::uint64_t h = hash(lp);
    for (const auto& e : entries_) {
      if (e.hash == h && e.lp == lp) {
        ++hits_;
        return e.solution;
      }
    }
    LpSolution sol = solve_lp(lp, options);
    if (capacity_ > 0) {
      if (entries_.size() == capacity_) entries_.pop_front();
      entries_.push_back({h, lp, sol});
    }
    return sol;
  }

  [[nodiscard]] std::int64_t hits() const { return hits_; }
  [[nodiscard]] size_t size() const { return entries_.size(); }

  static std::uint64_t hash(const StandardFormLp& lp) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffu;
        h *= 1099511628211ull;
      }
    };
    auto mixd = [&mix](double d) { mix(std::bit_cast<std::uint64_t>(d)); };
    for (double c : lp.cost) mixd(c);
    for (double v : lp.lower) mixd(v);
    for (double v : lp.upper) mixd(v);
    for (const auto& r : lp.rows) {
      mix(static_cast<std::uint64_t>(r.sense));
      mixd(r.rhs);
      for (const auto& t : r.terms) {
        mix(static_cast<std::uint64_t>(t.column));
        mixd(t.value);
      }
    }
    mixd(lp.objective_offset);
    return h;
  }

 private:
  struct Entry {
    std::uint64_t hash;
    StandardFormLp lp;
    LpSolution solution;
  };
  size_t capacity_;
  std::deque<Entry> entries_;
  std::int64_t hits_ = 0;
};

}  // namespace mgrh::lp
