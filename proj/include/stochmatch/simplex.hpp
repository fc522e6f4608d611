// Copyright 2026 The stochmatch Authors
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

#ifndef STOCHMATCH_SIMPLEX_HPP_
#define STOCHMATCH_SIMPLEX_HPP_

#include <string>
#include <utility>
#include <vector>

namespace stochmatch {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

using SparseVec = std::vector<std::pair<int, double>>;

// maximize c^T x subject to rows, x >= 0.
class DenseLp {
 public:
  int add_row(RowSense sense, double rhs);
  int add_column(double objective, SparseVec entries);

  int num_rows() const { return static_cast<int>(senses_.size()); }
  int num_cols() const { return static_cast<int>(objective_.size()); }
  RowSense sense(int i) const { return senses_[static_cast<std::size_t>(i)]; }
  double rhs(int i) const { return rhs_[static_cast<std::size_t>(i)]; }
  double objective(int j) const { return objective_[static_cast<std::size_t>(j)]; }
  const SparseVec& column(int j) const { return columns_[static_cast<std::size_t>(j)]; }

 private:
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<double> objective_;
  std::vector<SparseVec> columns_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> primal;
  std::vector<double> duals;  // one per row, signed for the original rows
  double objective = 0.0;
  double dual_objective = 0.0;
  long iterations = 0;
};

struct SimplexOptions {
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  int refactor_every = 64;
  int degenerate_limit = 50;
  long max_iterations = 200000;
};

// Two-phase revised simplex with an explicit dense basis inverse. Dantzig
// pricing, switching to Bland's rule while degenerate pivots stall.
// Columns may be appended between solves; the basis is kept.
class RevisedSimplex {
 public:
  explicit RevisedSimplex(DenseLp lp, SimplexOptions options = {});

  int add_column(double objective, SparseVec entries);
  LpSolution solve();
  const DenseLp& lp() const { return lp_; }

 private:
  enum class Kind { kStructural, kSlack, kArtificial };
  struct Column {
    Kind kind;
    int source;  // structural index, or row for slack/artificial
    SparseVec entries;
  };

  bool run_phase(int phase);
  void drive_out_artificials();
  void refactor();
  void pivot(int row, int col, const std::vector<double>& alpha);
  std::vector<double> ftran(const SparseVec& a) const;
  double cost(int col, int phase) const;
  bool eligible(int col, int phase) const;
  LpSolution extract(LpStatus status) const;

  DenseLp lp_;
  SimplexOptions opt_;
  int m_ = 0;
  std::vector<double> sign_;
  std::vector<double> b_;
  std::vector<Column> cols_;
  std::vector<int> basis_;      // column per row position
  std::vector<int> position_;   // row position per column, or -1
  std::vector<double> binv_;    // m x m, row-major
  std::vector<double> xb_;
  bool phase1_done_ = false;
  bool infeasible_ = false;
  int since_refactor_ = 0;
  long iterations_ = 0;
};

LpSolution solve_dense(const DenseLp& lp, const SimplexOptions& options = {});

}  // namespace stochmatch

#endif  // STOCHMATCH_SIMPLEX_HPP_
