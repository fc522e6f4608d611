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

#include "stochmatch/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochmatch/error.hpp"

namespace stochmatch {

int DenseLp::add_row(RowSense sense, double rhs) {
  require(std::isfinite(rhs), "row right-hand side must be finite");
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return num_rows() - 1;
}

int DenseLp::add_column(double objective, SparseVec entries) {
  require(std::isfinite(objective), "objective coefficient must be finite");
  for (const auto& [row, coef] : entries) {
    require(row >= 0 && row < num_rows(), "column references unknown row");
    require(std::isfinite(coef), "column coefficient must be finite");
  }
  objective_.push_back(objective);
  columns_.push_back(std::move(entries));
  return num_cols() - 1;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration limit";
  }
  return "unknown";
}

RevisedSimplex::RevisedSimplex(DenseLp lp, SimplexOptions options)
    : lp_(std::move(lp)), opt_(options), m_(lp_.num_rows()) {
  const auto m = static_cast<std::size_t>(m_);
  sign_.assign(m, 1.0);
  b_.assign(m, 0.0);
  basis_.assign(m, -1);
  binv_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    binv_[i * m + i] = 1.0;
    const double rhs = lp_.rhs(static_cast<int>(i));
    if (rhs < 0.0) sign_[i] = -1.0;
    b_[i] = std::abs(rhs);
  }
  for (int i = 0; i < m_; ++i) {
    RowSense sense = lp_.sense(i);
    if (sign_[static_cast<std::size_t>(i)] < 0.0) {
      if (sense == RowSense::kLessEqual) {
        sense = RowSense::kGreaterEqual;
      } else if (sense == RowSense::kGreaterEqual) {
        sense = RowSense::kLessEqual;
      }
    }
    if (sense == RowSense::kLessEqual) {
      cols_.push_back({Kind::kSlack, i, {{i, 1.0}}});
      basis_[static_cast<std::size_t>(i)] = static_cast<int>(cols_.size()) - 1;
      continue;
    }
    if (sense == RowSense::kGreaterEqual) {
      cols_.push_back({Kind::kSlack, i, {{i, -1.0}}});
    }
    cols_.push_back({Kind::kArtificial, i, {{i, 1.0}}});
    basis_[static_cast<std::size_t>(i)] = static_cast<int>(cols_.size()) - 1;
  }
  position_.assign(cols_.size(), -1);
  for (int i = 0; i < m_; ++i) position_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = i;
  xb_ = b_;
  for (int j = 0; j < lp_.num_cols(); ++j) {
    SparseVec entries = lp_.column(j);
    for (auto& [row, coef] : entries) coef *= sign_[static_cast<std::size_t>(row)];
    cols_.push_back({Kind::kStructural, j, std::move(entries)});
    position_.push_back(-1);
  }
}

int RevisedSimplex::add_column(double objective, SparseVec entries) {
  SparseVec copy = entries;
  const int j = lp_.add_column(objective, std::move(entries));
  for (auto& [row, coef] : copy) coef *= sign_[static_cast<std::size_t>(row)];
  cols_.push_back({Kind::kStructural, j, std::move(copy)});
  position_.push_back(-1);
  return j;
}

double RevisedSimplex::cost(int col, int phase) const {
  const Column& c = cols_[static_cast<std::size_t>(col)];
  if (phase == 1) return c.kind == Kind::kArtificial ? -1.0 : 0.0;
  return c.kind == Kind::kStructural ? lp_.objective(c.source) : 0.0;
}

bool RevisedSimplex::eligible(int col, int phase) const {
  if (position_[static_cast<std::size_t>(col)] >= 0) return false;
  return phase == 1 ||
         cols_[static_cast<std::size_t>(col)].kind != Kind::kArtificial;
}

std::vector<double> RevisedSimplex::ftran(const SparseVec& a) const {
  const auto m = static_cast<std::size_t>(m_);
  std::vector<double> out(m, 0.0);
  for (const auto& [row, coef] : a) {
    const auto r = static_cast<std::size_t>(row);
    for (std::size_t i = 0; i < m; ++i) out[i] += binv_[i * m + r] * coef;
  }
  return out;
}

void RevisedSimplex::refactor() {
  const auto m = static_cast<std::size_t>(m_);
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> a(m * m, 0.0), inv(m * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (const auto& [row, coef] : cols_[static_cast<std::size_t>(basis_[k])].entries) {
      a[static_cast<std::size_t>(row) * m + k] = coef;
    }
    inv[k * m + k] = 1.0;
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
    }
    if (std::abs(a[piv * m + c]) < 1e-13) {
      fail(ErrorCode::kInternal, "simplex basis became singular");
    }
    if (piv != c) {
      for (std::size_t k = 0; k < m; ++k) {
        std::swap(a[piv * m + k], a[c * m + k]);
        std::swap(inv[piv * m + k], inv[c * m + k]);
      }
    }
    const double d = a[c * m + c];
    for (std::size_t k = 0; k < m; ++k) {
      a[c * m + k] /= d;
      inv[c * m + k] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r * m + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        a[r * m + k] -= f * a[c * m + k];
        inv[r * m + k] -= f * inv[c * m + k];
      }
    }
  }
  binv_ = std::move(inv);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += binv_[i * m + k] * b_[k];
    xb_[i] = std::abs(s) < 1e-13 ? 0.0 : s;
  }
  since_refactor_ = 0;
}

void RevisedSimplex::pivot(int row, int col, const std::vector<double>& alpha) {
  const auto m = static_cast<std::size_t>(m_);
  const auto r = static_cast<std::size_t>(row);
  const double ar = alpha[r];
  const double theta = xb_[r] / ar;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == r) continue;
    xb_[i] -= theta * alpha[i];
    if (xb_[i] < 0.0 && xb_[i] > -1e-11) xb_[i] = 0.0;
  }
  xb_[r] = theta;
  double* pr = &binv_[r * m];
  for (std::size_t k = 0; k < m; ++k) pr[k] /= ar;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    double* pi = &binv_[i * m];
    const double f = alpha[i];
    for (std::size_t k = 0; k < m; ++k) pi[k] -= f * pr[k];
  }
  position_[static_cast<std::size_t>(basis_[r])] = -1;
  basis_[r] = col;
  position_[static_cast<std::size_t>(col)] = row;
  ++since_refactor_;
  ++iterations_;
}

bool RevisedSimplex::run_phase(int phase) {
  const auto m = static_cast<std::size_t>(m_);
  bool bland = false;
  int degenerate = 0;
  std::vector<double> y(m);
  for (;;) {
    if (iterations_ >= opt_.max_iterations) return false;
    if (since_refactor_ >= opt_.refactor_every) refactor();

    for (std::size_t k = 0; k < m; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        s += cost(basis_[i], phase) * binv_[i * m + k];
      }
      y[k] = s;
    }

    int enter = -1;
    double best = opt_.optimality_tol;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (!eligible(j, phase)) continue;
      double d = cost(j, phase);
      for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
        d -= y[static_cast<std::size_t>(row)] * coef;
      }
      if (d > best) {
        enter = j;
        best = d;
        if (bland) break;
      }
    }
    if (enter < 0) return true;

    const std::vector<double> alpha =
        ftran(cols_[static_cast<std::size_t>(enter)].entries);
    int leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const bool artificial =
          cols_[static_cast<std::size_t>(basis_[i])].kind == Kind::kArtificial;
      double ratio;
      if (alpha[i] > opt_.pivot_tol) {
        ratio = std::max(0.0, xb_[i]) / alpha[i];
      } else if (phase == 2 && artificial && alpha[i] < -opt_.pivot_tol) {
        ratio = 0.0;  // a zero artificial must not grow
      } else {
        continue;
      }
      bool take = false;
      if (leave < 0 || ratio < theta - 1e-12) {
        take = true;
      } else if (ratio <= theta + 1e-12) {
        const auto l = static_cast<std::size_t>(leave);
        take = bland ? basis_[i] < basis_[l]
                     : std::abs(alpha[i]) > std::abs(alpha[l]);
      }
      if (take) {
        leave = static_cast<int>(i);
        theta = ratio;
      }
    }
    if (leave < 0) {
      if (phase == 1) fail(ErrorCode::kInternal, "phase one unbounded");
      return false;
    }
    if (theta <= 1e-12) {
      if (++degenerate > opt_.degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    pivot(leave, enter, alpha);
  }
}

void RevisedSimplex::drive_out_artificials() {
  const auto m = static_cast<std::size_t>(m_);
  for (std::size_t r = 0; r < m; ++r) {
    if (cols_[static_cast<std::size_t>(basis_[r])].kind != Kind::kArtificial) continue;
    int best = -1;
    double best_abs = 1e-7;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (position_[static_cast<std::size_t>(j)] >= 0 ||
          cols_[static_cast<std::size_t>(j)].kind == Kind::kArtificial) {
        continue;
      }
      double a = 0.0;
      for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)].entries) {
        a += binv_[r * m + static_cast<std::size_t>(row)] * coef;
      }
      if (std::abs(a) > best_abs) {
        best = j;
        best_abs = std::abs(a);
      }
    }
    if (best >= 0) {
      xb_[r] = 0.0;
      pivot(static_cast<int>(r), best, ftran(cols_[static_cast<std::size_t>(best)].entries));
    }
  }
  refactor();
}

LpSolution RevisedSimplex::solve() {
  if (infeasible_) return extract(LpStatus::kInfeasible);
  if (!phase1_done_) {
    if (!run_phase(1)) return extract(LpStatus::kIterationLimit);
    refactor();
    double infeas = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < b_.size(); ++i) scale = std::max(scale, b_[i]);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (cols_[static_cast<std::size_t>(basis_[i])].kind == Kind::kArtificial) {
        infeas += std::max(0.0, xb_[i]);
      }
    }
    if (infeas > opt_.feasibility_tol * scale) {
      infeasible_ = true;
      return extract(LpStatus::kInfeasible);
    }
    drive_out_artificials();
    phase1_done_ = true;
  }
  if (!run_phase(2)) {
    const bool capped = iterations_ >= opt_.max_iterations;
    return extract(capped ? LpStatus::kIterationLimit : LpStatus::kUnbounded);
  }
  refactor();
  return extract(LpStatus::kOptimal);
}

LpSolution RevisedSimplex::extract(LpStatus status) const {
  const auto m = static_cast<std::size_t>(m_);
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.primal.assign(static_cast<std::size_t>(lp_.num_cols()), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Column& c = cols_[static_cast<std::size_t>(basis_[i])];
    if (c.kind == Kind::kStructural) {
      sol.primal[static_cast<std::size_t>(c.source)] = std::max(0.0, xb_[i]);
    }
  }
  for (int j = 0; j < lp_.num_cols(); ++j) {
    sol.objective += lp_.objective(j) * sol.primal[static_cast<std::size_t>(j)];
  }
  sol.duals.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += cost(basis_[i], 2) * binv_[i * m + k];
    sol.duals[k] = s * sign_[k];
    sol.dual_objective += sol.duals[k] * lp_.rhs(static_cast<int>(k));
  }
  return sol;
}

LpSolution solve_dense(const DenseLp& lp, const SimplexOptions& options) {
  RevisedSimplex solver(lp, options);
  return solver.solve();
}

}  // namespace stochmatch
