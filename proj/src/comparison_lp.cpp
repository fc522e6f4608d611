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

#include <algorithm>
#include <cmath>

#include "stochmatch/config_lp.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/star_opt.hpp"

namespace stochmatch {

namespace {

constexpr int kMaxSubsetDegree = 14;
constexpr double kRowViolationTol = 1e-9;
constexpr int kRowsPerRound = 8;

double solved_value(const DenseLp& lp) {
  const LpSolution sol = solve_dense(lp);
  if (sol.status != LpStatus::kOptimal) {
    fail(ErrorCode::kInternal, "comparison LP ended " + to_string(sol.status));
  }
  return sol.objective;
}

// Positive-probability edges of each online vertex, as LP columns.
struct EdgeColumns {
  std::vector<EdgeId> edges;                 // column -> edge
  std::vector<std::vector<int>> by_vertex;   // v -> columns
};

EdgeColumns edge_columns(const StochasticGraph& g) {
  EdgeColumns ec;
  ec.by_vertex.resize(static_cast<std::size_t>(g.num_online()));
  for (int v = 0; v < g.num_online(); ++v) {
    for (EdgeId e : g.online(v).edges) {
      if (g.edge(e).p <= 0.0) continue;
      ec.by_vertex[static_cast<std::size_t>(v)].push_back(
          static_cast<int>(ec.edges.size()));
      ec.edges.push_back(e);
    }
  }
  return ec;
}

// Rows sum_{e in S} coef_e x_e <= rhs(S) over every subset S of each vertex's
// columns, added lazily: each round adds the most violated subsets until
// the solution satisfies all of them.
template <class Coef, class Rhs>
double solve_with_subset_rows(const StochasticGraph& g, const EdgeColumns& ec,
                              Coef coef, Rhs rhs) {
  struct Row {
    SparseVec entries;
    double rhs;
  };
  std::vector<Row> rows;
  std::vector<std::vector<double>> rhs_table(ec.by_vertex.size());
  for (std::size_t v = 0; v < ec.by_vertex.size(); ++v) {
    const auto& cols = ec.by_vertex[v];
    if (static_cast<int>(cols.size()) > kMaxSubsetDegree) {
      fail(ErrorCode::kTooLarge, "subset-enumerated LP supports degree <= 14");
    }
    const std::size_t subsets = std::size_t{1} << cols.size();
    rhs_table[v].resize(subsets);
    for (std::size_t s = 0; s < subsets; ++s) {
      rhs_table[v][s] = rhs(static_cast<int>(v), cols, s);
    }
  }
  auto make_row = [&](std::size_t v, std::size_t s) {
    Row row;
    const auto& cols = ec.by_vertex[v];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (s & (std::size_t{1} << k)) {
        row.entries.emplace_back(cols[k], coef(ec.edges[static_cast<std::size_t>(cols[k])]));
      }
    }
    row.rhs = rhs_table[v][s];
    return row;
  };
  for (std::size_t v = 0; v < ec.by_vertex.size(); ++v) {
    const std::size_t n = ec.by_vertex[v].size();
    if (n == 0) continue;
    for (std::size_t k = 0; k < n; ++k) rows.push_back(make_row(v, std::size_t{1} << k));
    if (n > 1) rows.push_back(make_row(v, (std::size_t{1} << n) - 1));
  }

  for (;;) {
    DenseLp lp;
    for (int u = 0; u < g.num_offline(); ++u) lp.add_row(RowSense::kLessEqual, 1.0);
    const int base = lp.num_rows();
    for (const Row& row : rows) lp.add_row(RowSense::kLessEqual, row.rhs);
    std::vector<SparseVec> cols(ec.edges.size());
    for (std::size_t j = 0; j < ec.edges.size(); ++j) {
      const Edge& edge = g.edge(ec.edges[j]);
      cols[j].emplace_back(edge.offline, edge.p);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [col, c] : rows[r].entries) {
        cols[static_cast<std::size_t>(col)].emplace_back(base + static_cast<int>(r), c);
      }
    }
    for (std::size_t j = 0; j < ec.edges.size(); ++j) {
      const Edge& edge = g.edge(ec.edges[j]);
      lp.add_column(edge.w * edge.p, std::move(cols[j]));
    }
    const LpSolution sol = solve_dense(lp);
    if (sol.status != LpStatus::kOptimal) {
      fail(ErrorCode::kInternal, "subset LP ended " + to_string(sol.status));
    }

    int added = 0;
    for (std::size_t v = 0; v < ec.by_vertex.size(); ++v) {
      const auto& vc = ec.by_vertex[v];
      std::vector<std::pair<double, std::size_t>> violated;
      for (std::size_t s = 1; s < rhs_table[v].size(); ++s) {
        double lhs = 0.0;
        for (std::size_t k = 0; k < vc.size(); ++k) {
          if (s & (std::size_t{1} << k)) {
            lhs += coef(ec.edges[static_cast<std::size_t>(vc[k])]) *
                   sol.primal[static_cast<std::size_t>(vc[k])];
          }
        }
        const double excess = lhs - rhs_table[v][s];
        if (excess > kRowViolationTol * std::max(1.0, rhs_table[v][s])) {
          violated.emplace_back(excess, s);
        }
      }
      std::sort(violated.begin(), violated.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t k = 0; k < violated.size() && k < kRowsPerRound; ++k) {
        rows.push_back(make_row(v, violated[k].second));
        ++added;
      }
    }
    if (added == 0) return sol.objective;
  }
}

void require_patience(const StochasticGraph& g, bool unit) {
  for (int v = 0; v < g.num_online(); ++v) {
    const auto* pat = std::get_if<Patience>(&g.online(v).constraint);
    if (pat == nullptr) {
      fail(ErrorCode::kInapplicable, "LP-std requires patience constraints");
    }
    if (unit && pat->limit != 1) {
      fail(ErrorCode::kInapplicable, "LP-std-unit requires unit patience");
    }
  }
}

}  // namespace

double solve_lp_std(const StochasticGraph& g) {
  require_patience(g, false);
  const EdgeColumns ec = edge_columns(g);
  const int nu = g.num_offline(), nv = g.num_online();
  DenseLp lp;
  for (int u = 0; u < nu; ++u) lp.add_row(RowSense::kLessEqual, 1.0);
  for (int v = 0; v < nv; ++v) lp.add_row(RowSense::kLessEqual, 1.0);
  for (int v = 0; v < nv; ++v) {
    const int limit = std::get<Patience>(g.online(v).constraint).limit;
    lp.add_row(RowSense::kLessEqual, std::min(limit, g.degree(v)));
  }
  for (std::size_t j = 0; j < ec.edges.size(); ++j) {
    const Edge& e = g.edge(ec.edges[j]);
    const int cap = lp.add_row(RowSense::kLessEqual, 1.0);
    lp.add_column(e.w * e.p, {{e.offline, e.p},
                              {nu + e.online, e.p},
                              {nu + nv + e.online, 1.0},
                              {cap, 1.0}});
  }
  return solved_value(lp);
}

double solve_lp_std_unit(const StochasticGraph& g) {
  require_patience(g, true);
  const EdgeColumns ec = edge_columns(g);
  const int nu = g.num_offline();
  DenseLp lp;
  for (int u = 0; u < nu; ++u) lp.add_row(RowSense::kLessEqual, 1.0);
  for (int v = 0; v < g.num_online(); ++v) lp.add_row(RowSense::kLessEqual, 1.0);
  for (EdgeId id : ec.edges) {
    const Edge& e = g.edge(id);
    lp.add_column(e.w * e.p, {{e.offline, e.p}, {nu + e.online, 1.0}});
  }
  return solved_value(lp);
}

double solve_lp_dp(const StochasticGraph& g) {
  if (g.num_offline() > kMaxSubsetDegree) {
    fail(ErrorCode::kTooLarge, "LP-DP supports at most 14 offline vertices");
  }
  if (!g.is_vertex_weighted()) {
    fail(ErrorCode::kInapplicable, "LP-DP requires vertex weights");
  }
  const EdgeColumns ec = edge_columns(g);
  auto coef = [&](EdgeId e) { return g.edge(e).w * g.edge(e).p; };
  auto rhs = [&](int v, const std::vector<int>& cols, std::size_t s) {
    std::vector<std::uint8_t> avail(static_cast<std::size_t>(g.num_offline()), 0);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (s & (std::size_t{1} << k)) {
        avail[static_cast<std::size_t>(
            g.edge(ec.edges[static_cast<std::size_t>(cols[k])]).offline)] = 1;
      }
    }
    if (s == 0) return 0.0;
    return dp_opt(g, v, avail).value;
  };
  return solve_with_subset_rows(g, ec, coef, rhs);
}

double solve_lp_qc(const StochasticGraph& g) {
  for (int v = 0; v < g.num_online(); ++v) {
    if (!is_unconstrained(g, v)) {
      fail(ErrorCode::kInapplicable, "LP-QC requires unbounded patience");
    }
  }
  const EdgeColumns ec = edge_columns(g);
  auto coef = [&](EdgeId e) { return g.edge(e).p; };
  auto rhs = [&](int, const std::vector<int>& cols, std::size_t s) {
    double none = 1.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (s & (std::size_t{1} << k)) {
        none *= 1.0 - g.edge(ec.edges[static_cast<std::size_t>(cols[k])]).p;
      }
    }
    return 1.0 - none;
  };
  return solve_with_subset_rows(g, ec, coef, rhs);
}

}  // namespace stochmatch
