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

#include "stochmatch/config_lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stochmatch/error.hpp"
#include "stochmatch/star_opt.hpp"

namespace stochmatch {

namespace {

constexpr double kSupportEps = 1e-12;

// One equality row of the master: a copy of online vertex `vertex` of the
// pricing graph with total mass r.
struct Group {
  int vertex;
  double r;
};

struct MasterResult {
  std::vector<StringDistribution> support;
  std::vector<double> alpha;
  std::vector<double> beta;
  double objective = 0.0;
  int columns = 0;
  int rounds = 0;
};

SparseVec string_column(const StochasticGraph& g, const EdgeString& s,
                        int group_row) {
  SparseVec col;
  double survive = 1.0;
  for (EdgeId e : s) {
    const Edge& edge = g.edge(e);
    const double coef = edge.p * survive;
    if (coef > 0.0) col.emplace_back(edge.offline, coef);
    survive *= 1.0 - edge.p;
  }
  col.emplace_back(group_row, 1.0);
  return col;
}

DenseLp master_rows(const StochasticGraph& g, const std::vector<Group>& groups) {
  DenseLp lp;
  for (int u = 0; u < g.num_offline(); ++u) lp.add_row(RowSense::kLessEqual, 1.0);
  for (const Group& grp : groups) lp.add_row(RowSense::kEqual, grp.r);
  return lp;
}

std::vector<StringDistribution> collect_support(
    const std::vector<Group>& groups,
    const std::vector<std::pair<int, EdgeString>>& columns,
    const std::vector<double>& primal) {
  std::vector<StringDistribution> support(groups.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (primal[j] > kSupportEps) {
      support[static_cast<std::size_t>(columns[j].first)].push_back(
          {columns[j].second, primal[j]});
    }
  }
  for (std::size_t k = 0; k < groups.size(); ++k) {
    double total = 0.0;
    for (const auto& ws : support[k]) total += ws.mass;
    if (total <= 0.0) {
      support[k] = {{EdgeString{}, groups[k].r}};
      continue;
    }
    const double scale = groups[k].r / total;
    for (auto& ws : support[k]) ws.mass *= scale;
  }
  return support;
}

MasterResult column_generation(const StochasticGraph& g,
                               const std::vector<Group>& groups,
                               const ColumnGenOptions& opt) {
  const int nu = g.num_offline();
  RevisedSimplex solver(master_rows(g, groups), opt.simplex);
  std::vector<std::set<EdgeString>> pool(groups.size());
  std::vector<std::pair<int, EdgeString>> columns;

  auto add = [&](int k, const EdgeString& s) {
    if (!pool[static_cast<std::size_t>(k)].insert(s).second) return false;
    solver.add_column(val(g, s), string_column(g, s, nu + k));
    columns.emplace_back(k, s);
    return true;
  };

  for (int k = 0; k < static_cast<int>(groups.size()); ++k) {
    const int v = groups[static_cast<std::size_t>(k)].vertex;
    add(k, EdgeString{});
    const StarPlan plan = dp_opt(g, v);
    if (!plan.string.empty()) add(k, plan.string);
    if (static_cast<std::size_t>(v) < opt.seed_columns.size()) {
      for (const EdgeString& s : opt.seed_columns[static_cast<std::size_t>(v)]) {
        require(membership(g, v, s), "seed column is infeasible");
        add(k, s);
      }
    }
  }

  MasterResult out;
  std::vector<double> alpha(static_cast<std::size_t>(nu));
  for (;;) {
    ++out.rounds;
    const LpSolution sol = solver.solve();
    if (sol.status != LpStatus::kOptimal) {
      fail(ErrorCode::kInternal, "master LP ended " + to_string(sol.status));
    }
    for (int u = 0; u < nu; ++u) {
      alpha[static_cast<std::size_t>(u)] =
          std::max(0.0, sol.duals[static_cast<std::size_t>(u)]);
    }
    double upper = 0.0;
    for (double a : alpha) upper += a;
    int added = 0;
    std::vector<double> beta(groups.size());
    for (std::size_t k = 0; k < groups.size(); ++k) {
      beta[k] = sol.duals[static_cast<std::size_t>(nu) + k];
      const PricedColumn col = price_column(g, groups[k].vertex, alpha, beta[k]);
      upper += groups[k].r * col.plan.value;
      if (col.reduced_cost > opt.reduced_cost_tol &&
          add(static_cast<int>(k), col.plan.string)) {
        ++added;
      }
    }
    if (added == 0) {
      out.support = collect_support(groups, columns, sol.primal);
      out.alpha = alpha;
      out.beta = beta;
      out.objective = sol.objective;
      out.columns = static_cast<int>(columns.size());
      return out;
    }
    if (static_cast<int>(columns.size()) > opt.max_columns) {
      throw IterationCapError("column cap exceeded", sol.objective, upper);
    }
  }
}

}  // namespace

const IdGroup* ConfigIdLpSolution::find(int arrival, int type) const {
  for (const IdGroup& grp : groups) {
    if (grp.arrival == arrival && grp.type == type) return &grp;
  }
  return nullptr;
}

ConfigLpSolution solve_lp_config(const StochasticGraph& g,
                                 const ColumnGenOptions& options) {
  std::vector<Group> groups;
  for (int v = 0; v < g.num_online(); ++v) groups.push_back({v, 1.0});
  MasterResult res = column_generation(g, groups, options);
  ConfigLpSolution sol;
  sol.support = std::move(res.support);
  sol.objective = res.objective;
  sol.alpha = std::move(res.alpha);
  sol.beta = std::move(res.beta);
  sol.columns = res.columns;
  sol.rounds = res.rounds;
  return sol;
}

ConfigIdLpSolution solve_lp_config_id(const KnownIdInput& input,
                                      const ColumnGenOptions& options) {
  std::vector<Group> groups;
  std::vector<std::pair<int, int>> keys;
  for (int i = 0; i < input.n(); ++i) {
    for (const TypeProb& tp : input.rows[static_cast<std::size_t>(i)]) {
      groups.push_back({tp.type, tp.prob});
      keys.emplace_back(i, tp.type);
    }
  }
  ColumnGenOptions opt = options;
  opt.seed_columns.clear();
  MasterResult res = column_generation(input.type_graph, groups, opt);
  ConfigIdLpSolution sol;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    sol.groups.push_back({keys[k].first, keys[k].second, groups[k].r,
                          std::move(res.support[k]), res.beta[k]});
  }
  sol.objective = res.objective;
  sol.alpha = std::move(res.alpha);
  sol.columns = res.columns;
  sol.rounds = res.rounds;
  return sol;
}

std::vector<EdgeString> enumerate_strings(const StochasticGraph& g, int v,
                                          long limit) {
  std::vector<EdgeId> edges;
  for (EdgeId e : g.online(v).edges) {
    if (g.edge(e).p > 0.0) edges.push_back(e);
  }
  const ProbingConstraint& c = g.online(v).constraint;
  std::vector<EdgeString> out;
  EdgeString cur;
  std::vector<int> slots;
  std::vector<char> used(edges.size(), 0);
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<long>(out.size()) >= limit) {
      fail(ErrorCode::kTooLarge, "string enumeration exceeds its limit");
    }
    out.push_back(cur);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (used[k]) continue;
      slots.push_back(g.edge(edges[k]).slot);
      if (admits_slots(c, slots)) {
        used[k] = 1;
        cur.push_back(edges[k]);
        self(self);
        cur.pop_back();
        used[k] = 0;
      }
      slots.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

ConfigLpSolution solve_lp_config_enumerated(const StochasticGraph& g,
                                            long max_strings) {
  std::vector<Group> groups;
  for (int v = 0; v < g.num_online(); ++v) groups.push_back({v, 1.0});
  DenseLp lp = master_rows(g, groups);
  std::vector<std::pair<int, EdgeString>> columns;
  long remaining = max_strings;
  for (int v = 0; v < g.num_online(); ++v) {
    for (EdgeString& s : enumerate_strings(g, v, remaining)) {
      lp.add_column(val(g, s), string_column(g, s, g.num_offline() + v));
      columns.emplace_back(v, std::move(s));
    }
    remaining = max_strings - static_cast<long>(columns.size());
  }
  const LpSolution res = solve_dense(lp);
  if (res.status != LpStatus::kOptimal) {
    fail(ErrorCode::kInternal, "enumerated LP ended " + to_string(res.status));
  }
  ConfigLpSolution sol;
  sol.support = collect_support(groups, columns, res.primal);
  sol.objective = res.objective;
  for (int u = 0; u < g.num_offline(); ++u) {
    sol.alpha.push_back(res.duals[static_cast<std::size_t>(u)]);
  }
  for (int v = 0; v < g.num_online(); ++v) {
    sol.beta.push_back(res.duals[static_cast<std::size_t>(g.num_offline() + v)]);
  }
  sol.columns = static_cast<int>(columns.size());
  sol.rounds = 1;
  return sol;
}

void accumulate_edge_variables(const StochasticGraph& g,
                               const StringDistribution& dist,
                               std::vector<double>& out) {
  for (const WeightedString& ws : dist) {
    double survive = 1.0;
    for (EdgeId e : ws.string) {
      out[static_cast<std::size_t>(e)] += survive * ws.mass;
      survive *= 1.0 - g.edge(e).p;
    }
  }
}

std::vector<double> edge_variables(const StochasticGraph& g,
                                   const ConfigLpSolution& sol) {
  std::vector<double> out(static_cast<std::size_t>(g.num_edges()), 0.0);
  for (const StringDistribution& dist : sol.support) {
    accumulate_edge_variables(g, dist, out);
  }
  return out;
}

std::vector<std::vector<double>> edge_variables(const KnownIdInput& input,
                                                const ConfigIdLpSolution& sol) {
  const auto m = static_cast<std::size_t>(input.type_graph.num_edges());
  std::vector<std::vector<double>> out(static_cast<std::size_t>(input.n()),
                                       std::vector<double>(m, 0.0));
  for (const IdGroup& grp : sol.groups) {
    accumulate_edge_variables(input.type_graph, grp.support,
                              out[static_cast<std::size_t>(grp.arrival)]);
  }
  return out;
}

}  // namespace stochmatch
