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
#include <numeric>

#include "doctest.h"
#include "stochmatch/config_lp.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/simplex.hpp"
#include "stochmatch/stats.hpp"
#include "stochmatch/verify.hpp"

using namespace stochmatch;

namespace {

StochasticGraph star(const std::vector<double>& p, const std::vector<double>& w,
                     ProbingConstraint c = Patience{}) {
  StochasticGraph g;
  for (std::size_t i = 0; i < p.size(); ++i) g.add_offline("u" + std::to_string(i + 1), w[i]);
  const int v = g.add_online("v");
  for (std::size_t i = 0; i < p.size(); ++i) g.add_edge(static_cast<int>(i), v, p[i], w[i]);
  g.set_constraint(v, std::move(c));
  return g;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInternal;
}

// Vertex enumeration oracle for max c.x, A x <= b, x >= 0 with n <= 3.
double vertex_oracle(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                     const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.size());
  // Constraint k < m: row k tight; k >= m: x_{k-m} = 0.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int k = 0; k < m; ++k) {
    rows.push_back(a[static_cast<std::size_t>(k)]);
    rhs.push_back(b[static_cast<std::size_t>(k)]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    r[static_cast<std::size_t>(j)] = 1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  const int total = m + n;
  double best = -1e300;
  std::vector<int> pick(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    int t = 0;
    for (int k = 0; k < total; ++k) {
      if ((mask >> k) & 1u) pick[static_cast<std::size_t>(t++)] = k;
    }
    // Gaussian elimination on the n x n system.
    std::vector<std::vector<double>> mat(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n + 1)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) mat[i][j] = rows[pick[i]][j];
      mat[i][n] = rhs[pick[i]];
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = col;
      for (int i = col + 1; i < n; ++i) {
        if (std::abs(mat[i][col]) > std::abs(mat[piv][col])) piv = i;
      }
      if (std::abs(mat[piv][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(mat[col], mat[piv]);
      for (int i = 0; i < n; ++i) {
        if (i == col) continue;
        const double f = mat[i][col] / mat[col][col];
        for (int j = col; j <= n; ++j) mat[i][j] -= f * mat[col][j];
      }
    }
    if (singular) continue;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = mat[i][n] / mat[i][i];
    bool feasible = true;
    for (int k = 0; k < total; ++k) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += rows[k][j] * x[j];
      if (k < m ? lhs > rhs[k] + 1e-9 : lhs < -1e-9) feasible = false;
    }
    if (!feasible) continue;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += c[j] * x[j];
    best = std::max(best, obj);
  }
  return best;
}

}  // namespace

TEST_CASE("dense simplex basics") {
  SUBCASE("max x, x <= 1") {
    DenseLp lp;
    lp.add_row(RowSense::kLessEqual, 1.0);
    lp.add_column(1.0, {{0, 1.0}});
    const LpSolution s = solve_dense(lp);
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.primal[0] == doctest::Approx(1.0));
    CHECK(s.duals[0] == doctest::Approx(1.0));
  }
  SUBCASE("max x + y, x + y <= 1") {
    DenseLp lp;
    lp.add_row(RowSense::kLessEqual, 1.0);
    lp.add_column(1.0, {{0, 1.0}});
    lp.add_column(1.0, {{0, 1.0}});
    CHECK(solve_dense(lp).objective == doctest::Approx(1.0));
  }
  SUBCASE("equality and >= rows") {
    // max x + 2y, x + y = 2, y >= 0.5, y <= 1.5.
    DenseLp lp;
    lp.add_row(RowSense::kEqual, 2.0);
    lp.add_row(RowSense::kGreaterEqual, 0.5);
    lp.add_row(RowSense::kLessEqual, 1.5);
    lp.add_column(1.0, {{0, 1.0}});
    lp.add_column(2.0, {{0, 1.0}, {1, 1.0}, {2, 1.0}});
    const LpSolution s = solve_dense(lp);
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(3.5));
    CHECK(s.dual_objective == doctest::Approx(3.5));
  }
  SUBCASE("infeasible") {
    DenseLp lp;
    lp.add_row(RowSense::kLessEqual, 1.0);
    lp.add_row(RowSense::kGreaterEqual, 2.0);
    lp.add_column(1.0, {{0, 1.0}, {1, 1.0}});
    CHECK(solve_dense(lp).status == LpStatus::kInfeasible);
  }
  SUBCASE("unbounded") {
    DenseLp lp;
    lp.add_row(RowSense::kGreaterEqual, 1.0);
    lp.add_column(1.0, {{0, 1.0}});
    CHECK(solve_dense(lp).status == LpStatus::kUnbounded);
  }
}

// Property: simplex optimum equals the vertex-enumeration optimum, and
// primal and dual objectives agree.
TEST_CASE("simplex matches vertex enumeration on random bounded LPs") {
  Rng rng = make_rng(31, 0);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + uniform_index(rng, 3);
    const int m = 1 + uniform_index(rng, 4);
    std::vector<std::vector<double>> a(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> b(static_cast<std::size_t>(m)), c(static_cast<std::size_t>(n));
    DenseLp lp;
    for (int i = 0; i < m; ++i) {
      b[i] = 0.5 + uniform01(rng);
      lp.add_row(RowSense::kLessEqual, b[i]);
      for (int j = 0; j < n; ++j) a[i][j] = uniform01(rng) < 0.2 ? 0.0 : uniform01(rng);
    }
    // A box row keeps the LP bounded.
    a.push_back(std::vector<double>(static_cast<std::size_t>(n), 1.0));
    b.push_back(3.0);
    lp.add_row(RowSense::kLessEqual, 3.0);
    for (int j = 0; j < n; ++j) {
      c[j] = uniform01(rng) * 2.0 - 0.5;
      SparseVec col;
      for (int i = 0; i <= m; ++i) {
        if (a[i][j] != 0.0) col.push_back({i, a[i][j]});
      }
      lp.add_column(c[j], col);
    }
    const LpSolution s = solve_dense(lp);
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(vertex_oracle(a, b, c)).epsilon(1e-9));
    CHECK(std::abs(s.objective - s.dual_objective) <= 1e-8 * (1.0 + std::abs(s.objective)));
  }
}

TEST_CASE("LP-config frozen values") {
  SUBCASE("one edge, p = 1") {
    const ConfigLpSolution s = solve_lp_config(star({1.0}, {1.0}, Patience{1}));
    CHECK(s.objective == doctest::Approx(1.0));
    REQUIRE(s.support[0].size() == 1);
    CHECK(s.support[0][0].string == EdgeString{0});
    CHECK(s.support[0][0].mass == doctest::Approx(1.0));
  }
  SUBCASE("unit patience, k = 4, p = 1/4") {
    const StochasticGraph g = star(std::vector<double>(4, 0.25), std::vector<double>(4, 1.0), Patience{1});
    const ConfigLpSolution s = solve_lp_config(g);
    CHECK(s.objective == doctest::Approx(0.25));
    const std::vector<double> xt = edge_variables(g, s);
    CHECK(std::accumulate(xt.begin(), xt.end(), 0.0) <= 1.0 + 1e-9);
  }
  SUBCASE("two copies share one offline vertex") {
    StochasticGraph g;
    g.add_offline("u", 1.0);
    for (int i = 0; i < 2; ++i) {
      const int v = g.add_online("v" + std::to_string(i), Patience{1});
      g.add_edge(0, v, 1.0, 1.0);
    }
    CHECK(solve_lp_config(g).objective == doctest::Approx(1.0));
  }
  SUBCASE("all p = 0") {
    CHECK(solve_lp_config(star({0.0, 0.0}, {1.0, 1.0})).objective == 0.0);
  }
}

TEST_CASE("edge variables") {
  const StochasticGraph g = star({0.5, 0.3}, {1.0, 1.0}, Patience{2});
  ConfigLpSolution sol;
  sol.support = {{{EdgeString{0, 1}, 1.0}}};
  const std::vector<double> xt = edge_variables(g, sol);
  CHECK(xt[0] == doctest::Approx(1.0));
  CHECK(xt[1] == doctest::Approx(0.5));
  sol.support = {{{EdgeString{}, 1.0}}};
  const std::vector<double> zero = edge_variables(g, sol);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
}

// Properties: feasibility, objective identity and dual feasibility of the
// column-generation solution.
TEST_CASE("LP-config solution invariants") {
  Rng rng = make_rng(32, 0);
  const TinyKind kinds[] = {TinyKind::kPatience, TinyKind::kFamily, TinyKind::kKnapsack,
                            TinyKind::kUnbounded};
  for (int t = 0; t < 80; ++t) {
    const StochasticGraph g = tiny_graph(rng, kinds[t % 4], 12);
    const ConfigLpSolution s = solve_lp_config(g);
    const std::vector<double> xt = edge_variables(g, s);
    double identity = 0.0;
    std::vector<double> load(static_cast<std::size_t>(g.num_offline()), 0.0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge& edge = g.edge(e);
      identity += edge.w * edge.p * xt[static_cast<std::size_t>(e)];
      load[static_cast<std::size_t>(edge.offline)] += edge.p * xt[static_cast<std::size_t>(e)];
    }
    CHECK(identity == doctest::Approx(s.objective).epsilon(1e-8));
    for (double l : load) CHECK(l <= 1.0 + 1e-6);
    for (int v = 0; v < g.num_online(); ++v) {
      double mass = 0.0;
      for (const WeightedString& ws : s.support[static_cast<std::size_t>(v)]) {
        CHECK(membership(g, v, ws.string));
        mass += ws.mass;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
      // Dual constraint on fresh random strings.
      const std::vector<EdgeString> all = enumerate_strings(g, v, 100000);
      for (int k = 0; k < 100; ++k) {
        const EdgeString& s2 = all[static_cast<std::size_t>(uniform_index(rng, static_cast<int>(all.size())))];
        double lhs = s.beta[static_cast<std::size_t>(v)], survive = 1.0;
        for (EdgeId e : s2) {
          lhs += g.edge(e).p * survive * s.alpha[static_cast<std::size_t>(g.edge(e).offline)];
          survive *= 1.0 - g.edge(e).p;
        }
        CHECK(lhs >= val(g, s2) - 1e-6);
      }
    }
  }
}

TEST_CASE("column generation equals full enumeration") {
  Rng rng = make_rng(33, 0);
  const TinyKind kinds[] = {TinyKind::kPatience, TinyKind::kFamily, TinyKind::kKnapsack,
                            TinyKind::kUnbounded};
  for (int t = 0; t < 60; ++t) {
    const StochasticGraph g = tiny_graph(rng, kinds[t % 4], 12);
    CHECK(std::abs(solve_lp_config(g).objective - solve_lp_config_enumerated(g).objective) <= 1e-6);
  }
}

TEST_CASE("column cap raises an error carrying bounds") {
  const StochasticGraph g = er_gap_graph(6, 0.4, 4);
  ColumnGenOptions o;
  o.max_columns = 7;
  try {
    solve_lp_config(g, o);
    FAIL("expected the column cap to trigger");
  } catch (const IterationCapError& e) {
    CHECK(e.code() == ErrorCode::kIterationCap);
    CHECK(e.lower_bound() <= e.upper_bound() + 1e-9);
    const double exact = solve_lp_config(g).objective;
    CHECK(e.lower_bound() <= exact + 1e-7);
    CHECK(e.upper_bound() >= exact - 1e-7);
  }
}

TEST_CASE("LP-config-id") {
  SUBCASE("point masses equal LP-config on the type graph") {
    Rng rng = make_rng(34, 0);
    for (int t = 0; t < 20; ++t) {
      const StochasticGraph g = tiny_graph(rng, TinyKind::kPatience);
      CHECK(solve_lp_config_id(point_mass_input(g)).objective ==
            doctest::Approx(solve_lp_config(g).objective).epsilon(1e-7));
    }
  }
  SUBCASE("one arrival, two equally likely types") {
    StochasticGraph h;
    h.add_offline("u1", 1.0);
    h.add_offline("u2", 1.0);
    const int b1 = h.add_online("b1", Patience{1});
    const int b2 = h.add_online("b2", Patience{1});
    h.add_edge(0, b1, 1.0, 1.0);
    h.add_edge(1, b2, 1.0, 1.0);
    const KnownIdInput in = make_known_id(h, {{{b1, 0.5}, {b2, 0.5}}});
    const ConfigIdLpSolution s = solve_lp_config_id(in);
    CHECK(s.objective == doctest::Approx(1.0));
    for (const IdGroup& grp : s.groups) {
      double mass = 0.0;
      for (const auto& ws : grp.support) mass += ws.mass;
      CHECK(mass == doctest::Approx(grp.r).epsilon(1e-9));
    }
  }
  SUBCASE("all p = 0") {
    StochasticGraph h;
    h.add_offline("u", 1.0);
    const int b = h.add_online("b");
    h.add_edge(0, b, 0.0, 1.0);
    CHECK(solve_lp_config_id(make_known_id(h, {{{b, 1.0}}, {{b, 1.0}}})).objective == 0.0);
  }
  SUBCASE("offline loads stay within one") {
    Rng rng = make_rng(35, 0);
    for (int t = 0; t < 20; ++t) {
      const KnownIdInput in = tiny_known_id(rng, 3, 3, TinyKind::kPatience);
      const ConfigIdLpSolution s = solve_lp_config_id(in);
      const auto xt = edge_variables(in, s);
      std::vector<double> load(static_cast<std::size_t>(in.type_graph.num_offline()), 0.0);
      double identity = 0.0;
      for (int i = 0; i < in.n(); ++i) {
        for (EdgeId e = 0; e < in.type_graph.num_edges(); ++e) {
          const Edge& edge = in.type_graph.edge(e);
          const double x = xt[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)];
          load[static_cast<std::size_t>(edge.offline)] += edge.p * x;
          identity += edge.w * edge.p * x;
        }
      }
      for (double l : load) CHECK(l <= 1.0 + 1e-6);
      CHECK(identity == doctest::Approx(s.objective).epsilon(1e-8));
    }
  }
}

TEST_CASE("comparison LPs") {
  SUBCASE("frozen values") {
    CHECK(solve_lp_std(star({1.0}, {1.0}, Patience{1})) == doctest::Approx(1.0));
    CHECK(solve_lp_std(star({0.0}, {1.0}, Patience{1})) == 0.0);
    CHECK(solve_lp_dp(star({1.0}, {1.0}, Patience{1})) == doctest::Approx(1.0));
    CHECK(solve_lp_dp(nonmonotone_star(1.0 / 12.0)) == doctest::Approx(19.0 / 18.0));
    CHECK(solve_lp_qc(star({0.5}, {1.0})) == doctest::Approx(0.5));
    CHECK(solve_lp_qc(star({0.0, 0.0}, {1.0, 1.0})) == 0.0);
    StochasticGraph two;
    two.add_offline("u1");
    two.add_offline("u2");
    for (int i = 0; i < 2; ++i) {
      const int v = two.add_online("v" + std::to_string(i), Patience{1});
      two.add_edge(0, v, 1.0, 1.0);
      two.add_edge(1, v, 1.0, 1.0);
    }
    CHECK(solve_lp_std_unit(two) == doctest::Approx(2.0));
  }
  SUBCASE("inapplicable constraint classes") {
    const StochasticGraph ks = star({0.5, 0.5}, {1, 1}, Knapsack{1.0, {0.6, 0.5}});
    CHECK(code_of([&] { solve_lp_std(ks); }) == ErrorCode::kInapplicable);
    CHECK(code_of([&] { solve_lp_std_unit(star({0.5}, {1}, Patience{2})); }) ==
          ErrorCode::kInapplicable);
    CHECK(code_of([&] { solve_lp_qc(star({0.5, 0.5}, {1, 1}, Patience{1})); }) == ErrorCode::kInapplicable);
    StochasticGraph edge_weighted = star({0.5, 0.5}, {1, 1});
    edge_weighted.add_offline("x", 0.3);
    const int v = edge_weighted.add_online("w");
    edge_weighted.add_edge(2, v, 0.5, 0.9);
    CHECK(code_of([&] { solve_lp_dp(edge_weighted); }) == ErrorCode::kInapplicable);
    CHECK(code_of([&] { solve_lp_dp(er_gap_graph(2, 0.5, 15)); }) == ErrorCode::kTooLarge);
  }
  SUBCASE("LP-std-unit equals LP-config under unit patience") {
    Rng rng = make_rng(36, 0);
    for (int t = 0; t < 30; ++t) {
      RandomGraphParams p;
      p.offline = 1 + uniform_index(rng, 4);
      p.online = 1 + uniform_index(rng, 4);
      p.patience_max = 1;
      const StochasticGraph g = random_graph(p, rng);
      CHECK(solve_lp_std_unit(g) == doctest::Approx(solve_lp_config(g).objective).epsilon(1e-7));
    }
  }
  SUBCASE("LP-QC equals LP-config under unbounded patience") {
    Rng rng = make_rng(37, 0);
    for (int t = 0; t < 30; ++t) {
      const StochasticGraph g = tiny_graph(rng, TinyKind::kUnbounded, 12);
      CHECK(std::abs(solve_lp_qc(g) - solve_lp_config(g).objective) <= 1e-6);
    }
  }
  SUBCASE("LP-config never exceeds LP-std under patience") {
    Rng rng = make_rng(38, 0);
    for (int t = 0; t < 30; ++t) {
      const StochasticGraph g = tiny_graph(rng, TinyKind::kPatience, 12);
      CHECK(solve_lp_config(g).objective <= solve_lp_std(g) + 1e-7);
    }
  }
}

// Property: E[LPOPT(G_t)] >= (t/n) LPOPT(G) over random online subsets.
TEST_CASE("random induced subgraphs keep their share of the LP") {
  Rng rng = make_rng(39, 0);
  RandomGraphParams p;
  p.offline = 4;
  p.online = 6;
  const StochasticGraph g = random_graph(p, rng);
  const double full = solve_lp_config(g).objective;
  for (int t = 1; t < 6; ++t) {
    RunningStats stats;
    for (int k = 0; k < 300; ++k) {
      std::vector<int> all(6);
      std::iota(all.begin(), all.end(), 0);
      shuffle_in_place(all, rng);
      all.resize(static_cast<std::size_t>(t));
      stats.add(solve_lp_config(induced_online_subgraph(g, all).graph).objective);
    }
    CHECK(stats.mean() >= t / 6.0 * full - 3.0 * stats.sem());
  }
}
