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
#include "stochmatch/generators.hpp"
#include "stochmatch/star_opt.hpp"
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

// Independent oracle: best val over every feasible ordered string,
// including negative weights.
double brute_star(const StochasticGraph& g, const std::vector<double>& weight) {
  const int k = g.degree(0);
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    EdgeString s;
    for (int i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) s.push_back(g.online(0).edges[static_cast<std::size_t>(i)]);
    }
    if (!membership(g, 0, s)) continue;
    std::sort(s.begin(), s.end());
    do {
      double value = 0.0, survive = 1.0;
      for (EdgeId e : s) {
        value += survive * g.edge(e).p * weight[static_cast<std::size_t>(e)];
        survive *= 1.0 - g.edge(e).p;
      }
      best = std::max(best, value);
    } while (std::next_permutation(s.begin(), s.end()));
  }
  return best;
}

}  // namespace

TEST_CASE("nonmonotone star: full offline set") {
  const StochasticGraph g = nonmonotone_star(1.0 / 12.0);
  const StarPlan plan = dp_opt(g, 0);
  CHECK(plan.string == EdgeString{0, 1});
  CHECK(plan.value == doctest::Approx(19.0 / 18.0).epsilon(1e-14));
}

TEST_CASE("nonmonotone star: u2 removed") {
  const StochasticGraph g = nonmonotone_star(1.0 / 12.0);
  const std::vector<std::uint8_t> avail = {1, 0, 1, 1};
  const StarPlan plan = dp_opt(g, 0, avail);
  CHECK(plan.value == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  // u1 is not probed; u3 and u4 are (their weights tie).
  std::vector<EdgeId> probed = plan.string;
  std::sort(probed.begin(), probed.end());
  CHECK(probed == std::vector<EdgeId>{2, 3});
}

TEST_CASE("unweighted stars") {
  CHECK(dp_opt(star({0.6, 0.5}, {1, 1}, Patience{1}), 0).value == doctest::Approx(0.6));
  CHECK(dp_opt(star({0.6, 0.5}, {1, 1}, Patience{1}), 0).string == EdgeString{0});
  CHECK(dp_opt(star({0.6, 0.5}, {1, 1}, Patience{2}), 0).value == doctest::Approx(0.8));
}

TEST_CASE("empty available set gives the empty plan") {
  const StochasticGraph g = star({0.6, 0.5}, {1, 1});
  const std::vector<std::uint8_t> none = {0, 0};
  const StarPlan plan = dp_opt(g, 0, none);
  CHECK(plan.string.empty());
  CHECK(plan.value == 0.0);
}

TEST_CASE("price_column") {
  const StochasticGraph g = star({0.5}, {2});
  const std::vector<double> alpha = {1.0};
  const PricedColumn pc = price_column(g, 0, alpha, 0.3);
  CHECK(pc.plan.string == EdgeString{0});
  CHECK(pc.reduced_cost == doctest::Approx(0.2).epsilon(1e-14));

  const std::vector<double> big = {5.0};
  const PricedColumn none = price_column(g, 0, big, 0.7);
  CHECK(none.plan.string.empty());
  CHECK(none.reduced_cost == doctest::Approx(-0.7));

  const StochasticGraph h = nonmonotone_star(1.0 / 12.0);
  const std::vector<double> zero(4, 0.0);
  CHECK(price_column(h, 0, zero, 0.0).reduced_cost == doctest::Approx(dp_opt(h, 0).value));
}

// Property: dp_opt agrees with exhaustive search on random stars.
TEST_CASE("dp_opt matches exhaustive search") {
  Rng rng = make_rng(21, 0);
  for (int t = 0; t < 1000; ++t) {
    const StochasticGraph g = random_star(rng, 1 + uniform_index(rng, 6));
    std::vector<double> w;
    for (const Edge& e : g.edges()) w.push_back(e.w);
    const StarPlan plan = dp_opt(g, 0);
    CHECK(std::abs(plan.value - brute_star(g, w)) <= 1e-12);
    CHECK(membership(g, 0, plan.string));
    CHECK(plan.value == doctest::Approx(val(g, plan.string)).epsilon(1e-14));
    CHECK(std::abs(plan.value - exhaustive_star_value(make_star(g, 0))) <= 1e-12);
  }
}

// Property: OPT(v, R) is monotone in R.
TEST_CASE("dp_opt is monotone in the available set") {
  Rng rng = make_rng(22, 0);
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + uniform_index(rng, 6);
    const StochasticGraph g = random_star(rng, k);
    for (std::uint32_t r = 0; r < (1u << k); ++r) {
      std::vector<std::uint8_t> a(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i)] = (r >> i) & 1u;
      const double base = dp_opt(g, 0, a).value;
      for (int i = 0; i < k; ++i) {
        if (a[static_cast<std::size_t>(i)]) continue;
        auto b = a;
        b[static_cast<std::size_t>(i)] = 1;
        CHECK(dp_opt(g, 0, b).value >= base - 1e-12);
      }
    }
  }
}

// Property: dropping negative reduced weights does not change the optimum.
TEST_CASE("price_column agrees with exhaustive search over signed weights") {
  Rng rng = make_rng(23, 0);
  for (int t = 0; t < 300; ++t) {
    const int k = 1 + uniform_index(rng, 5);
    const StochasticGraph g = random_star(rng, k);
    std::vector<double> alpha(static_cast<std::size_t>(k));
    for (auto& a : alpha) a = uniform01(rng);
    std::vector<double> reduced;
    for (const Edge& e : g.edges()) reduced.push_back(e.w - alpha[static_cast<std::size_t>(e.offline)]);
    const double beta = 0.1 * uniform01(rng);
    const PricedColumn pc = price_column(g, 0, alpha, beta);
    CHECK(std::abs(pc.reduced_cost - (brute_star(g, reduced) - beta)) <= 1e-12);
  }
}

TEST_CASE("rankability") {
  SUBCASE("unit patience ranks by p times w") {
    const StochasticGraph g = star({0.9, 0.5, 0.2}, {0.1, 0.5, 1.0}, Patience{1});
    const Rankability r = is_rankable(g, 0);
    REQUIRE(r.rankable);
    CHECK(r.ranking == std::vector<EdgeId>{1, 2, 0});
    CHECK_FALSE(find_ranking_violation(g, 0, r.ranking).has_value());
  }
  SUBCASE("unlimited patience") {
    const StochasticGraph g = star({0.9, 0.5, 0.2}, {0.1, 0.5, 1.0}, Patience{3});
    const Rankability r = is_rankable(g, 0);
    REQUIRE(r.rankable);
    CHECK_FALSE(find_ranking_violation(g, 0, r.ranking).has_value());
  }
  SUBCASE("the nonmonotone star is not rankable") {
    const StochasticGraph g = nonmonotone_star(1.0 / 12.0);
    CHECK_FALSE(is_rankable(g, 0).rankable);
    const std::vector<EdgeId> by_weight = {0, 1, 2, 3};
    CHECK(find_ranking_violation(g, 0, by_weight).has_value());
  }
  SUBCASE("agreeing weights and probabilities") {
    const StochasticGraph g = star({0.2, 0.5, 0.8, 0.9}, {0.1, 0.3, 0.6, 0.9}, Patience{2});
    const Rankability r = is_rankable(g, 0);
    REQUIRE(r.rankable);
    CHECK_FALSE(find_ranking_violation(g, 0, r.ranking).has_value());
  }
  SUBCASE("certified rankings hold on random stars") {
    Rng rng = make_rng(24, 0);
    for (int t = 0; t < 200; ++t) {
      const StochasticGraph g = random_star(rng, 1 + uniform_index(rng, 5));
      const Rankability r = is_rankable(g, 0);
      if (r.rankable) CHECK_FALSE(find_ranking_violation(g, 0, r.ranking).has_value());
    }
  }
}
