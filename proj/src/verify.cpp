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

#include "stochmatch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stochmatch/crs.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/rounding.hpp"
#include "stochmatch/star_opt.hpp"

namespace stochmatch {

namespace {

int positive_edges(const StochasticGraph& g) {
  return static_cast<int>(std::count_if(g.edges().begin(), g.edges().end(),
                                        [](const Edge& e) { return e.p > 0.0; }));
}

RandomGraphParams tiny_params(Rng& rng, TinyKind kind, bool vertex_weighted) {
  RandomGraphParams p;
  p.offline = 1 + uniform_index(rng, 3);
  p.online = 1 + uniform_index(rng, 3);
  p.density = 0.75;
  p.vertex_weighted = vertex_weighted;
  p.patience_max = 2;
  p.family_sets = 2;
  switch (kind) {
    case TinyKind::kPatience: p.constraint = GenConstraint::kPatience; break;
    case TinyKind::kFamily: p.constraint = GenConstraint::kFamily; break;
    case TinyKind::kKnapsack: p.constraint = GenConstraint::kKnapsack; break;
    case TinyKind::kUnbounded: p.constraint = GenConstraint::kUnbounded; break;
  }
  return p;
}

// Exact P[propose e] for one vertex whose strings follow `law`.
void accumulate_proposals(const StochasticGraph& g, const StringDistribution& law,
                          double scale, std::vector<double>& out) {
  for (const WeightedString& ws : law) {
    double survive = 1.0;
    for (EdgeId e : ws.string) {
      const double p = g.edge(e).p;
      out[static_cast<std::size_t>(e)] += scale * ws.mass * survive * p;
      survive *= 1.0 - p;
    }
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Check make_check(std::string name, bool ok, std::string detail) {
  return Check{std::move(name), ok, std::move(detail)};
}

void crs_suite(const VerifyOptions& o, VerifyReport& r) {
  SelectabilityOptions so;
  so.trials = o.crs_trials;
  const std::vector<std::vector<double>> ocrs_vectors = {{1.0}, {0.5, 0.5}, {0.9, 0.1}};
  std::uint64_t s = 0;
  for (const auto& z : ocrs_vectors) {
    so.seed = stream_seed(o.seed, s++);
    const SelectabilityReport rep =
        verify_selectability(CrsScheme::kOcrsHalf, z, CrsMode::kAdversarial, so);
    bool ok = true;
    double worst_dev = 0.0;
    for (const OrderEstimate& oe : rep.orders) {
      for (const ElementEstimate& ee : oe.elements) {
        const double sigma = 0.5 / std::sqrt(static_cast<double>(ee.active));
        const double dev = std::abs(ee.estimate - 0.5) / sigma;
        worst_dev = std::max(worst_dev, dev);
        ok = ok && dev <= 3.0;
      }
    }
    r.checks.push_back(make_check("ocrs-half exact 1/2, z=" + Json(z).dump(), ok,
                                  "worst deviation " + fmt(worst_dev) + " sigma"));
  }
  std::vector<std::vector<double>> rcrs_vectors = {{1.0}, {0.5, 0.5}, {0.9, 0.1}};
  rcrs_vectors.push_back(std::vector<double>(100, 0.01));
  const double target = 1.0 - std::exp(-1.0) - 0.005;
  for (const auto& z : rcrs_vectors) {
    so.seed = stream_seed(o.seed, s++);
    const SelectabilityReport rep =
        verify_selectability(CrsScheme::kRcrs, z, CrsMode::kRandom, so);
    double worst = 1.0;
    for (const ElementEstimate& ee : rep.classes) worst = std::min(worst, ee.estimate);
    const std::string name =
        z.size() == 100 ? "rcrs >= 1-1/e-0.005, z=100x0.01" : "rcrs >= 1-1/e-0.005, z=" + Json(z).dump();
    r.checks.push_back(make_check(name, worst >= target, "worst class estimate " + fmt(worst)));
  }
}

void rounding_suite(const VerifyOptions& o, VerifyReport& r) {
  Rng rng = make_rng(o.seed, 11);
  const TinyKind kinds[] = {TinyKind::kPatience, TinyKind::kFamily, TinyKind::kKnapsack,
                            TinyKind::kUnbounded};
  double worst = 0.0;
  int tested = 0;
  for (int k = 0; k < o.instances; ++k) {
    const StochasticGraph g = tiny_graph(rng, kinds[k % 4]);
    const ConfigLpSolution sol = solve_lp_config(g);
    if (support_size(sol) > 200) continue;
    worst = std::max(worst, rounding_error(g, sol));
    ++tested;
  }
  r.checks.push_back(make_check("known-graph proposal law = p*x~ (1e-12)", worst <= 1e-12,
                                std::to_string(tested) + " instances, max error " + fmt(worst)));
  worst = 0.0;
  tested = 0;
  for (int k = 0; k < o.instances; ++k) {
    const KnownIdInput in = tiny_known_id(rng, 1 + uniform_index(rng, 3), 1 + uniform_index(rng, 3),
                                          kinds[k % 4]);
    const ConfigIdLpSolution sol = solve_lp_config_id(in);
    if (support_size(sol) > 200) continue;
    worst = std::max(worst, rounding_error(in, sol));
    ++tested;
  }
  r.checks.push_back(make_check("known-i.d. proposal law = p*x~ (1e-12)", worst <= 1e-12,
                                std::to_string(tested) + " inputs, max error " + fmt(worst)));
}

void lp_consistency_suite(const VerifyOptions& o, VerifyReport& r) {
  Rng rng = make_rng(o.seed, 12);
  const TinyKind kinds[] = {TinyKind::kPatience, TinyKind::kFamily, TinyKind::kKnapsack,
                            TinyKind::kUnbounded};
  double worst = 0.0;
  for (int k = 0; k < o.instances; ++k) {
    const StochasticGraph g = tiny_graph(rng, kinds[k % 4], 12);
    const double cg = solve_lp_config(g).objective;
    const double full = solve_lp_config_enumerated(g).objective;
    worst = std::max(worst, std::abs(cg - full));
  }
  r.checks.push_back(make_check("column generation = full enumeration (1e-6)", worst <= 1e-6,
                                std::to_string(o.instances) + " instances, max gap " + fmt(worst)));
  worst = 0.0;
  for (int k = 0; k < o.instances; ++k) {
    const StochasticGraph g = tiny_graph(rng, TinyKind::kUnbounded, 12);
    worst = std::max(worst, std::abs(solve_lp_qc(g) - solve_lp_config(g).objective));
  }
  r.checks.push_back(make_check("LP-QC = LP-config on unbounded patience (1e-6)", worst <= 1e-6,
                                std::to_string(o.instances) + " instances, max gap " + fmt(worst)));
}

void benchmarks_suite(const VerifyOptions& o, VerifyReport& r) {
  Rng rng = make_rng(o.seed, 13);
  double lp_slack = 0.0, na_slack = 0.0, dp_slack = 0.0;
  for (int k = 0; k < o.instances; ++k) {
    const StochasticGraph g = tiny_graph(rng, k % 2 ? TinyKind::kFamily : TinyKind::kPatience, 9,
                                         k % 3 == 0);
    const double opt = brute_force_opt(g);
    lp_slack = std::max(lp_slack, opt - solve_lp_config(g).objective);
    na_slack = std::max(na_slack, brute_force_nonadaptive(g) - opt);
    if (g.is_vertex_weighted()) dp_slack = std::max(dp_slack, opt - solve_lp_dp(g));
  }
  r.checks.push_back(make_check("OPT <= LP-config + 1e-6", lp_slack <= 1e-6,
                                "max excess " + fmt(lp_slack)));
  r.checks.push_back(make_check("non-adaptive <= OPT", na_slack <= 1e-9,
                                "max excess " + fmt(na_slack)));
  r.checks.push_back(make_check("OPT <= LP-DP + 1e-6", dp_slack <= 1e-6,
                                "max excess " + fmt(dp_slack)));

  double star_gap = 0.0;
  for (int k = 0; k < 10 * o.instances; ++k) {
    const StochasticGraph g = random_star(rng, 1 + uniform_index(rng, 6));
    const StarInstance inst = make_star(g, 0, {});
    star_gap = std::max(star_gap, std::abs(dp_opt(inst).value - exhaustive_star_value(inst)));
  }
  r.checks.push_back(make_check("dp_opt = exhaustive star search (1e-12)", star_gap <= 1e-12,
                                "max gap " + fmt(star_gap)));

  double worst_ratio = 1.0;
  for (int k = 0; k < o.instances; ++k) {
    const StochasticGraph g = tiny_graph(rng, TinyKind::kPatience, 9, true);
    const double opt = brute_force_opt(g);
    if (opt <= 0.0) continue;
    std::vector<int> order(static_cast<std::size_t>(g.num_online()));
    std::iota(order.begin(), order.end(), 0);
    do worst_ratio = std::min(worst_ratio, exact_greedy_dp(g, order) / opt);
    while (std::next_permutation(order.begin(), order.end()));
  }
  r.checks.push_back(make_check("greedy-dp exact >= OPT/2 over all orders", worst_ratio >= 0.5,
                                "worst ratio " + fmt(worst_ratio)));
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json VerifyReport::to_json() const {
  Json arr = Json::array();
  for (const Check& c : checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"suite", suite}, {"passed", passed()}, {"checks", arr}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> suites = {"crs", "rounding", "lp-consistency",
                                                  "benchmarks"};
  return suites;
}

VerifyReport run_verify_suite(const std::string& suite, const VerifyOptions& options) {
  require(options.instances >= 1 && options.crs_trials >= 1, "verify needs positive counts");
  VerifyReport r;
  r.suite = suite;
  if (suite == "crs") {
    crs_suite(options, r);
  } else if (suite == "rounding") {
    rounding_suite(options, r);
  } else if (suite == "lp-consistency") {
    lp_consistency_suite(options, r);
  } else if (suite == "benchmarks") {
    benchmarks_suite(options, r);
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown verify suite \"" + suite + "\"");
  }
  return r;
}

StochasticGraph tiny_graph(Rng& rng, TinyKind kind, int max_edges, bool vertex_weighted) {
  for (;;) {
    StochasticGraph g = random_graph(tiny_params(rng, kind, vertex_weighted), rng);
    if (positive_edges(g) <= max_edges) return g;
  }
}

KnownIdInput tiny_known_id(Rng& rng, int n, int types, TinyKind kind, bool iid) {
  RandomTypesParams p;
  p.graph = tiny_params(rng, kind, false);
  p.graph.online = types;
  p.arrivals = n;
  p.iid = iid;
  p.support_max = types;
  return random_types(p, rng);
}

double rounding_error(const StochasticGraph& g, const ConfigLpSolution& sol) {
  std::vector<double> proposed(static_cast<std::size_t>(g.num_edges()), 0.0);
  for (int v = 0; v < g.num_online(); ++v) {
    const auto& dist = sol.support[static_cast<std::size_t>(v)];
    if (dist.empty()) continue;
    const PrefixMarginals m = PrefixMarginals::from_distribution(dist);
    accumulate_proposals(g, m.output_distribution(), 1.0, proposed);
  }
  const std::vector<double> xt = edge_variables(g, sol);
  double worst = 0.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto ue = static_cast<std::size_t>(e);
    worst = std::max(worst, std::abs(proposed[ue] - g.edge(e).p * xt[ue]));
  }
  return worst;
}

double rounding_error(const KnownIdInput& input, const ConfigIdLpSolution& sol) {
  const StochasticGraph& h = input.type_graph;
  std::vector<std::vector<double>> proposed(
      static_cast<std::size_t>(input.n()),
      std::vector<double>(static_cast<std::size_t>(h.num_edges()), 0.0));
  for (const IdGroup& grp : sol.groups) {
    const PrefixMarginals m = PrefixMarginals::from_distribution(grp.support, grp.r);
    accumulate_proposals(h, m.output_distribution(), grp.r,
                         proposed[static_cast<std::size_t>(grp.arrival)]);
  }
  const auto xt = edge_variables(input, sol);
  double worst = 0.0;
  for (int i = 0; i < input.n(); ++i) {
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      const auto ui = static_cast<std::size_t>(i);
      const auto ue = static_cast<std::size_t>(e);
      worst = std::max(worst, std::abs(proposed[ui][ue] - h.edge(e).p * xt[ui][ue]));
    }
  }
  return worst;
}

std::size_t support_size(const ConfigLpSolution& sol) {
  std::size_t n = 0;
  for (const auto& d : sol.support) n += d.size();
  return n;
}

std::size_t support_size(const ConfigIdLpSolution& sol) {
  std::size_t n = 0;
  for (const auto& grp : sol.groups) n += grp.support.size();
  return n;
}

StochasticGraph random_star(Rng& rng, int k) {
  StochasticGraph g;
  for (int u = 0; u < k; ++u) g.add_offline("u" + std::to_string(u + 1));
  const int v = g.add_online("v");
  for (int u = 0; u < k; ++u) {
    const double p = bernoulli(rng, 0.1) ? 1.0 : uniform01(rng);
    g.add_edge(u, v, p, uniform01(rng));
  }
  switch (uniform_index(rng, 3)) {
    case 0:
      g.set_constraint(v, Patience{1 + uniform_index(rng, k)});
      break;
    case 1: {
      Knapsack ks;
      ks.budget = 0.5 + uniform01(rng);
      for (int u = 0; u < k; ++u) ks.costs.push_back(0.1 + 0.6 * uniform01(rng));
      g.set_constraint(v, ks);
      break;
    }
    default: {
      std::vector<std::uint32_t> sets;
      const int count = 1 + uniform_index(rng, 3);
      for (int s = 0; s < count; ++s) {
        std::uint32_t mask = 0;
        for (int b = 0; b < k; ++b) {
          if (bernoulli(rng, 0.6)) mask |= 1u << b;
        }
        sets.push_back(mask);
      }
      g.set_constraint(v, ExplicitFamily::from_sets(std::move(sets)));
      break;
    }
  }
  return g;
}

}  // namespace stochmatch
