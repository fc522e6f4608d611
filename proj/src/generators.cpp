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

#include "stochmatch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stochmatch/error.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

namespace {

double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Typed reader over a params object that rejects unknown keys.
class Params {
 public:
  explicit Params(const Json& j) : j_(j.is_null() ? Json::object() : j) {
    require(j_.is_object(), "generator params must be a JSON object");
  }

  int integer(const char* key, int def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    const Json& v = j_.at(key);
    require(v.is_number_integer(), std::string("param \"") + key + "\" must be an integer");
    return v.get<int>();
  }
  double real(const char* key, double def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    return json_number(j_.at(key), key);
  }
  bool flag(const char* key, bool def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    require(j_.at(key).is_boolean(), std::string("param \"") + key + "\" must be a boolean");
    return j_.at(key).get<bool>();
  }
  std::string text(const char* key, const std::string& def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    require(j_.at(key).is_string(), std::string("param \"") + key + "\" must be a string");
    return j_.at(key).get<std::string>();
  }
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      require(used_.count(key) > 0, "unknown generator param \"" + key + "\"");
    }
  }

 private:
  Json j_;
  std::set<std::string> used_;
};

RandomGraphParams read_graph_params(Params& in, int offline, int online) {
  RandomGraphParams p;
  p.offline = in.integer("offline", offline);
  p.online = in.integer("online", online);
  p.density = in.real("density", p.density);
  p.p_min = in.real("p_min", p.p_min);
  p.p_max = in.real("p_max", p.p_max);
  p.w_min = in.real("w_min", p.w_min);
  p.w_max = in.real("w_max", p.w_max);
  p.vertex_weighted = in.flag("vertex_weighted", p.vertex_weighted);
  const std::string c = in.text("constraint", "patience");
  if (c == "patience") {
    p.constraint = GenConstraint::kPatience;
  } else if (c == "unbounded") {
    p.constraint = GenConstraint::kUnbounded;
  } else if (c == "knapsack") {
    p.constraint = GenConstraint::kKnapsack;
  } else if (c == "family") {
    p.constraint = GenConstraint::kFamily;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown constraint kind \"" + c + "\"");
  }
  p.patience_max = in.integer("l", p.patience_max);
  p.budget = in.real("budget", p.budget);
  p.cost_min = in.real("cost_min", p.cost_min);
  p.cost_max = in.real("cost_max", p.cost_max);
  p.family_sets = in.integer("family_sets", p.family_sets);
  return p;
}

}  // namespace

StochasticGraph er_gap_graph(int n, double p, int s) {
  require(n >= 1 && s >= 1, "er-gap needs n >= 1 and s >= 1");
  require(p >= 0.0 && p <= 1.0, "er-gap needs p in [0, 1]");
  StochasticGraph g;
  for (int u = 0; u < s; ++u) g.add_offline("u" + std::to_string(u + 1), 1.0);
  for (int v = 0; v < n; ++v) {
    const int vi = g.add_online("v" + std::to_string(v + 1), Patience{1});
    for (int u = 0; u < s; ++u) g.add_edge(u, vi, p, 1.0);
  }
  return g;
}

StochasticGraph nonmonotone_star(double eps) {
  require(eps > 0.0 && eps <= 1.0 / 12.0, "eps must lie in (0, 1/12]");
  StochasticGraph g;
  const double weights[] = {1.0 + eps, 1.0 + eps / 2.0, 1.0, 1.0};
  const double probs[] = {1.0 / 3.0, 1.0, 0.5, 2.0 / 3.0};
  for (int u = 0; u < 4; ++u) g.add_offline("u" + std::to_string(u + 1), weights[u]);
  const int v = g.add_online("v", Patience{2});
  for (int u = 0; u < 4; ++u) g.add_edge(u, v, probs[u], weights[u]);
  return g;
}

StochasticGraph random_graph(const RandomGraphParams& params, Rng& rng) {
  require(params.offline >= 1 && params.online >= 1, "need at least one vertex per side");
  require(params.density >= 0.0 && params.density <= 1.0, "density must lie in [0, 1]");
  require(0.0 <= params.p_min && params.p_min <= params.p_max && params.p_max <= 1.0,
          "need 0 <= p_min <= p_max <= 1");
  require(0.0 <= params.w_min && params.w_min <= params.w_max, "need 0 <= w_min <= w_max");
  require(params.patience_max >= 1, "patience must be positive");
  require(0.0 <= params.cost_min && params.cost_min <= params.cost_max,
          "need 0 <= cost_min <= cost_max");
  StochasticGraph g;
  for (int u = 0; u < params.offline; ++u) {
    const double w = params.vertex_weighted ? uniform_in(rng, params.w_min, params.w_max) : 0.0;
    g.add_offline("u" + std::to_string(u + 1), w);
  }
  for (int v = 0; v < params.online; ++v) {
    const int vi = g.add_online(params.online_prefix + std::to_string(v + 1));
    for (int u = 0; u < params.offline; ++u) {
      if (!bernoulli(rng, params.density)) continue;
      const double p = uniform_in(rng, params.p_min, params.p_max);
      const double w = params.vertex_weighted ? g.offline(u).weight
                                              : uniform_in(rng, params.w_min, params.w_max);
      g.add_edge(u, vi, p, w);
    }
    const int deg = g.degree(vi);
    switch (params.constraint) {
      case GenConstraint::kPatience:
        g.set_constraint(vi, Patience{1 + uniform_index(rng, params.patience_max)});
        break;
      case GenConstraint::kUnbounded:
        break;
      case GenConstraint::kKnapsack: {
        Knapsack ks;
        ks.budget = params.budget;
        for (int k = 0; k < deg; ++k) {
          ks.costs.push_back(uniform_in(rng, params.cost_min, params.cost_max));
        }
        g.set_constraint(vi, ks);
        break;
      }
      case GenConstraint::kFamily: {
        require(deg <= 32, "family constraints allow at most 32 edges");
        std::vector<std::uint32_t> sets;
        for (int k = 0; k < params.family_sets; ++k) {
          std::uint32_t mask = 0;
          for (int b = 0; b < deg; ++b) {
            if (bernoulli(rng, 0.5)) mask |= 1u << b;
          }
          sets.push_back(mask);
        }
        g.set_constraint(vi, ExplicitFamily::from_sets(std::move(sets)));
        break;
      }
    }
  }
  return g;
}

KnownIdInput random_types(const RandomTypesParams& params, Rng& rng) {
  require(params.arrivals >= 1, "need at least one arrival");
  require(params.support_max >= 1, "row support must be positive");
  RandomGraphParams gp = params.graph;
  gp.online_prefix = "b";
  StochasticGraph types = random_graph(gp, rng);
  const int nb = types.num_online();
  auto random_row = [&] {
    std::vector<int> all(static_cast<std::size_t>(nb));
    std::iota(all.begin(), all.end(), 0);
    shuffle_in_place(all, rng);
    const int k = 1 + uniform_index(rng, std::min(params.support_max, nb));
    std::vector<TypeProb> row;
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      const double m = 0.1 + uniform01(rng);
      row.push_back({all[static_cast<std::size_t>(j)], m});
      total += m;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      row[j].prob /= total;
      acc += row[j].prob;
    }
    row.back().prob = 1.0 - acc;
    return row;
  };
  std::vector<std::vector<TypeProb>> rows;
  if (params.iid) {
    rows.assign(static_cast<std::size_t>(params.arrivals), random_row());
  } else {
    for (int i = 0; i < params.arrivals; ++i) rows.push_back(random_row());
  }
  return make_known_id(std::move(types), std::move(rows));
}

const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> families = {
      "er-gap", "nonmonotone-star", "random-weighted", "iid-types", "id-types"};
  return families;
}

Json generate_instance(const std::string& family, const Json& params,
                       std::uint64_t seed) {
  Params in(params);
  Rng rng = make_rng(seed, 0);
  Json out;
  if (family == "er-gap") {
    const int n = in.integer("n", 200);
    const double p = in.real("p", 0.02);
    const int s = in.integer("s", std::max(1, static_cast<int>(std::floor(0.9 * p * n))));
    in.finish();
    out = graph_to_json(er_gap_graph(n, p, s));
  } else if (family == "nonmonotone-star") {
    const double eps = in.real("eps", 1.0 / 12.0);
    in.finish();
    out = graph_to_json(nonmonotone_star(eps));
  } else if (family == "random-weighted") {
    const RandomGraphParams gp = read_graph_params(in, 3, 2);
    in.finish();
    out = graph_to_json(random_graph(gp, rng));
  } else if (family == "iid-types" || family == "id-types") {
    RandomTypesParams tp;
    tp.graph = read_graph_params(in, 3, 3);
    tp.arrivals = in.integer("n", tp.arrivals);
    tp.support_max = in.integer("support", tp.support_max);
    tp.iid = family == "iid-types";
    in.finish();
    out = known_id_to_json(random_types(tp, rng));
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown generator family \"" + family + "\"");
  }
  out["id"] = family + "-" + std::to_string(seed);
  return out;
}

}  // namespace stochmatch
