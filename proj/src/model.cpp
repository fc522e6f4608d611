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

#include "stochmatch/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "stochmatch/error.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {

ExplicitFamily ExplicitFamily::from_sets(std::vector<std::uint32_t> sets) {
  std::sort(sets.begin(), sets.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  ExplicitFamily family;
  for (std::uint32_t s : sets) {
    const bool dominated =
        std::any_of(family.generators_.begin(), family.generators_.end(),
                    [s](std::uint32_t g) { return (s & ~g) == 0; });
    if (!dominated) family.generators_.push_back(s);
  }
  return family;
}

bool ExplicitFamily::contains(std::uint32_t mask) const {
  if (mask == 0) return true;
  for (std::uint32_t g : generators_) {
    if ((mask & ~g) == 0) return true;
  }
  return false;
}

int StochasticGraph::add_offline(std::string id, double weight) {
  require(std::isfinite(weight) && weight >= 0.0,
          "offline weight must be finite and nonnegative");
  offline_.push_back({std::move(id), weight});
  return num_offline() - 1;
}

int StochasticGraph::add_online(std::string id, ProbingConstraint constraint) {
  online_.push_back({std::move(id), {}, Patience{}});
  const int v = num_online() - 1;
  set_constraint(v, std::move(constraint));
  return v;
}

EdgeId StochasticGraph::add_edge(int u, int v, double p, double w) {
  require(u >= 0 && u < num_offline(), "edge references unknown offline vertex");
  require(v >= 0 && v < num_online(), "edge references unknown online vertex");
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
          "edge probability must lie in [0, 1]");
  require(std::isfinite(w) && w >= 0.0, "edge weight must be nonnegative");
  require(index_.find({u, v}) == index_.end(), "duplicate edge");
  require(std::holds_alternative<Patience>(online(v).constraint),
          "attach knapsack or family constraints after adding edges");
  const EdgeId e = num_edges();
  edges_.push_back({u, v, degree(v), p, w});
  online_[idx(v)].edges.push_back(e);
  index_[{u, v}] = e;
  return e;
}

void StochasticGraph::validate_constraint(int v,
                                          const ProbingConstraint& c) const {
  const int deg = degree(v);
  if (const auto* pat = std::get_if<Patience>(&c)) {
    require(pat->limit >= 1, "patience must be a positive integer");
  } else if (const auto* ks = std::get_if<Knapsack>(&c)) {
    require(std::isfinite(ks->budget) && ks->budget >= 0.0,
            "knapsack budget must be nonnegative");
    require(static_cast<int>(ks->costs.size()) == deg,
            "knapsack needs one cost per incident edge");
    for (double cost : ks->costs) {
      require(std::isfinite(cost) && cost >= 0.0,
              "knapsack costs must be nonnegative");
    }
  } else {
    const auto& fam = std::get<ExplicitFamily>(c);
    require(deg <= 32, "family constraints support at most 32 incident edges");
    const std::uint64_t all = deg == 32 ? 0xffffffffULL : ((1ULL << deg) - 1);
    for (std::uint32_t s : fam.generators()) {
      require((s & ~all) == 0, "family set references a missing edge");
    }
  }
}

void StochasticGraph::set_constraint(int v, ProbingConstraint constraint) {
  require(v >= 0 && v < num_online(), "unknown online vertex");
  validate_constraint(v, constraint);
  online_[idx(v)].constraint = std::move(constraint);
}

std::optional<EdgeId> StochasticGraph::edge_between(int u, int v) const {
  auto it = index_.find({u, v});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> StochasticGraph::find_offline(const std::string& id) const {
  for (int u = 0; u < num_offline(); ++u) {
    if (offline_[idx(u)].id == id) return u;
  }
  return std::nullopt;
}

std::optional<int> StochasticGraph::find_online(const std::string& id) const {
  for (int v = 0; v < num_online(); ++v) {
    if (online_[idx(v)].id == id) return v;
  }
  return std::nullopt;
}

bool StochasticGraph::is_vertex_weighted(double tol) const {
  for (const Edge& e : edges_) {
    if (e.p > 0.0 && std::abs(e.w - offline(e.offline).weight) > tol) {
      return false;
    }
  }
  return true;
}

double q(const StochasticGraph& g, std::span<const EdgeId> s) {
  double prod = 1.0;
  for (EdgeId e : s) prod *= 1.0 - g.edge(e).p;
  return prod;
}

double val(const StochasticGraph& g, std::span<const EdgeId> s) {
  double total = 0.0;
  double survive = 1.0;
  for (EdgeId e : s) {
    const Edge& edge = g.edge(e);
    total += edge.w * edge.p * survive;
    survive *= 1.0 - edge.p;
  }
  return total;
}

bool admits_mask(const ProbingConstraint& c, std::uint64_t mask) {
  if (const auto* pat = std::get_if<Patience>(&c)) {
    return std::popcount(mask) <= pat->limit;
  }
  if (const auto* ks = std::get_if<Knapsack>(&c)) {
    double used = 0.0;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
      const int k = std::countr_zero(m);
      if (k >= static_cast<int>(ks->costs.size())) return false;
      used += ks->costs[static_cast<std::size_t>(k)];
    }
    return used <= ks->budget + 1e-12;
  }
  if (mask >> 32) return false;
  return std::get<ExplicitFamily>(c).contains(static_cast<std::uint32_t>(mask));
}

bool admits_slots(const ProbingConstraint& c, std::span<const int> slots) {
  if (const auto* pat = std::get_if<Patience>(&c)) {
    return static_cast<long>(slots.size()) <= pat->limit;
  }
  if (const auto* ks = std::get_if<Knapsack>(&c)) {
    double used = 0.0;
    for (int k : slots) used += ks->costs.at(static_cast<std::size_t>(k));
    return used <= ks->budget + 1e-12;
  }
  std::uint64_t mask = 0;
  for (int k : slots) {
    if (k >= 32) return false;
    mask |= 1ULL << k;
  }
  return admits_mask(c, mask);
}

bool membership(const StochasticGraph& g, int v, std::span<const EdgeId> s) {
  std::vector<int> slots;
  slots.reserve(s.size());
  for (EdgeId e : s) {
    require(e >= 0 && e < g.num_edges(), "string references unknown edge");
    const Edge& edge = g.edge(e);
    require(edge.online == v, "string edge is not incident to the vertex");
    slots.push_back(edge.slot);
  }
  std::vector<int> sorted = slots;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "string repeats an edge");
  return admits_slots(g.online(v).constraint, slots);
}

bool is_unconstrained(const StochasticGraph& g, int v) {
  const ProbingConstraint& c = g.online(v).constraint;
  const int deg = g.degree(v);
  if (const auto* pat = std::get_if<Patience>(&c)) return pat->limit >= deg;
  if (const auto* ks = std::get_if<Knapsack>(&c)) {
    double total = 0.0;
    for (double cost : ks->costs) total += cost;
    return total <= ks->budget + 1e-12;
  }
  if (deg > 32) return false;
  const std::uint64_t all = deg == 32 ? 0xffffffffULL : ((1ULL << deg) - 1);
  return admits_mask(c, all);
}

EdgeStateSample sample_states(const StochasticGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  EdgeStateSample sample;
  sample.seed = seed;
  sample.states.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const Edge& e : g.edges()) {
    sample.states.push_back(bernoulli(rng, e.p) ? 1 : 0);
  }
  return sample;
}

KnownIdInput make_known_id(StochasticGraph type_graph,
                           std::vector<std::vector<TypeProb>> rows) {
  KnownIdInput input;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<TypeProb> kept;
    double sum = 0.0;
    for (const TypeProb& tp : rows[i]) {
      require(tp.type >= 0 && tp.type < type_graph.num_online(),
              "distribution references unknown type");
      require(std::isfinite(tp.prob) && tp.prob >= 0.0 && tp.prob <= 1.0,
              "type probability must lie in [0, 1]");
      sum += tp.prob;
      if (tp.prob > 0.0) kept.push_back(tp);
    }
    require(std::abs(sum - 1.0) <= kSumTolerance,
            "distribution row " + std::to_string(i) + " does not sum to 1");
    std::sort(kept.begin(), kept.end(),
              [](const TypeProb& a, const TypeProb& b) { return a.type < b.type; });
    for (std::size_t k = 1; k < kept.size(); ++k) {
      require(kept[k].type != kept[k - 1].type,
              "distribution row lists a type twice");
    }
    input.rows.push_back(std::move(kept));
  }
  input.type_graph = std::move(type_graph);
  return input;
}

KnownIdInput point_mass_input(const StochasticGraph& g) {
  std::vector<std::vector<TypeProb>> rows;
  for (int b = 0; b < g.num_online(); ++b) rows.push_back({{b, 1.0}});
  return make_known_id(g, std::move(rows));
}

namespace {

int draw_row(const std::vector<TypeProb>& row, Rng& rng) {
  const double r = uniform01(rng);
  double acc = 0.0;
  for (const TypeProb& tp : row) {
    acc += tp.prob;
    if (r < acc) return tp.type;
  }
  return row.back().type;
}

}  // namespace

std::vector<int> draw_types(const KnownIdInput& input, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> types;
  types.reserve(input.rows.size());
  for (const auto& row : input.rows) types.push_back(draw_row(row, rng));
  return types;
}

StochasticGraph realize_types(const KnownIdInput& input,
                              std::span<const int> types) {
  const StochasticGraph& h = input.type_graph;
  StochasticGraph g;
  for (int u = 0; u < h.num_offline(); ++u) {
    g.add_offline(h.offline(u).id, h.offline(u).weight);
  }
  for (std::size_t i = 0; i < types.size(); ++i) {
    const OnlineVertex& b = h.online(types[i]);
    const int v = g.add_online(b.id + "#" + std::to_string(i));
    for (EdgeId e : b.edges) {
      const Edge& edge = h.edge(e);
      g.add_edge(edge.offline, v, edge.p, edge.w);
    }
    g.set_constraint(v, b.constraint);
  }
  return g;
}

DrawnInstance draw_instance(const KnownIdInput& input, std::uint64_t seed) {
  DrawnInstance out;
  out.types = draw_types(input, seed);
  out.graph = realize_types(input, out.types);
  return out;
}

Subgraph induced_online_subgraph(const StochasticGraph& g,
                                 std::span<const int> online) {
  Subgraph sub;
  for (int u = 0; u < g.num_offline(); ++u) {
    sub.graph.add_offline(g.offline(u).id, g.offline(u).weight);
  }
  for (int v : online) {
    const OnlineVertex& src = g.online(v);
    const int nv = sub.graph.add_online(src.id);
    sub.online_map.push_back(v);
    for (EdgeId e : src.edges) {
      const Edge& edge = g.edge(e);
      sub.graph.add_edge(edge.offline, nv, edge.p, edge.w);
      sub.edge_map.push_back(e);
    }
    sub.graph.set_constraint(nv, src.constraint);
  }
  return sub;
}

}  // namespace stochmatch
