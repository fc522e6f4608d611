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

#ifndef STOCHMATCH_MODEL_HPP_
#define STOCHMATCH_MODEL_HPP_

#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stochmatch {

using EdgeId = int;
using EdgeString = std::vector<EdgeId>;

inline constexpr int kUnboundedPatience = INT_MAX;
inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kLpTolerance = 1e-6;

struct Patience {
  int limit = kUnboundedPatience;
};

// Costs are indexed by slot, the position of an edge in its vertex's
// incident list.
struct Knapsack {
  double budget = 0.0;
  std::vector<double> costs;
};

// Feasible slot sets, kept as the maximal generators of a downward-closed
// family over at most 32 slots.
class ExplicitFamily {
 public:
  ExplicitFamily() = default;
  static ExplicitFamily from_sets(std::vector<std::uint32_t> sets);

  bool contains(std::uint32_t mask) const;
  const std::vector<std::uint32_t>& generators() const { return generators_; }

 private:
  std::vector<std::uint32_t> generators_;
};

using ProbingConstraint = std::variant<Patience, Knapsack, ExplicitFamily>;

struct OfflineVertex {
  std::string id;
  double weight = 0.0;
};

struct OnlineVertex {
  std::string id;
  std::vector<EdgeId> edges;
  ProbingConstraint constraint = Patience{};
};

struct Edge {
  int offline = 0;
  int online = 0;
  int slot = 0;
  double p = 0.0;
  double w = 0.0;
};

class StochasticGraph {
 public:
  int add_offline(std::string id, double weight = 0.0);
  int add_online(std::string id, ProbingConstraint constraint = Patience{});
  // Edges must be added before a knapsack or family constraint is attached.
  EdgeId add_edge(int u, int v, double p, double w);
  void set_constraint(int v, ProbingConstraint constraint);

  int num_offline() const { return static_cast<int>(offline_.size()); }
  int num_online() const { return static_cast<int>(online_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const OfflineVertex& offline(int u) const { return offline_[idx(u)]; }
  const OnlineVertex& online(int v) const { return online_[idx(v)]; }
  const Edge& edge(EdgeId e) const { return edges_[idx(e)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<EdgeId> edge_between(int u, int v) const;
  int degree(int v) const { return static_cast<int>(online(v).edges.size()); }

  std::optional<int> find_offline(const std::string& id) const;
  std::optional<int> find_online(const std::string& id) const;

  // True when every edge with p > 0 carries its offline vertex's weight.
  bool is_vertex_weighted(double tol = 1e-12) const;

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  void validate_constraint(int v, const ProbingConstraint& c) const;

  std::vector<OfflineVertex> offline_;
  std::vector<OnlineVertex> online_;
  std::vector<Edge> edges_;
  std::map<std::pair<int, int>, EdgeId> index_;
};

// Product of (1 - p) over the string; 1 for the empty string.
double q(const StochasticGraph& g, std::span<const EdgeId> s);
// Expected weight of the first active edge when probing s in order.
double val(const StochasticGraph& g, std::span<const EdgeId> s);

// Slot-set feasibility; `mask` has bit k set when slot k is chosen.
bool admits_mask(const ProbingConstraint& c, std::uint64_t mask);
bool admits_slots(const ProbingConstraint& c, std::span<const int> slots);

// Membership of s in C_v. Throws if s repeats an edge or leaves ∂(v).
bool membership(const StochasticGraph& g, int v, std::span<const EdgeId> s);

// True when every subset of ∂(v) is feasible.
bool is_unconstrained(const StochasticGraph& g, int v);

struct EdgeStateSample {
  std::vector<std::uint8_t> states;
  std::uint64_t seed = 0;
};

EdgeStateSample sample_states(const StochasticGraph& g, std::uint64_t seed);

struct TypeProb {
  int type = 0;
  double prob = 0.0;
};

// Type graph H plus one distribution row per arrival.
struct KnownIdInput {
  StochasticGraph type_graph;
  std::vector<std::vector<TypeProb>> rows;

  int n() const { return static_cast<int>(rows.size()); }
};

// Validates rows (sum to 1 within 1e-9) and drops zero-mass types.
KnownIdInput make_known_id(StochasticGraph type_graph,
                           std::vector<std::vector<TypeProb>> rows);

// Type graph with every type as a point-mass arrival, in order.
KnownIdInput point_mass_input(const StochasticGraph& g);

struct DrawnInstance {
  StochasticGraph graph;
  std::vector<int> types;
};

std::vector<int> draw_types(const KnownIdInput& input, std::uint64_t seed);
StochasticGraph realize_types(const KnownIdInput& input,
                              std::span<const int> types);
DrawnInstance draw_instance(const KnownIdInput& input, std::uint64_t seed);

// Induced subgraph on a subset of online vertices (all offline kept).
struct Subgraph {
  StochasticGraph graph;
  std::vector<int> online_map;   // new online index -> original
  std::vector<EdgeId> edge_map;  // new edge id -> original
};

Subgraph induced_online_subgraph(const StochasticGraph& g,
                                 std::span<const int> online);

}  // namespace stochmatch

#endif  // STOCHMATCH_MODEL_HPP_
