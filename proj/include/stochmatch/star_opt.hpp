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

#ifndef STOCHMATCH_STAR_OPT_HPP_
#define STOCHMATCH_STAR_OPT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stochmatch/model.hpp"

namespace stochmatch {

struct StarItem {
  EdgeId edge = 0;
  int slot = 0;
  double p = 0.0;
  double weight = 0.0;  // effective weight; may be negative when pricing
};

// One online vertex restricted to an available offline set. The constraint
// is borrowed from the graph and must outlive the instance.
struct StarInstance {
  std::vector<StarItem> items;
  const ProbingConstraint* constraint = nullptr;
};

struct StarPlan {
  EdgeString string;
  double value = 0.0;
};

struct PricedColumn {
  StarPlan plan;
  double reduced_cost = 0.0;
};

// Edges of v with p > 0 whose offline endpoint is available. An empty
// `available` means all offline vertices.
StarInstance make_star(const StochasticGraph& g, int v,
                       std::span<const std::uint8_t> available = {});

StarPlan dp_opt(const StarInstance& inst);

// OPT(v, R) with R given as an availability mask over offline vertices.
StarPlan dp_opt(const StochasticGraph& g, int v,
                std::span<const std::uint8_t> available = {});

// Reduced-cost pricing: weights w_e - alpha_u, negative ones dropped.
PricedColumn price_column(const StochasticGraph& g, int v,
                          std::span<const double> alpha, double beta);

// Maximum of val over every feasible ordered string, by enumeration.
double exhaustive_star_value(const StarInstance& inst);

struct Rankability {
  bool rankable = false;
  std::vector<EdgeId> ranking;
};

// Sufficient conditions: unit or unlimited patience, patience with agreeing
// weights and probabilities, unweighted knapsack with anti-agreeing costs.
// Falls back to the exhaustive verifier when degree <= 12.
Rankability is_rankable(const StochasticGraph& g, int v);

// Greedy ranking string: scan the ranking, keep an edge when its offline
// vertex is available, p > 0, and the prefix stays feasible.
EdgeString ranking_string(const StochasticGraph& g, int v,
                          std::span<const EdgeId> ranking,
                          std::span<const std::uint8_t> available);

// Checks val(ranking_string(R)) == OPT(v, R) for every R within ∂(v).
// Returns the first disagreeing R as a slot mask, or nullopt.
std::optional<std::uint64_t> find_ranking_violation(
    const StochasticGraph& g, int v, std::span<const EdgeId> ranking,
    double tol = 1e-12);

// Tries the standard candidate orders, and every order when degree <= 8.
std::optional<std::vector<EdgeId>> find_ranking_exhaustive(
    const StochasticGraph& g, int v);

}  // namespace stochmatch

#endif  // STOCHMATCH_STAR_OPT_HPP_
