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

#ifndef STOCHMATCH_GENERATORS_HPP_
#define STOCHMATCH_GENERATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stochmatch/instance_io.hpp"
#include "stochmatch/model.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {

// Complete s x n graph, unit patience, unit weights, uniform p.
StochasticGraph er_gap_graph(int n, double p, int s);

// One online vertex with patience 2 and four offline vertices
// u1..u4: p = (1/3, 1, 1/2, 2/3), vertex weights (1+eps, 1+eps/2, 1, 1).
// Removing u2 flips the optimal probe set from {u1,u2} to {u3,u4}.
StochasticGraph nonmonotone_star(double eps);

enum class GenConstraint { kPatience, kUnbounded, kKnapsack, kFamily };

struct RandomGraphParams {
  int offline = 3;
  int online = 2;
  double density = 1.0;  // probability that a pair carries an edge
  double p_min = 0.05, p_max = 0.95;
  double w_min = 0.1, w_max = 1.0;
  bool vertex_weighted = false;
  GenConstraint constraint = GenConstraint::kPatience;
  int patience_max = 2;   // patience drawn uniformly from [1, patience_max]
  double budget = 1.0;
  double cost_min = 0.2, cost_max = 0.8;
  int family_sets = 2;    // random generator sets per vertex
  std::string online_prefix = "v";
};

StochasticGraph random_graph(const RandomGraphParams& params, Rng& rng);

struct RandomTypesParams {
  RandomGraphParams graph;  // graph.online is the number of types
  int arrivals = 3;
  bool iid = false;
  int support_max = 3;      // types per row, at most graph.online
};

KnownIdInput random_types(const RandomTypesParams& params, Rng& rng);

// Families: er-gap, nonmonotone-star, random-weighted, iid-types, id-types.
// Parameters come as a JSON object; unknown keys are rejected.
Json generate_instance(const std::string& family, const Json& params,
                       std::uint64_t seed);
const std::vector<std::string>& generator_families();

}  // namespace stochmatch

#endif  // STOCHMATCH_GENERATORS_HPP_
