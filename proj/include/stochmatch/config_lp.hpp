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

#ifndef STOCHMATCH_CONFIG_LP_HPP_
#define STOCHMATCH_CONFIG_LP_HPP_

#include <vector>

#include "stochmatch/model.hpp"
#include "stochmatch/simplex.hpp"

namespace stochmatch {

struct WeightedString {
  EdgeString string;
  double mass = 0.0;
};

using StringDistribution = std::vector<WeightedString>;

struct ConfigLpSolution {
  std::vector<StringDistribution> support;  // per online vertex
  double objective = 0.0;
  std::vector<double> alpha;  // per offline vertex
  std::vector<double> beta;   // per online vertex
  int columns = 0;
  int rounds = 0;
};

// Variables x_i(s||b) are kept unscaled: sum_s x_i(s||b) = r_i(b).
struct IdGroup {
  int arrival = 0;
  int type = 0;
  double r = 0.0;
  StringDistribution support;
  double beta = 0.0;
};

struct ConfigIdLpSolution {
  std::vector<IdGroup> groups;  // ordered by (arrival, type)
  double objective = 0.0;
  std::vector<double> alpha;
  int columns = 0;
  int rounds = 0;

  const IdGroup* find(int arrival, int type) const;
};

struct ColumnGenOptions {
  double reduced_cost_tol = 1e-7;
  int max_columns = 10000;
  // Optional initial columns per online vertex (edge ids of the graph).
  std::vector<std::vector<EdgeString>> seed_columns;
  SimplexOptions simplex;
};

ConfigLpSolution solve_lp_config(const StochasticGraph& g,
                                 const ColumnGenOptions& options = {});

ConfigIdLpSolution solve_lp_config_id(const KnownIdInput& input,
                                      const ColumnGenOptions& options = {});

// Every feasible string over p > 0 edges, including the empty string.
std::vector<EdgeString> enumerate_strings(const StochasticGraph& g, int v,
                                          long limit);

// LP-config with all strings materialized; throws kTooLarge past the limit.
ConfigLpSolution solve_lp_config_enumerated(const StochasticGraph& g,
                                            long max_strings = 20000);

// x~_e = sum over strings containing e of q(prefix before e) * x(s).
std::vector<double> edge_variables(const StochasticGraph& g,
                                   const ConfigLpSolution& sol);

// x~_{u,i}(b), indexed [arrival][type-graph edge].
std::vector<std::vector<double>> edge_variables(const KnownIdInput& input,
                                                const ConfigIdLpSolution& sol);

// Accumulates q(prefix) * mass into out[e] for every edge of the support.
void accumulate_edge_variables(const StochasticGraph& g,
                               const StringDistribution& dist,
                               std::vector<double>& out);

// Comparison LPs. All return the optimal value.
double solve_lp_std(const StochasticGraph& g);
double solve_lp_std_unit(const StochasticGraph& g);
double solve_lp_dp(const StochasticGraph& g);
double solve_lp_qc(const StochasticGraph& g);

}  // namespace stochmatch

#endif  // STOCHMATCH_CONFIG_LP_HPP_
