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

#ifndef STOCHMATCH_ORACLES_HPP_
#define STOCHMATCH_ORACLES_HPP_

#include <cstdint>
#include <span>

#include "stochmatch/config_lp.hpp"
#include "stochmatch/model.hpp"

namespace stochmatch {

inline constexpr int kMaxOracleEdges = 12;
inline constexpr int kMaxNonAdaptiveEdges = 9;

// Offline adaptive benchmark. Memoized over (probed-inactive edges,
// matched edges); an active probe is matched at once, and an edge is only
// probed while both endpoints are free.
double brute_force_opt(const StochasticGraph& g,
                       int max_edges = kMaxOracleEdges);

// Best deterministic non-adaptive plan: a fixed probe sequence, feasible for
// every C_v, where an active edge joins the matching when both endpoints
// are still free.
double brute_force_nonadaptive(const StochasticGraph& g,
                               int max_edges = kMaxNonAdaptiveEdges);

enum class ExactPolicy { kGreedyDp, kKnownGraph };

// E[w(M)] of Greedy-DP for a fixed arrival order.
double exact_greedy_dp(const StochasticGraph& g, std::span<const int> order);

// E[w(M)] of the known-graph algorithm for a fixed order, expanding every
// string draw and edge outcome.
double exact_known_graph(const StochasticGraph& g, const ConfigLpSolution& sol,
                         std::span<const int> order, int max_support = 50);

// Dispatcher; the known-graph policy solves LP-config first.
double exact_expectation(ExactPolicy policy, const StochasticGraph& g,
                         std::span<const int> order);

// E[min(Bin(n, p), s)].
double expected_min_binomial(int n, double p, int s);

// Best non-adaptive value on the complete s x n unit-patience graph with
// uniform p: the balanced assignment.
double balanced_nonadaptive_value(int n, double p, int s);

struct GapResult {
  int n = 0;
  double p = 0.0;
  int s = 0;
  std::int64_t trials = 0;
  double adaptive_mean = 0.0;
  double adaptive_ci = 0.0;
  double adaptive_exact = 0.0;
  double nonadaptive_mean = 0.0;
  double nonadaptive_ci = 0.0;
  double nonadaptive_exact = 0.0;
  double jensen_bound = 0.0;
  double ratio = 0.0;
  double ratio_ci = 0.0;
  double exact_ratio = 0.0;
};

// Complete s x n graph, unit patience, unit weights, uniform p. The adaptive
// side runs sequential greedy probing (each arrival probes one free offline
// vertex); the non-adaptive side runs the balanced assignment.
GapResult adaptivity_gap_experiment(int n, double p, int s,
                                    std::int64_t trials, std::uint64_t seed);

}  // namespace stochmatch

#endif  // STOCHMATCH_ORACLES_HPP_
