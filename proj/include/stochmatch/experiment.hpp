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

#ifndef STOCHMATCH_EXPERIMENT_HPP_
#define STOCHMATCH_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochmatch/config_lp.hpp"
#include "stochmatch/instance_io.hpp"
#include "stochmatch/online.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

enum class LpKind { kConfig, kConfigId, kStd, kStdUnit, kDp, kQc };

LpKind parse_lp_kind(const std::string& name);
std::string to_string(LpKind kind);

// LP value plus a printable summary. Only the configuration LPs carry a
// support and duals.
struct LpReport {
  LpKind kind = LpKind::kConfig;
  double objective = 0.0;
  std::size_t columns = 0;
  int rounds = 0;
  std::vector<std::size_t> support_sizes;  // per online vertex or (i,b) group
  std::vector<double> alpha;               // offline duals
  Json to_json() const;
};

LpReport solve_lp(const Instance& inst, LpKind kind,
                  const ColumnGenOptions& options = {});

enum class Algorithm {
  kKnownGraph, kKnownId, kKnownIdOcrs, kKnownIdRcrs, kSecretary, kGreedyDp
};

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);

// "rom", "aom:<i,j,...>" (0-based arrival indices), "aom:worst" (every
// permutation) or "aom:worst<k>" (k sampled permutations).
struct ArrivalSpec {
  enum class Kind { kRandom, kFixed, kWorst } kind = Kind::kRandom;
  std::vector<int> permutation;
  int sampled = 0;  // 0: enumerate all
};

ArrivalSpec parse_arrival(const std::string& text);

struct SimulationConfig {
  Algorithm algorithm = Algorithm::kGreedyDp;
  ArrivalSpec arrival;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  // Trials per permutation when screening for the worst order.
  std::int64_t screen_trials = 20000;
  bool brute_force = true;
  ColumnGenOptions lp_options;
};

struct ResultRow {
  std::string instance;
  std::string algorithm;
  std::string arrival;
  std::int64_t trials = 0;
  double mean = 0.0;
  double ci99 = 0.0;
  std::string lp;  // name of the reference LP
  double lp_value = 0.0;
  std::optional<double> opt;  // brute-force OPT(G) when small enough
  double ratio = 0.0;         // mean / lp_value
  double sem = 0.0;

  Json to_json() const;
};

std::string csv_header();
std::string to_csv(const ResultRow& row);

// Runs the algorithm for the configured trial count. Deterministic in the
// seed. Known-i.d. inputs feed the known-i.d. algorithms directly; other
// algorithms draw a fresh instance per trial where that is meaningful.
ResultRow simulate(const Instance& inst, const SimulationConfig& config);

// Mean weight of a policy under a fixed arrival model.
RunningStats estimate_known_graph(const StochasticGraph& g,
                                  const ConfigLpSolution& sol,
                                  const ArrivalModel& model,
                                  std::int64_t trials, std::uint64_t seed);
RunningStats estimate_known_id(const KnownIdInput& input,
                               const ConfigIdLpSolution& sol, IdMode mode,
                               const ArrivalModel& model, std::int64_t trials,
                               std::uint64_t seed);
RunningStats estimate_greedy_dp(const StochasticGraph& g,
                                const ArrivalModel& model, std::int64_t trials,
                                std::uint64_t seed);
RunningStats estimate_secretary(const StochasticGraph& g,
                                const ArrivalModel& model, std::int64_t trials,
                                std::uint64_t seed);

}  // namespace stochmatch

#endif  // STOCHMATCH_EXPERIMENT_HPP_
