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

#ifndef STOCHMATCH_VERIFY_HPP_
#define STOCHMATCH_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stochmatch/config_lp.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/instance_io.hpp"

namespace stochmatch {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
  Json to_json() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::int64_t crs_trials = 1000000;
  int instances = 40;
};

// Suites: crs, rounding, lp-consistency, benchmarks.
const std::vector<std::string>& verify_suites();
VerifyReport run_verify_suite(const std::string& suite,
                              const VerifyOptions& options = {});

enum class TinyKind { kPatience, kFamily, kKnapsack, kUnbounded };

// Random instance with at most max_edges probeable edges and at most three
// vertices per side. Patience is 1 or 2; families have two generator sets.
StochasticGraph tiny_graph(Rng& rng, TinyKind kind, int max_edges = 9,
                           bool vertex_weighted = false);

// Known-i.d. input over a tiny type graph: n arrivals, at most max_types
// types per row.
KnownIdInput tiny_known_id(Rng& rng, int n, int types, TinyKind kind,
                           bool iid = false);

// max_e |P[propose e] - p_e x~_e| over the exact output law of the
// rounding, for every online vertex.
double rounding_error(const StochasticGraph& g, const ConfigLpSolution& sol);

// Same for known-i.d.: P[v_i has type b and proposes e] = p_e x~_{e,i}(b).
double rounding_error(const KnownIdInput& input, const ConfigIdLpSolution& sol);

// Total support size of an LP solution.
std::size_t support_size(const ConfigLpSolution& sol);
std::size_t support_size(const ConfigIdLpSolution& sol);

// Random star with k edges on one online vertex under a random constraint.
StochasticGraph random_star(Rng& rng, int k);

}  // namespace stochmatch

#endif  // STOCHMATCH_VERIFY_HPP_
