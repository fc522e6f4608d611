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

#ifndef STOCHMATCH_ONLINE_HPP_
#define STOCHMATCH_ONLINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "stochmatch/config_lp.hpp"
#include "stochmatch/model.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/rounding.hpp"

namespace stochmatch {

struct ArrivalOrder {
  std::vector<int> order;     // order[t] = arrival index at step t
  std::vector<double> times;  // arrival time of step t, increasing
};

class ArrivalModel {
 public:
  static ArrivalModel adversarial(std::vector<int> permutation);
  static ArrivalModel random_order();

  bool is_random() const { return random_; }
  const std::vector<int>& permutation() const { return permutation_; }

  // Adversarial orders get evenly spaced times; random orders get sorted
  // uniform times.
  ArrivalOrder realize(int n, Rng& rng) const;

 private:
  bool random_ = true;
  std::vector<int> permutation_;
};

struct Match {
  int arrival = 0;
  int offline = 0;
  EdgeId edge = 0;
  double weight = 0.0;
};

struct MatchingResult {
  std::vector<Match> matches;
  double weight = 0.0;
  std::vector<int> online_vertex;                // per arrival: vertex probed
  std::vector<std::vector<ProbeStep>> traces;    // per arrival
  std::vector<std::uint8_t> offline_matched;
  // Per step t: weight of the proposal (0 when none) and whether its
  // offline vertex was still free (-1 when no proposal).
  std::vector<double> proposal_weight;
  std::vector<std::int8_t> proposal_available;
};

// Throws kInternal when the result is not a valid probe-commit matching
// on g (online_vertex maps arrivals to vertices of g).
void check_matching(const StochasticGraph& g, const MatchingResult& r);

class KnownGraphPolicy {
 public:
  KnownGraphPolicy(const StochasticGraph& g, const ConfigLpSolution& sol);
  MatchingResult run(const ArrivalOrder& arrival, Rng& rng) const;

 private:
  const StochasticGraph& g_;
  std::vector<PrefixMarginals> marginals_;
};

enum class IdMode { kPlain, kOcrs, kRcrs };

class KnownIdPolicy {
 public:
  KnownIdPolicy(const KnownIdInput& input, const ConfigIdLpSolution& sol,
                IdMode mode);
  MatchingResult run(const ArrivalOrder& arrival, Rng& rng) const;

  // z_{u,i} = sum_b p_{u,b} x~_{u,i}(b), indexed [u][i].
  const std::vector<std::vector<double>>& marginals() const { return z_; }

 private:
  const KnownIdInput& input_;
  IdMode mode_;
  std::vector<std::map<int, PrefixMarginals>> conditional_;  // [i][b]
  std::vector<std::vector<double>> z_;
};

// Passes while t < floor(n/e) (1-indexed), then solves LP-config on the
// arrived subgraph and probes. LP solutions are memoized by arrived set.
class SecretaryPolicy {
 public:
  explicit SecretaryPolicy(const StochasticGraph& g);
  MatchingResult run(const ArrivalOrder& arrival, Rng& rng) const;
  int pass_count() const { return pass_; }
  std::size_t cached_solves() const;

 private:
  struct Solved {
    std::vector<int> vertices;  // sorted original online indices
    std::vector<PrefixMarginals> marginals;  // per position, original edges
  };
  std::shared_ptr<const Solved> solve(std::uint64_t mask) const;

  const StochasticGraph& g_;
  int pass_ = 0;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, std::shared_ptr<const Solved>> cache_;
};

class GreedyDpPolicy {
 public:
  explicit GreedyDpPolicy(const StochasticGraph& g);
  MatchingResult run(const ArrivalOrder& arrival, Rng& rng) const;

 private:
  const StochasticGraph& g_;
};

}  // namespace stochmatch

#endif  // STOCHMATCH_ONLINE_HPP_
