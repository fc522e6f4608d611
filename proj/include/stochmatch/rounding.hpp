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

#ifndef STOCHMATCH_ROUNDING_HPP_
#define STOCHMATCH_ROUNDING_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "stochmatch/config_lp.hpp"
#include "stochmatch/model.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {

// y(s) for the strings of one vertex, stored as a prefix trie. Absent
// strings have y = 0.
class PrefixMarginals {
 public:
  // y(s) = total mass of strings having s as a prefix, divided by `total`.
  static PrefixMarginals from_distribution(const StringDistribution& dist,
                                           double total = 1.0);

  // y(s) = x(s) / q(s without its last edge), where x(s) is the probability
  // that s is a probed prefix. Strings past a p = 1 edge are pruned.
  static PrefixMarginals from_probe_probabilities(const StochasticGraph& g,
                                                  const StringDistribution& x);

  // Throws naming the first prefix whose extensions exceed its mass.
  void validate(double tol = 1e-9) const;

  double y(const EdgeString& s) const;
  double root() const { return nodes_[0].y; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // Exact law of vertex_round's output, from its step probabilities.
  StringDistribution output_distribution() const;

 private:
  friend EdgeString vertex_round(const PrefixMarginals& m, Rng& rng);

  struct Node {
    EdgeId edge = -1;
    int parent = -1;
    double y = 0.0;
    std::vector<int> children;
  };

  int child(int node, EdgeId e) const;
  int ensure_child(int node, EdgeId e);
  EdgeString path(int node) const;

  std::vector<Node> nodes_{Node{}};
};

// Samples a string whose first k characters equal s with probability y(s).
EdgeString vertex_round(const PrefixMarginals& m, Rng& rng);

struct ProbeStep {
  EdgeId edge = 0;
  bool active = false;
};

struct ProposeOutcome {
  std::optional<EdgeId> proposal;
  std::vector<ProbeStep> trace;
};

using ProbeFn = std::function<bool(EdgeId)>;

// Probes s in order and stops at the first active edge.
ProposeOutcome probe_string(const EdgeString& s, const ProbeFn& probe);

// Draws a string for v and probes it. The draw is checked against C_v.
ProposeOutcome vertex_probe(const StochasticGraph& g, int v,
                            const PrefixMarginals& m, const ProbeFn& probe,
                            Rng& rng);

}  // namespace stochmatch

#endif  // STOCHMATCH_ROUNDING_HPP_
