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

#ifndef STOCHMATCH_CRS_HPP_
#define STOCHMATCH_CRS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stochmatch/random.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

// Rank-one schemes. Each instance handles a single run; offer() is called
// once per arriving element and returns whether that element is accepted.
// Schemes see only the marginal z, the arrival time and the active flag.

// Accepts an active element, while nothing is taken, with probability
// (1/2) / (1 - (1/2) * sum of earlier marginals).
class OcrsHalf {
 public:
  bool offer(double z, bool active, Rng& rng);
  bool accepted() const { return accepted_; }

 private:
  double seen_ = 0.0;
  bool accepted_ = false;
};

// Accepts an active element arriving at time t, while nothing is taken,
// with probability exp(-z * t).
class RcrsExp {
 public:
  bool offer(double z, double time, bool active, Rng& rng);
  bool accepted() const { return accepted_; }

 private:
  bool accepted_ = false;
};

// Baseline: accepts the first active element.
class GreedyCrs {
 public:
  bool offer(bool active);
  bool accepted() const { return accepted_; }

 private:
  bool accepted_ = false;
};

enum class CrsScheme { kOcrsHalf, kRcrs, kGreedy };
enum class CrsMode { kAdversarial, kRandom };

std::string to_string(CrsScheme scheme);

struct ElementEstimate {
  std::int64_t active = 0;
  std::int64_t accepted = 0;
  double estimate = 0.0;
  Interval wilson;
};

struct OrderEstimate {
  std::vector<int> order;  // empty in random mode
  std::vector<ElementEstimate> elements;
  double min_estimate = 1.0;
};

struct SelectabilityReport {
  std::vector<OrderEstimate> orders;
  std::vector<int> worst_order;
  double worst_estimate = 1.0;
  // Elements with equal z pooled (exchangeable under random order).
  std::vector<double> class_z;
  std::vector<ElementEstimate> classes;
};

struct SelectabilityOptions {
  std::int64_t trials = 1000000;
  std::uint64_t seed = 1;
  int sampled_orders = 64;  // adversarial mode with more than 8 elements
};

// Monte Carlo estimates of P[accept i | i active].
SelectabilityReport verify_selectability(CrsScheme scheme,
                                         const std::vector<double>& z,
                                         CrsMode mode,
                                         const SelectabilityOptions& options);

}  // namespace stochmatch

#endif  // STOCHMATCH_CRS_HPP_
