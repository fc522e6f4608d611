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

#include "stochmatch/crs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "stochmatch/error.hpp"

namespace stochmatch {

bool OcrsHalf::offer(double z, bool active, Rng& rng) {
  const double before = seen_;
  seen_ += z;
  if (accepted_ || !active) return false;
  const double prob = 0.5 / (1.0 - 0.5 * before);
  if (!(prob >= 0.0 && prob <= 1.0 + 1e-12)) {
    fail(ErrorCode::kInvalidArgument,
         "OCRS acceptance probability left [0, 1]; marginals exceed 1");
  }
  accepted_ = bernoulli(rng, prob);
  return accepted_;
}

bool RcrsExp::offer(double z, double time, bool active, Rng& rng) {
  if (accepted_ || !active) return false;
  accepted_ = bernoulli(rng, std::exp(-z * time));
  return accepted_;
}

bool GreedyCrs::offer(bool active) {
  if (accepted_ || !active) return false;
  accepted_ = true;
  return true;
}

std::string to_string(CrsScheme scheme) {
  switch (scheme) {
    case CrsScheme::kOcrsHalf: return "ocrs-half";
    case CrsScheme::kRcrs: return "rcrs";
    case CrsScheme::kGreedy: return "greedy";
  }
  return "unknown";
}

namespace {

struct Counts {
  std::vector<std::int64_t> active, accepted;
  void merge(const Counts& o) {
    for (std::size_t i = 0; i < active.size(); ++i) {
      active[i] += o.active[i];
      accepted[i] += o.accepted[i];
    }
  }
};

ElementEstimate estimate(std::int64_t active, std::int64_t accepted) {
  ElementEstimate e;
  e.active = active;
  e.accepted = accepted;
  e.estimate = active > 0 ? static_cast<double>(accepted) / static_cast<double>(active) : 0.0;
  e.wilson = wilson_interval(accepted, active);
  return e;
}

// One run over a fixed order (`order` non-empty) or uniform times.
void run_once(CrsScheme scheme, const std::vector<double>& z,
              const std::vector<int>& order, Counts& c, Rng& rng) {
  const int k = static_cast<int>(z.size());
  thread_local std::vector<std::pair<double, int>> arrivals;
  arrivals.clear();
  if (order.empty()) {
    for (int i = 0; i < k; ++i) arrivals.emplace_back(uniform01(rng), i);
    std::sort(arrivals.begin(), arrivals.end());
  } else {
    for (int t = 0; t < k; ++t) {
      arrivals.emplace_back(static_cast<double>(t + 1) / (k + 1), order[static_cast<std::size_t>(t)]);
    }
  }
  OcrsHalf ocrs;
  RcrsExp rcrs;
  GreedyCrs greedy;
  for (const auto& [time, i] : arrivals) {
    const auto ui = static_cast<std::size_t>(i);
    const bool active = bernoulli(rng, z[ui]);
    if (active) ++c.active[ui];
    bool took = false;
    switch (scheme) {
      case CrsScheme::kOcrsHalf: took = ocrs.offer(z[ui], active, rng); break;
      case CrsScheme::kRcrs: took = rcrs.offer(z[ui], time, active, rng); break;
      case CrsScheme::kGreedy: took = greedy.offer(active); break;
    }
    if (took) ++c.accepted[ui];
  }
}

}  // namespace

SelectabilityReport verify_selectability(CrsScheme scheme,
                                         const std::vector<double>& z,
                                         CrsMode mode,
                                         const SelectabilityOptions& options) {
  require(!z.empty(), "selectability needs at least one element");
  double total = 0.0;
  for (double zi : z) {
    require(zi >= 0.0 && zi <= 1.0, "marginals must lie in [0, 1]");
    total += zi;
  }
  require(total <= 1.0 + 1e-9, "marginals must sum to at most 1");
  require(options.trials >= 1, "trial count must be positive");

  const int k = static_cast<int>(z.size());
  std::vector<std::vector<int>> orders;
  if (mode == CrsMode::kRandom) {
    orders.push_back({});
  } else if (k <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do orders.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    Rng rng = make_rng(options.seed, 0xfeedULL);
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    for (int s = 0; s < options.sampled_orders; ++s) {
      shuffle_in_place(perm, rng);
      orders.push_back(perm);
    }
  }

  SelectabilityReport report;
  std::map<double, std::pair<std::int64_t, std::int64_t>> pooled;
  for (std::size_t o = 0; o < orders.size(); ++o) {
    const auto& order = orders[o];
    const Counts counts = run_trials<Counts>(
        options.trials, stream_seed(options.seed, o),
        [k] {
          return Counts{std::vector<std::int64_t>(static_cast<std::size_t>(k), 0),
                        std::vector<std::int64_t>(static_cast<std::size_t>(k), 0)};
        },
        [&](Counts& c, std::int64_t, Rng& rng) {
          run_once(scheme, z, order, c, rng);
        });
    OrderEstimate oe;
    oe.order = order;
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      oe.elements.push_back(estimate(counts.active[ui], counts.accepted[ui]));
      if (counts.active[ui] > 0) {
        oe.min_estimate = std::min(oe.min_estimate, oe.elements.back().estimate);
      }
      auto& slot = pooled[z[ui]];
      slot.first += counts.active[ui];
      slot.second += counts.accepted[ui];
    }
    if (oe.min_estimate < report.worst_estimate || report.worst_order.empty()) {
      report.worst_estimate = oe.min_estimate;
      report.worst_order = order;
    }
    report.orders.push_back(std::move(oe));
  }
  for (const auto& [zi, cnt] : pooled) {
    report.class_z.push_back(zi);
    report.classes.push_back(estimate(cnt.first, cnt.second));
  }
  return report;
}

}  // namespace stochmatch
