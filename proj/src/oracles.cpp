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

#include "stochmatch/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "stochmatch/error.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/star_opt.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

namespace {

constexpr int kMaxMemoOffline = 20;

struct LocalEdge {
  int u, v, slot;
  double p, w;
};

std::vector<LocalEdge> positive_edges(const StochasticGraph& g, int max_edges) {
  std::vector<LocalEdge> out;
  for (const Edge& e : g.edges()) {
    if (e.p > 0.0) out.push_back({e.offline, e.online, e.slot, e.p, e.w});
  }
  if (static_cast<int>(out.size()) > max_edges) {
    fail(ErrorCode::kTooLarge, "instance has " + std::to_string(out.size()) +
                                   " probeable edges; the oracle allows " +
                                   std::to_string(max_edges));
  }
  return out;
}

class AdaptiveOracle {
 public:
  AdaptiveOracle(const StochasticGraph& g, std::vector<LocalEdge> edges)
      : g_(g), edges_(std::move(edges)) {}

  double value(std::uint32_t inactive, std::uint32_t matched) {
    const std::uint64_t key = (static_cast<std::uint64_t>(inactive) << 32) | matched;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<char> u_busy(static_cast<std::size_t>(g_.num_offline()), 0);
    std::vector<char> v_busy(static_cast<std::size_t>(g_.num_online()), 0);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      if (matched & (1u << k)) {
        u_busy[static_cast<std::size_t>(edges_[k].u)] = 1;
        v_busy[static_cast<std::size_t>(edges_[k].v)] = 1;
      }
    }
    double best = 0.0;
    const std::uint32_t probed = inactive | matched;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const LocalEdge& e = edges_[k];
      if ((probed & (1u << k)) || u_busy[static_cast<std::size_t>(e.u)] ||
          v_busy[static_cast<std::size_t>(e.v)]) {
        continue;
      }
      std::uint64_t slots = 1ULL << e.slot;
      for (std::size_t j = 0; j < edges_.size(); ++j) {
        if ((inactive & (1u << j)) && edges_[j].v == e.v) slots |= 1ULL << edges_[j].slot;
      }
      if (!admits_mask(g_.online(e.v).constraint, slots)) continue;
      const double got = e.p * (e.w + value(inactive, matched | (1u << k))) +
                         (1.0 - e.p) * value(inactive | (1u << k), matched);
      best = std::max(best, got);
    }
    memo_.emplace(key, best);
    return best;
  }

 private:
  const StochasticGraph& g_;
  std::vector<LocalEdge> edges_;
  std::unordered_map<std::uint64_t, double> memo_;
};

// Matched-state distribution keyed by (offline mask, online mask).
using StateDist = std::map<std::pair<std::uint32_t, std::uint64_t>, double>;

class NonAdaptiveSearch {
 public:
  NonAdaptiveSearch(const StochasticGraph& g, std::vector<LocalEdge> edges)
      : g_(g), edges_(std::move(edges)),
        slots_(static_cast<std::size_t>(g.num_online()), 0) {}

  double run() {
    StateDist start;
    start[{0u, 0ULL}] = 1.0;
    search(0u, start, 0.0);
    return best_;
  }

 private:
  void search(std::uint32_t used, const StateDist& dist, double acc) {
    best_ = std::max(best_, acc);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      if (used & (1u << k)) continue;
      const LocalEdge& e = edges_[k];
      auto& vs = slots_[static_cast<std::size_t>(e.v)];
      if (!admits_mask(g_.online(e.v).constraint, vs | (1ULL << e.slot))) continue;
      StateDist next;
      double gain = 0.0;
      for (const auto& [state, prob] : dist) {
        const bool free = !((state.first >> e.u) & 1u) && !((state.second >> e.v) & 1ULL);
        if (!free) {
          next[state] += prob;
          continue;
        }
        next[{state.first | (1u << e.u), state.second | (1ULL << e.v)}] += prob * e.p;
        next[state] += prob * (1.0 - e.p);
        gain += prob * e.p * e.w;
      }
      vs |= 1ULL << e.slot;
      search(used | (1u << k), next, acc + gain);
      vs &= ~(1ULL << e.slot);
    }
  }

  const StochasticGraph& g_;
  std::vector<LocalEdge> edges_;
  std::vector<std::uint64_t> slots_;
  double best_ = 0.0;
};

bool all_unit_patience(const StochasticGraph& g) {
  for (int v = 0; v < g.num_online(); ++v) {
    const auto* pat = std::get_if<Patience>(&g.online(v).constraint);
    if (pat == nullptr || pat->limit != 1) return false;
  }
  return true;
}

// Each online vertex probes at most one edge, so offline vertices act
// independently: each takes its first active assigned edge, best probed in
// nonincreasing weight order.
double unit_patience_nonadaptive(const StochasticGraph& g,
                                 const std::vector<LocalEdge>& edges) {
  std::vector<std::vector<int>> by_v(static_cast<std::size_t>(g.num_online()));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    by_v[static_cast<std::size_t>(edges[k].v)].push_back(static_cast<int>(k));
  }
  std::vector<int> choice(by_v.size(), -1);
  double best = 0.0;
  auto evaluate = [&] {
    std::vector<std::vector<const LocalEdge*>> at_u(static_cast<std::size_t>(g.num_offline()));
    for (int k : choice) {
      if (k >= 0) at_u[static_cast<std::size_t>(edges[static_cast<std::size_t>(k)].u)].push_back(&edges[static_cast<std::size_t>(k)]);
    }
    double total = 0.0;
    for (auto& list : at_u) {
      std::sort(list.begin(), list.end(),
                [](const LocalEdge* a, const LocalEdge* b) { return a->w > b->w; });
      double survive = 1.0;
      for (const LocalEdge* e : list) {
        total += survive * e->p * e->w;
        survive *= 1.0 - e->p;
      }
    }
    best = std::max(best, total);
  };
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == by_v.size()) {
      evaluate();
      return;
    }
    choice[v] = -1;
    self(self, v + 1);
    for (int k : by_v[v]) {
      choice[v] = k;
      self(self, v + 1);
    }
    choice[v] = -1;
  };
  rec(rec, 0);
  return best;
}

std::vector<std::uint8_t> mask_to_available(std::uint32_t mask, int nu) {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(nu));
  for (int u = 0; u < nu; ++u) a[static_cast<std::size_t>(u)] = (mask >> u) & 1u;
  return a;
}

void check_order(const StochasticGraph& g, std::span<const int> order) {
  require(static_cast<int>(order.size()) == g.num_online(),
          "order must list every online vertex");
  std::vector<char> seen(static_cast<std::size_t>(g.num_online()), 0);
  for (int v : order) {
    require(v >= 0 && v < g.num_online() && !seen[static_cast<std::size_t>(v)],
            "order is not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  if (g.num_offline() > kMaxMemoOffline) {
    fail(ErrorCode::kTooLarge, "exact expectation supports at most 20 offline vertices");
  }
}

}  // namespace

double brute_force_opt(const StochasticGraph& g, int max_edges) {
  require(max_edges <= 16, "brute-force oracle supports at most 16 edges");
  AdaptiveOracle oracle(g, positive_edges(g, max_edges));
  return oracle.value(0u, 0u);
}

double brute_force_nonadaptive(const StochasticGraph& g, int max_edges) {
  require(max_edges <= 16, "non-adaptive oracle supports at most 16 edges");
  std::vector<LocalEdge> edges = positive_edges(g, max_edges);
  require(g.num_offline() <= 32 && g.num_online() <= 64,
          "non-adaptive oracle vertex limits exceeded");
  if (all_unit_patience(g)) return unit_patience_nonadaptive(g, edges);
  return NonAdaptiveSearch(g, std::move(edges)).run();
}

double exact_greedy_dp(const StochasticGraph& g, std::span<const int> order) {
  check_order(g, order);
  const int n = g.num_online(), nu = g.num_offline();
  std::unordered_map<std::uint64_t, double> memo;
  auto rec = [&](auto&& self, int t, std::uint32_t avail) -> double {
    if (t == n) return 0.0;
    const std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | avail;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int v = order[static_cast<std::size_t>(t)];
    const StarPlan plan = dp_opt(g, v, mask_to_available(avail, nu));
    double total = 0.0, survive = 1.0;
    for (EdgeId e : plan.string) {
      const Edge& edge = g.edge(e);
      total += survive * edge.p * (edge.w + self(self, t + 1, avail & ~(1u << edge.offline)));
      survive *= 1.0 - edge.p;
    }
    total += survive * self(self, t + 1, avail);
    memo.emplace(key, total);
    return total;
  };
  const std::uint32_t all = nu == 32 ? ~0u : ((1u << nu) - 1u);
  return rec(rec, 0, all);
}

double exact_known_graph(const StochasticGraph& g, const ConfigLpSolution& sol,
                         std::span<const int> order, int max_support) {
  check_order(g, order);
  for (const auto& dist : sol.support) {
    if (static_cast<int>(dist.size()) > max_support) {
      fail(ErrorCode::kTooLarge, "string support too large for exact expansion");
    }
  }
  const int n = g.num_online();
  std::unordered_map<std::uint64_t, double> memo;
  auto rec = [&](auto&& self, int t, std::uint32_t matched) -> double {
    if (t == n) return 0.0;
    const std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | matched;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int v = order[static_cast<std::size_t>(t)];
    const double stay = self(self, t + 1, matched);
    double total = 0.0;
    for (const WeightedString& ws : sol.support[static_cast<std::size_t>(v)]) {
      double survive = 1.0, branch = 0.0;
      for (EdgeId e : ws.string) {
        const Edge& edge = g.edge(e);
        const bool free = !((matched >> edge.offline) & 1u);
        branch += survive * edge.p *
                  (free ? edge.w + self(self, t + 1, matched | (1u << edge.offline)) : stay);
        survive *= 1.0 - edge.p;
      }
      total += ws.mass * (branch + survive * stay);
    }
    memo.emplace(key, total);
    return total;
  };
  return rec(rec, 0, 0u);
}

double exact_expectation(ExactPolicy policy, const StochasticGraph& g,
                         std::span<const int> order) {
  if (policy == ExactPolicy::kGreedyDp) return exact_greedy_dp(g, order);
  return exact_known_graph(g, solve_lp_config(g), order);
}

double expected_min_binomial(int n, double p, int s) {
  require(n >= 0 && s >= 0 && p >= 0.0 && p <= 1.0, "invalid binomial parameters");
  if (p == 0.0 || s == 0) return 0.0;
  if (p == 1.0) return std::min(n, s);
  // E[min(X, s)] = s - sum_{k < s} (s - k) P[X = k].
  double deficit = 0.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  for (int k = 0; k < std::min(s, n + 1); ++k) {
    const double logpmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0) + k * lp + (n - k) * lq;
    deficit += (s - k) * std::exp(logpmf);
  }
  return s - deficit;
}

double balanced_nonadaptive_value(int n, double p, int s) {
  require(n >= 0 && s >= 1, "invalid assignment parameters");
  const int base = n / s, extra = n % s;
  const double miss_base = std::pow(1.0 - p, base);
  const double miss_extra = std::pow(1.0 - p, base + 1);
  return extra * (1.0 - miss_extra) + (s - extra) * (1.0 - miss_base);
}

GapResult adaptivity_gap_experiment(int n, double p, int s,
                                    std::int64_t trials, std::uint64_t seed) {
  require(n >= 1 && s >= 1, "gap experiment needs n >= 1 and s >= 1");
  require(p > 0.0 && p <= 1.0, "gap experiment needs p in (0, 1]");
  require(s <= p * n + 1e-9, "gap experiment needs s <= p * n");
  require(trials >= 2, "gap experiment needs at least two trials");

  GapResult r;
  r.n = n;
  r.p = p;
  r.s = s;
  r.trials = trials;
  r.adaptive_exact = expected_min_binomial(n, p, s);
  r.nonadaptive_exact = balanced_nonadaptive_value(n, p, s);
  r.exact_ratio = r.nonadaptive_exact / r.adaptive_exact;
  // Concavity of k -> 1 - (1-p)^k bounds every assignment.
  r.jensen_bound = s * (1.0 - std::pow(1.0 - p, static_cast<double>(n) / s));

  const RunningStats adaptive = run_trials<RunningStats>(
      trials, stream_seed(seed, 1), [] { return RunningStats(); },
      [&](RunningStats& acc, std::int64_t, Rng& rng) {
        int matched = 0;
        for (int v = 0; v < n; ++v) {
          if (matched < s && bernoulli(rng, p)) ++matched;
        }
        acc.add(matched);
      });
  const int base = n / s, extra = n % s;
  const RunningStats nonadaptive = run_trials<RunningStats>(
      trials, stream_seed(seed, 2), [] { return RunningStats(); },
      [&](RunningStats& acc, std::int64_t, Rng& rng) {
        int matched = 0;
        for (int u = 0; u < s; ++u) {
          const int k = base + (u < extra ? 1 : 0);
          for (int j = 0; j < k; ++j) {
            if (bernoulli(rng, p)) {
              ++matched;
              break;
            }
          }
        }
        acc.add(matched);
      });
  r.adaptive_mean = adaptive.mean();
  r.adaptive_ci = adaptive.ci99();
  r.nonadaptive_mean = nonadaptive.mean();
  r.nonadaptive_ci = nonadaptive.ci99();
  r.ratio = r.nonadaptive_mean / r.adaptive_mean;
  const double ra = adaptive.sem() / r.adaptive_mean;
  const double rn = nonadaptive.sem() / r.nonadaptive_mean;
  r.ratio_ci = kZ99 * r.ratio * std::sqrt(ra * ra + rn * rn);
  return r;
}

}  // namespace stochmatch
