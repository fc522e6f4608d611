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

#include "stochmatch/star_opt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "stochmatch/error.hpp"

namespace stochmatch {

namespace {

// A take must beat a skip by this (relative) margin; equal values prefer the
// shorter string.
constexpr double kTieSlack = 1e-14;
constexpr int kMaxVerifierDegree = 12;
constexpr int kMaxPermutationDegree = 6;

bool beats(double take, double skip) {
  return take > skip + kTieSlack * std::max(1.0, std::abs(skip));
}

std::vector<StarItem> sorted_positive(const StarInstance& inst) {
  std::vector<StarItem> items;
  for (const StarItem& it : inst.items) {
    if (it.p > 0.0 && it.weight > 0.0) items.push_back(it);
  }
  std::sort(items.begin(), items.end(),
            [](const StarItem& a, const StarItem& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              if (a.p != b.p) return a.p > b.p;
              return a.edge < b.edge;
            });
  return items;
}

double plan_value(std::span<const StarItem> items) {
  double total = 0.0, survive = 1.0;
  for (const StarItem& it : items) {
    total += it.weight * it.p * survive;
    survive *= 1.0 - it.p;
  }
  return total;
}

std::vector<std::size_t> dp_patience(const std::vector<StarItem>& items,
                                     int limit) {
  const std::size_t m = items.size();
  const std::size_t cap =
      static_cast<std::size_t>(std::min<long>(limit, static_cast<long>(m)));
  std::vector<double> next(cap + 1, 0.0), cur(cap + 1, 0.0);
  std::vector<std::vector<char>> take(m, std::vector<char>(cap + 1, 0));
  for (std::size_t i = m; i-- > 0;) {
    const StarItem& it = items[i];
    cur[0] = 0.0;
    for (std::size_t k = 1; k <= cap; ++k) {
      const double with = it.p * it.weight + (1.0 - it.p) * next[k - 1];
      if (beats(with, next[k])) {
        cur[k] = with;
        take[i][k] = 1;
      } else {
        cur[k] = next[k];
      }
    }
    std::swap(cur, next);
  }
  std::vector<std::size_t> chosen;
  std::size_t k = cap;
  for (std::size_t i = 0; i < m && k > 0; ++i) {
    if (take[i][k]) {
      chosen.push_back(i);
      --k;
    }
  }
  return chosen;
}

class KnapsackDp {
 public:
  KnapsackDp(const std::vector<StarItem>& items, const Knapsack& ks)
      : items_(items), ks_(ks), memo_(items.size()) {}

  std::vector<std::size_t> solve() {
    std::vector<std::size_t> chosen;
    double budget = ks_.budget;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (best(i, budget).take) {
        chosen.push_back(i);
        budget -= cost(i);
      }
    }
    return chosen;
  }

 private:
  struct Entry {
    double value;
    bool take;
  };

  double cost(std::size_t i) const {
    return ks_.costs[static_cast<std::size_t>(items_[i].slot)];
  }

  Entry best(std::size_t i, double budget) {
    if (i == items_.size()) return {0.0, false};
    auto& table = memo_[i];
    auto it = table.find(budget);
    if (it != table.end()) return it->second;
    const double skip = best(i + 1, budget).value;
    Entry e{skip, false};
    if (cost(i) <= budget + 1e-12) {
      const StarItem& item = items_[i];
      const double with = item.p * item.weight +
                          (1.0 - item.p) * best(i + 1, budget - cost(i)).value;
      if (beats(with, skip)) e = {with, true};
    }
    table.emplace(budget, e);
    return e;
  }

  const std::vector<StarItem>& items_;
  const Knapsack& ks_;
  std::vector<std::map<double, Entry>> memo_;
};

class FamilyDp {
 public:
  FamilyDp(const std::vector<StarItem>& items, const ExplicitFamily& fam)
      : items_(items), fam_(fam) {}

  std::vector<std::size_t> solve() {
    std::vector<std::size_t> chosen;
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (best(i, mask).take) {
        chosen.push_back(i);
        mask |= bit(i);
      }
    }
    return chosen;
  }

 private:
  struct Entry {
    double value;
    bool take;
  };

  std::uint32_t bit(std::size_t i) const {
    return 1u << static_cast<unsigned>(items_[i].slot);
  }

  Entry best(std::size_t i, std::uint32_t mask) {
    if (i == items_.size()) return {0.0, false};
    const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 6) | i;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double skip = best(i + 1, mask).value;
    Entry e{skip, false};
    if (fam_.contains(mask | bit(i))) {
      const StarItem& item = items_[i];
      const double with =
          item.p * item.weight + (1.0 - item.p) * best(i + 1, mask | bit(i)).value;
      if (beats(with, skip)) e = {with, true};
    }
    memo_.emplace(key, e);
    return e;
  }

  const std::vector<StarItem>& items_;
  const ExplicitFamily& fam_;
  std::unordered_map<std::uint64_t, Entry> memo_;
};

bool is_available(std::span<const std::uint8_t> available, int u) {
  return available.empty() || available[static_cast<std::size_t>(u)] != 0;
}

}  // namespace

StarInstance make_star(const StochasticGraph& g, int v,
                       std::span<const std::uint8_t> available) {
  StarInstance inst;
  inst.constraint = &g.online(v).constraint;
  for (EdgeId e : g.online(v).edges) {
    const Edge& edge = g.edge(e);
    if (edge.p <= 0.0 || !is_available(available, edge.offline)) continue;
    inst.items.push_back({e, edge.slot, edge.p, edge.w});
  }
  return inst;
}

StarPlan dp_opt(const StarInstance& inst) {
  require(inst.constraint != nullptr, "star instance has no constraint");
  const std::vector<StarItem> items = sorted_positive(inst);
  StarPlan plan;
  if (items.empty()) return plan;

  std::vector<std::size_t> chosen;
  if (const auto* pat = std::get_if<Patience>(inst.constraint)) {
    chosen = dp_patience(items, pat->limit);
  } else if (const auto* ks = std::get_if<Knapsack>(inst.constraint)) {
    chosen = KnapsackDp(items, *ks).solve();
  } else {
    const auto& fam = std::get<ExplicitFamily>(*inst.constraint);
    chosen = FamilyDp(items, fam).solve();
  }

  std::vector<StarItem> picked;
  for (std::size_t i : chosen) {
    plan.string.push_back(items[i].edge);
    picked.push_back(items[i]);
  }
  plan.value = plan_value(picked);
  return plan;
}

StarPlan dp_opt(const StochasticGraph& g, int v,
                std::span<const std::uint8_t> available) {
  return dp_opt(make_star(g, v, available));
}

PricedColumn price_column(const StochasticGraph& g, int v,
                          std::span<const double> alpha, double beta) {
  require(static_cast<int>(alpha.size()) == g.num_offline(),
          "alpha must have one entry per offline vertex");
  StarInstance inst = make_star(g, v);
  for (StarItem& it : inst.items) {
    it.weight = g.edge(it.edge).w - alpha[static_cast<std::size_t>(
                                        g.edge(it.edge).offline)];
  }
  std::erase_if(inst.items, [](const StarItem& it) { return it.weight < 0.0; });
  PricedColumn col;
  col.plan = dp_opt(inst);
  col.reduced_cost = col.plan.value - beta;
  return col;
}

double exhaustive_star_value(const StarInstance& inst) {
  require(inst.constraint != nullptr, "star instance has no constraint");
  const std::size_t m = inst.items.size();
  require(m <= 10, "exhaustive star search supports at most 10 edges");
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<StarItem> subset;
    std::vector<int> slots;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(inst.items[i]);
        slots.push_back(inst.items[i].slot);
      }
    }
    if (!admits_slots(*inst.constraint, slots)) continue;
    std::vector<std::size_t> order(subset.size());
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<StarItem> seq;
      for (std::size_t k : order) seq.push_back(subset[k]);
      best = std::max(best, plan_value(seq));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return best;
}

namespace {

double opt_on_slots(const StochasticGraph& g, int v, std::uint64_t r) {
  StarInstance inst;
  inst.constraint = &g.online(v).constraint;
  for (EdgeId e : g.online(v).edges) {
    const Edge& edge = g.edge(e);
    if ((r >> edge.slot) & 1u) inst.items.push_back({e, edge.slot, edge.p, edge.w});
  }
  return dp_opt(inst).value;
}

double ranking_value_on_slots(const StochasticGraph& g, int v,
                              std::span<const EdgeId> ranking,
                              std::uint64_t r) {
  const ProbingConstraint& c = g.online(v).constraint;
  std::uint64_t taken = 0;
  EdgeString s;
  for (EdgeId e : ranking) {
    const Edge& edge = g.edge(e);
    if (!((r >> edge.slot) & 1u) || edge.p <= 0.0 || edge.w <= 0.0) continue;
    if (!admits_mask(c, taken | (1ULL << edge.slot))) continue;
    taken |= 1ULL << edge.slot;
    s.push_back(e);
  }
  return val(g, s);
}

std::vector<EdgeId> positive_edges(const StochasticGraph& g, int v) {
  std::vector<EdgeId> out;
  for (EdgeId e : g.online(v).edges) {
    if (g.edge(e).p > 0.0 && g.edge(e).w > 0.0) out.push_back(e);
  }
  return out;
}

std::vector<EdgeId> sorted_by(std::vector<EdgeId> es, auto key) {
  std::stable_sort(es.begin(), es.end(),
                   [&](EdgeId a, EdgeId b) { return key(a) < key(b); });
  return es;
}

std::vector<std::vector<EdgeId>> candidate_rankings(const StochasticGraph& g,
                                                    int v) {
  const std::vector<EdgeId> es = positive_edges(g, v);
  auto p = [&](EdgeId e) { return g.edge(e).p; };
  auto w = [&](EdgeId e) { return g.edge(e).w; };
  std::vector<std::vector<EdgeId>> out;
  out.push_back(sorted_by(es, [&](EdgeId e) {
    return std::make_tuple(-p(e) * w(e), -w(e), e);
  }));
  out.push_back(sorted_by(es, [&](EdgeId e) {
    return std::make_tuple(-w(e), -p(e), e);
  }));
  const auto* ks = std::get_if<Knapsack>(&g.online(v).constraint);
  out.push_back(sorted_by(es, [&](EdgeId e) {
    const double c = ks ? ks->costs[static_cast<std::size_t>(g.edge(e).slot)] : 0.0;
    return std::make_tuple(-p(e), c, e);
  }));
  return out;
}

}  // namespace

EdgeString ranking_string(const StochasticGraph& g, int v,
                          std::span<const EdgeId> ranking,
                          std::span<const std::uint8_t> available) {
  const ProbingConstraint& c = g.online(v).constraint;
  std::vector<int> slots;
  EdgeString s;
  for (EdgeId e : ranking) {
    const Edge& edge = g.edge(e);
    require(edge.online == v, "ranking edge is not incident to the vertex");
    if (!is_available(available, edge.offline) || edge.p <= 0.0 ||
        edge.w <= 0.0) {
      continue;
    }
    slots.push_back(edge.slot);
    if (!admits_slots(c, slots)) {
      slots.pop_back();
      continue;
    }
    s.push_back(e);
  }
  return s;
}

std::optional<std::uint64_t> find_ranking_violation(
    const StochasticGraph& g, int v, std::span<const EdgeId> ranking,
    double tol) {
  const int deg = g.degree(v);
  if (deg > kMaxVerifierDegree) {
    fail(ErrorCode::kTooLarge, "ranking verifier supports degree <= 12");
  }
  for (std::uint64_t r = 0; r < (1ULL << deg); ++r) {
    const double opt = opt_on_slots(g, v, r);
    const double got = ranking_value_on_slots(g, v, ranking, r);
    if (std::abs(opt - got) > tol * std::max(1.0, opt)) return r;
  }
  return std::nullopt;
}

std::optional<std::vector<EdgeId>> find_ranking_exhaustive(
    const StochasticGraph& g, int v) {
  if (g.degree(v) > kMaxVerifierDegree) {
    fail(ErrorCode::kTooLarge, "ranking verifier supports degree <= 12");
  }
  for (const auto& cand : candidate_rankings(g, v)) {
    if (!find_ranking_violation(g, v, cand)) return cand;
  }
  std::vector<EdgeId> es = positive_edges(g, v);
  if (static_cast<int>(es.size()) > kMaxPermutationDegree) return std::nullopt;
  std::sort(es.begin(), es.end());
  do {
    if (!find_ranking_violation(g, v, es)) return es;
  } while (std::next_permutation(es.begin(), es.end()));
  return std::nullopt;
}

Rankability is_rankable(const StochasticGraph& g, int v) {
  const std::vector<EdgeId> es = positive_edges(g, v);
  const auto cands = candidate_rankings(g, v);
  const ProbingConstraint& c = g.online(v).constraint;
  if (es.size() <= 1) return {true, es};

  if (const auto* pat = std::get_if<Patience>(&c)) {
    if (pat->limit == 1) return {true, cands[0]};
    if (pat->limit >= static_cast<int>(es.size())) return {true, cands[1]};
    bool agree = true;
    for (EdgeId a : es) {
      for (EdgeId b : es) {
        if (a != b && g.edge(a).p <= g.edge(b).p && g.edge(a).w > g.edge(b).w) {
          agree = false;
        }
      }
    }
    if (agree) return {true, cands[1]};
  } else if (const auto* ks = std::get_if<Knapsack>(&c)) {
    bool unweighted = true, anti = true;
    for (EdgeId a : es) {
      for (EdgeId b : es) {
        const Edge &ea = g.edge(a), &eb = g.edge(b);
        if (ea.w != eb.w) unweighted = false;
        if (ea.p > eb.p && ks->costs[static_cast<std::size_t>(ea.slot)] >
                               ks->costs[static_cast<std::size_t>(eb.slot)]) {
          anti = false;
        }
      }
    }
    if (unweighted && anti) return {true, cands[2]};
  }
  if (g.degree(v) <= kMaxVerifierDegree) {
    if (auto found = find_ranking_exhaustive(g, v)) return {true, *found};
  }
  return {false, {}};
}

}  // namespace stochmatch
