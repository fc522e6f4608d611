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

#include "stochmatch/online.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stochmatch/crs.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/star_opt.hpp"

namespace stochmatch {

ArrivalModel ArrivalModel::adversarial(std::vector<int> permutation) {
  ArrivalModel m;
  m.random_ = false;
  m.permutation_ = std::move(permutation);
  return m;
}

ArrivalModel ArrivalModel::random_order() { return ArrivalModel(); }

ArrivalOrder ArrivalModel::realize(int n, Rng& rng) const {
  ArrivalOrder a;
  if (!random_) {
    require(static_cast<int>(permutation_.size()) == n,
            "arrival permutation has the wrong length");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int i : permutation_) {
      require(i >= 0 && i < n && !seen[static_cast<std::size_t>(i)],
              "arrival order is not a permutation");
      seen[static_cast<std::size_t>(i)] = 1;
    }
    a.order = permutation_;
    for (int t = 0; t < n; ++t) a.times.push_back((t + 1.0) / (n + 1.0));
    return a;
  }
  std::vector<std::pair<double, int>> draws;
  draws.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) draws.emplace_back(uniform01(rng), i);
  std::sort(draws.begin(), draws.end());
  for (const auto& [time, i] : draws) {
    a.order.push_back(i);
    a.times.push_back(time);
  }
  return a;
}

namespace {

MatchingResult empty_result(int arrivals, int offline) {
  MatchingResult r;
  r.online_vertex.assign(static_cast<std::size_t>(arrivals), -1);
  r.traces.resize(static_cast<std::size_t>(arrivals));
  r.offline_matched.assign(static_cast<std::size_t>(offline), 0);
  r.proposal_weight.assign(static_cast<std::size_t>(arrivals), 0.0);
  r.proposal_available.assign(static_cast<std::size_t>(arrivals), -1);
  return r;
}

// Records a proposal at step t and matches it when its offline vertex is
// free. Returns whether the match happened.
bool settle(const StochasticGraph& g, MatchingResult& r, int t, int arrival,
            EdgeId e, bool accept_if_free = true) {
  const Edge& edge = g.edge(e);
  const auto st = static_cast<std::size_t>(t);
  const auto u = static_cast<std::size_t>(edge.offline);
  r.proposal_weight[st] = edge.w;
  r.proposal_available[st] = r.offline_matched[u] ? 0 : 1;
  if (r.offline_matched[u] || !accept_if_free) return false;
  r.offline_matched[u] = 1;
  r.matches.push_back({arrival, edge.offline, e, edge.w});
  r.weight += edge.w;
  return true;
}

void check_arrivals(const ArrivalOrder& a, int n) {
  require(static_cast<int>(a.order.size()) == n,
          "arrival order does not cover every online vertex");
}

}  // namespace

void check_matching(const StochasticGraph& g, const MatchingResult& r) {
  auto bad = [](const std::string& what) {
    fail(ErrorCode::kInternal, "matching check failed: " + what);
  };
  std::vector<int> offline_uses(static_cast<std::size_t>(g.num_offline()), 0);
  std::vector<int> arrival_uses(r.traces.size(), 0);
  double total = 0.0;
  for (const Match& m : r.matches) {
    if (m.arrival < 0 || m.arrival >= static_cast<int>(r.traces.size())) bad("arrival index");
    const auto ai = static_cast<std::size_t>(m.arrival);
    if (++arrival_uses[ai] > 1) bad("online vertex matched twice");
    if (++offline_uses[static_cast<std::size_t>(m.offline)] > 1) bad("offline vertex matched twice");
    const Edge& e = g.edge(m.edge);
    if (e.offline != m.offline || e.online != r.online_vertex[ai]) bad("edge endpoints");
    const auto& trace = r.traces[ai];
    if (trace.empty() || trace.back().edge != m.edge || !trace.back().active) {
      bad("matched edge is not the last active probe");
    }
    total += m.weight;
  }
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    const auto& trace = r.traces[i];
    if (trace.empty()) continue;
    EdgeString s;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      if (trace[k].active && k + 1 != trace.size()) bad("probe after an active edge");
      s.push_back(trace[k].edge);
    }
    if (!membership(g, r.online_vertex[i], s)) bad("probes violate the constraint");
  }
  for (int u = 0; u < g.num_offline(); ++u) {
    const auto uu = static_cast<std::size_t>(u);
    if ((offline_uses[uu] > 0) != (r.offline_matched[uu] != 0)) bad("offline flags");
  }
  if (std::abs(total - r.weight) > 1e-9 * std::max(1.0, total)) bad("weight total");
}

KnownGraphPolicy::KnownGraphPolicy(const StochasticGraph& g,
                                   const ConfigLpSolution& sol)
    : g_(g) {
  require(static_cast<int>(sol.support.size()) == g.num_online(),
          "LP solution does not match the graph");
  for (const StringDistribution& dist : sol.support) {
    marginals_.push_back(PrefixMarginals::from_distribution(dist));
    marginals_.back().validate();
  }
}

MatchingResult KnownGraphPolicy::run(const ArrivalOrder& arrival, Rng& rng) const {
  const int n = g_.num_online();
  check_arrivals(arrival, n);
  MatchingResult r = empty_result(n, g_.num_offline());
  const ProbeFn probe = [&](EdgeId e) { return bernoulli(rng, g_.edge(e).p); };
  for (int t = 0; t < n; ++t) {
    const int v = arrival.order[static_cast<std::size_t>(t)];
    ProposeOutcome out =
        vertex_probe(g_, v, marginals_[static_cast<std::size_t>(v)], probe, rng);
    r.online_vertex[static_cast<std::size_t>(v)] = v;
    r.traces[static_cast<std::size_t>(v)] = std::move(out.trace);
    if (out.proposal) settle(g_, r, t, v, *out.proposal);
  }
  return r;
}

KnownIdPolicy::KnownIdPolicy(const KnownIdInput& input,
                             const ConfigIdLpSolution& sol, IdMode mode)
    : input_(input), mode_(mode) {
  const int n = input.n();
  conditional_.resize(static_cast<std::size_t>(n));
  for (const IdGroup& grp : sol.groups) {
    PrefixMarginals m = PrefixMarginals::from_distribution(grp.support, grp.r);
    m.validate();
    conditional_[static_cast<std::size_t>(grp.arrival)].emplace(grp.type, std::move(m));
  }
  for (int i = 0; i < n; ++i) {
    for (const TypeProb& tp : input.rows[static_cast<std::size_t>(i)]) {
      require(conditional_[static_cast<std::size_t>(i)].count(tp.type) == 1,
              "LP solution misses a (arrival, type) pair");
    }
  }
  const StochasticGraph& h = input.type_graph;
  const auto xt = edge_variables(input, sol);
  z_.assign(static_cast<std::size_t>(h.num_offline()),
            std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    for (const Edge& e : h.edges()) {
      const EdgeId id = static_cast<EdgeId>(&e - h.edges().data());
      z_[static_cast<std::size_t>(e.offline)][static_cast<std::size_t>(i)] +=
          e.p * xt[static_cast<std::size_t>(i)][static_cast<std::size_t>(id)];
    }
  }
  if (mode != IdMode::kPlain) {
    for (int u = 0; u < h.num_offline(); ++u) {
      const auto& zu = z_[static_cast<std::size_t>(u)];
      const double total = std::accumulate(zu.begin(), zu.end(), 0.0);
      if (total > 1.0 + kLpTolerance) {
        fail(ErrorCode::kInvalidArgument,
             "contention marginals of offline vertex " + h.offline(u).id +
                 " exceed 1");
      }
    }
  }
}

MatchingResult KnownIdPolicy::run(const ArrivalOrder& arrival, Rng& rng) const {
  const StochasticGraph& h = input_.type_graph;
  const int n = input_.n();
  const int nu = h.num_offline();
  check_arrivals(arrival, n);
  MatchingResult r = empty_result(n, nu);

  std::vector<int> types(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& row = input_.rows[static_cast<std::size_t>(i)];
    const double x = uniform01(rng);
    double acc = 0.0;
    int type = row.back().type;
    for (const TypeProb& tp : row) {
      acc += tp.prob;
      if (x < acc) {
        type = tp.type;
        break;
      }
    }
    types[static_cast<std::size_t>(i)] = type;
  }

  std::vector<OcrsHalf> ocrs(static_cast<std::size_t>(mode_ == IdMode::kOcrs ? nu : 0));
  std::vector<RcrsExp> rcrs(static_cast<std::size_t>(mode_ == IdMode::kRcrs ? nu : 0));
  const ProbeFn probe = [&](EdgeId e) { return bernoulli(rng, h.edge(e).p); };
  for (int t = 0; t < n; ++t) {
    const int i = arrival.order[static_cast<std::size_t>(t)];
    const auto ui = static_cast<std::size_t>(i);
    const int b = types[ui];
    ProposeOutcome out = vertex_probe(h, b, conditional_[ui].at(b), probe, rng);
    r.online_vertex[ui] = b;
    r.traces[ui] = std::move(out.trace);
    if (mode_ == IdMode::kPlain) {
      if (out.proposal) settle(h, r, t, i, *out.proposal);
      continue;
    }
    // The scheme of every offline vertex sees this arrival, active or not.
    const int target = out.proposal ? h.edge(*out.proposal).offline : -1;
    bool keep = false;
    for (int u = 0; u < nu; ++u) {
      const auto uu = static_cast<std::size_t>(u);
      const double z = z_[uu][ui];
      const bool active = u == target;
      const bool took = mode_ == IdMode::kOcrs
                            ? ocrs[uu].offer(z, active, rng)
                            : rcrs[uu].offer(z, arrival.times[static_cast<std::size_t>(t)],
                                             active, rng);
      if (active) keep = took;
    }
    if (out.proposal) settle(h, r, t, i, *out.proposal, keep);
  }
  return r;
}

SecretaryPolicy::SecretaryPolicy(const StochasticGraph& g) : g_(g) {
  require(g.num_online() <= 63, "secretary policy supports at most 63 arrivals");
  pass_ = static_cast<int>(std::floor(g.num_online() / std::numbers::e));
}

std::size_t SecretaryPolicy::cached_solves() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

std::shared_ptr<const SecretaryPolicy::Solved> SecretaryPolicy::solve(
    std::uint64_t mask) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
  }
  auto solved = std::make_shared<Solved>();
  for (int v = 0; v < g_.num_online(); ++v) {
    if ((mask >> v) & 1ULL) solved->vertices.push_back(v);
  }
  const Subgraph sub = induced_online_subgraph(g_, solved->vertices);
  const ConfigLpSolution sol = solve_lp_config(sub.graph);
  for (const StringDistribution& dist : sol.support) {
    StringDistribution mapped;
    for (const WeightedString& ws : dist) {
      EdgeString s;
      for (EdgeId e : ws.string) s.push_back(sub.edge_map[static_cast<std::size_t>(e)]);
      mapped.push_back({std::move(s), ws.mass});
    }
    solved->marginals.push_back(PrefixMarginals::from_distribution(mapped));
    solved->marginals.back().validate();
  }
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(mask, std::move(solved)).first->second;
}

MatchingResult SecretaryPolicy::run(const ArrivalOrder& arrival, Rng& rng) const {
  const int n = g_.num_online();
  check_arrivals(arrival, n);
  MatchingResult r = empty_result(n, g_.num_offline());
  const ProbeFn probe = [&](EdgeId e) { return bernoulli(rng, g_.edge(e).p); };
  std::uint64_t mask = 0;
  for (int t = 0; t < n; ++t) {
    const int v = arrival.order[static_cast<std::size_t>(t)];
    mask |= 1ULL << v;
    r.online_vertex[static_cast<std::size_t>(v)] = v;
    if (t + 1 < pass_) continue;
    const auto solved = solve(mask);
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(solved->vertices.begin(), solved->vertices.end(), v) -
        solved->vertices.begin());
    ProposeOutcome out = vertex_probe(g_, v, solved->marginals[pos], probe, rng);
    r.traces[static_cast<std::size_t>(v)] = std::move(out.trace);
    if (out.proposal) settle(g_, r, t, v, *out.proposal);
  }
  return r;
}

GreedyDpPolicy::GreedyDpPolicy(const StochasticGraph& g) : g_(g) {
  if (!g.is_vertex_weighted()) {
    fail(ErrorCode::kInapplicable, "greedy-dp requires vertex weights");
  }
}

MatchingResult GreedyDpPolicy::run(const ArrivalOrder& arrival, Rng& rng) const {
  const int n = g_.num_online();
  check_arrivals(arrival, n);
  MatchingResult r = empty_result(n, g_.num_offline());
  std::vector<std::uint8_t> available(static_cast<std::size_t>(g_.num_offline()), 1);
  for (int t = 0; t < n; ++t) {
    const int v = arrival.order[static_cast<std::size_t>(t)];
    r.online_vertex[static_cast<std::size_t>(v)] = v;
    const StarPlan plan = dp_opt(g_, v, available);
    auto& trace = r.traces[static_cast<std::size_t>(v)];
    for (EdgeId e : plan.string) {
      const bool active = bernoulli(rng, g_.edge(e).p);
      trace.push_back({e, active});
      if (active) {
        settle(g_, r, t, v, e);
        available[static_cast<std::size_t>(g_.edge(e).offline)] = 0;
        break;
      }
    }
  }
  return r;
}

}  // namespace stochmatch
