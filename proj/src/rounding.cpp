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

#include "stochmatch/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stochmatch/error.hpp"

namespace stochmatch {

namespace {

// Relative excess above which a node's extensions are a hard error.
constexpr double kClampTolerance = 1e-7;

std::string format_string(const EdgeString& s) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? "," : "") << s[k];
  os << ")";
  return os.str();
}

}  // namespace

int PrefixMarginals::child(int node, EdgeId e) const {
  for (int c : nodes_[static_cast<std::size_t>(node)].children) {
    if (nodes_[static_cast<std::size_t>(c)].edge == e) return c;
  }
  return -1;
}

int PrefixMarginals::ensure_child(int node, EdgeId e) {
  const int found = child(node, e);
  if (found >= 0) return found;
  Node n;
  n.edge = e;
  n.parent = node;
  nodes_.push_back(n);
  const int id = static_cast<int>(nodes_.size()) - 1;
  nodes_[static_cast<std::size_t>(node)].children.push_back(id);
  return id;
}

EdgeString PrefixMarginals::path(int node) const {
  EdgeString s;
  for (int n = node; n > 0; n = nodes_[static_cast<std::size_t>(n)].parent) {
    s.push_back(nodes_[static_cast<std::size_t>(n)].edge);
  }
  std::reverse(s.begin(), s.end());
  return s;
}

PrefixMarginals PrefixMarginals::from_distribution(const StringDistribution& dist,
                                                   double total) {
  require(total > 0.0, "marginal normalizer must be positive");
  PrefixMarginals m;
  for (const WeightedString& ws : dist) {
    require(ws.mass >= 0.0, "string mass must be nonnegative");
    if (ws.mass == 0.0) continue;
    const double share = ws.mass / total;
    int node = 0;
    m.nodes_[0].y += share;
    for (EdgeId e : ws.string) {
      node = m.ensure_child(node, e);
      m.nodes_[static_cast<std::size_t>(node)].y += share;
    }
  }
  return m;
}

PrefixMarginals PrefixMarginals::from_probe_probabilities(
    const StochasticGraph& g, const StringDistribution& x) {
  PrefixMarginals m;
  m.nodes_[0].y = 1.0;
  for (const WeightedString& ws : x) {
    if (ws.string.empty()) {
      m.nodes_[0].y = ws.mass;
      continue;
    }
    const EdgeString prefix(ws.string.begin(), ws.string.end() - 1);
    const double qp = q(g, prefix);
    if (qp <= 0.0) continue;
    int node = 0;
    for (EdgeId e : ws.string) node = m.ensure_child(node, e);
    m.nodes_[static_cast<std::size_t>(node)].y = ws.mass / qp;
  }
  return m;
}

void PrefixMarginals::validate(double tol) const {
  if (std::abs(nodes_[0].y - 1.0) > tol) {
    fail(ErrorCode::kInvalidArgument, "y of the empty string must equal 1");
  }
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    double ext = 0.0;
    for (int c : nodes_[n].children) {
      const double yc = nodes_[static_cast<std::size_t>(c)].y;
      if (yc < -tol) {
        fail(ErrorCode::kInvalidArgument,
             "negative marginal at prefix " + format_string(path(c)));
      }
      ext += yc;
    }
    if (ext > nodes_[n].y + tol) {
      fail(ErrorCode::kInvalidArgument,
           "marginal violation at prefix " + format_string(path(static_cast<int>(n))));
    }
  }
}

double PrefixMarginals::y(const EdgeString& s) const {
  int node = 0;
  for (EdgeId e : s) {
    node = child(node, e);
    if (node < 0) return 0.0;
  }
  return nodes_[static_cast<std::size_t>(node)].y;
}

StringDistribution PrefixMarginals::output_distribution() const {
  StringDistribution out;
  std::vector<double> reach(nodes_.size(), 0.0);
  reach[0] = 1.0;
  // Children always have larger indices than their parent.
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const Node& node = nodes_[n];
    double ext = 0.0;
    for (int c : node.children) ext += std::max(0.0, nodes_[static_cast<std::size_t>(c)].y);
    const double scale = std::max(node.y, ext);
    double pass = 1.0;
    if (scale > 0.0) {
      for (int c : node.children) {
        const double step = std::max(0.0, nodes_[static_cast<std::size_t>(c)].y) / scale;
        reach[static_cast<std::size_t>(c)] = reach[n] * step;
        pass -= step;
      }
    }
    const double stop = reach[n] * std::max(0.0, pass);
    if (stop > 0.0) out.push_back({path(static_cast<int>(n)), stop});
  }
  return out;
}

EdgeString vertex_round(const PrefixMarginals& m, Rng& rng) {
  EdgeString s;
  int node = 0;
  for (;;) {
    const auto& cur = m.nodes_[static_cast<std::size_t>(node)];
    double ext = 0.0;
    for (int c : cur.children) ext += std::max(0.0, m.nodes_[static_cast<std::size_t>(c)].y);
    if (ext <= 0.0) return s;
    if (ext > cur.y * (1.0 + kClampTolerance) + 1e-12) {
      fail(ErrorCode::kInvalidArgument,
           "marginal violation at prefix " + format_string(s));
    }
    const double r = uniform01(rng) * std::max(cur.y, ext);
    double acc = 0.0;
    int next = -1;
    for (int c : cur.children) {
      acc += std::max(0.0, m.nodes_[static_cast<std::size_t>(c)].y);
      if (r < acc) {
        next = c;
        break;
      }
    }
    if (next < 0) return s;
    node = next;
    s.push_back(m.nodes_[static_cast<std::size_t>(node)].edge);
  }
}

ProposeOutcome probe_string(const EdgeString& s, const ProbeFn& probe) {
  ProposeOutcome out;
  for (EdgeId e : s) {
    const bool active = probe(e);
    out.trace.push_back({e, active});
    if (active) {
      out.proposal = e;
      break;
    }
  }
  return out;
}

ProposeOutcome vertex_probe(const StochasticGraph& g, int v,
                            const PrefixMarginals& m, const ProbeFn& probe,
                            Rng& rng) {
  const EdgeString s = vertex_round(m, rng);
  if (!membership(g, v, s)) {
    fail(ErrorCode::kInternal, "drawn string is infeasible for its vertex");
  }
  return probe_string(s, probe);
}

}  // namespace stochmatch
