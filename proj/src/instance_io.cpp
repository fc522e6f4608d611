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

#include "stochmatch/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "stochmatch/error.hpp"

namespace stochmatch {

namespace {

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorCode::kParse, std::string(where) + " is missing \"" + key + "\"");
  }
  return j.at(key);
}

std::string id_string(const Json& j, const char* where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(ErrorCode::kParse, std::string(where) + " id must be a string");
}

ProbingConstraint parse_constraint(const Json& c, const StochasticGraph& g, int v) {
  const std::string type = field(c, "type", "constraint").get<std::string>();
  if (type == "patience") {
    if (!c.contains("l") || c.at("l").is_null()) return Patience{};
    const Json& l = c.at("l");
    if (l.is_string() && (l == "inf" || l == "unbounded")) return Patience{};
    if (!l.is_number_integer() || l.get<long long>() < 1) {
      fail(ErrorCode::kParse, "patience \"l\" must be a positive integer");
    }
    const long long lim = l.get<long long>();
    return Patience{lim >= kUnboundedPatience ? kUnboundedPatience : static_cast<int>(lim)};
  }
  const OnlineVertex& ov = g.online(v);
  auto slot_of = [&](const std::string& uid) {
    const auto u = g.find_offline(uid);
    if (u) {
      const auto e = g.edge_between(*u, v);
      if (e) return g.edge(*e).slot;
    }
    fail(ErrorCode::kParse, "constraint of " + ov.id + " references \"" + uid +
                                "\", which is not a neighbour");
  };
  if (type == "knapsack") {
    Knapsack ks;
    ks.budget = json_number(field(c, "budget", "knapsack"), "budget");
    ks.costs.assign(static_cast<std::size_t>(g.degree(v)), 0.0);
    const Json& costs = field(c, "costs", "knapsack");
    if (!costs.is_object()) fail(ErrorCode::kParse, "knapsack costs must be an object");
    std::vector<char> seen(ks.costs.size(), 0);
    for (const auto& [uid, cost] : costs.items()) {
      const int slot = slot_of(uid);
      ks.costs[static_cast<std::size_t>(slot)] = json_number(cost, "cost");
      seen[static_cast<std::size_t>(slot)] = 1;
    }
    for (std::size_t s = 0; s < seen.size(); ++s) {
      if (!seen[s]) fail(ErrorCode::kParse, "knapsack of " + ov.id + " lacks a cost for every edge");
    }
    return ks;
  }
  if (type == "family") {
    if (g.degree(v) > 32) fail(ErrorCode::kParse, "family constraints allow at most 32 edges");
    std::vector<std::uint32_t> sets;
    for (const Json& set : field(c, "sets", "family")) {
      std::uint32_t mask = 0;
      for (const Json& uid : set) mask |= 1u << slot_of(id_string(uid, "family member"));
      sets.push_back(mask);
    }
    return ExplicitFamily::from_sets(std::move(sets));
  }
  fail(ErrorCode::kParse, "unknown constraint type \"" + type + "\"");
}

StochasticGraph parse_graph(const Json& j) {
  StochasticGraph g;
  std::set<std::string> ids;
  for (const Json& u : field(j, "offline", "instance")) {
    std::string id = id_string(field(u, "id", "offline vertex"), "offline vertex");
    if (!ids.insert(id).second) fail(ErrorCode::kParse, "duplicate offline id " + id);
    const double weight = u.contains("weight") ? json_number(u.at("weight"), "weight") : 0.0;
    g.add_offline(std::move(id), weight);
  }
  ids.clear();
  std::vector<const Json*> constraints;
  for (const Json& v : field(j, "online", "instance")) {
    std::string id = id_string(field(v, "id", "online vertex"), "online vertex");
    if (!ids.insert(id).second) fail(ErrorCode::kParse, "duplicate online id " + id);
    const int vi = g.add_online(std::move(id));
    if (v.contains("edges")) {
      for (const Json& e : v.at("edges")) {
        const std::string uid = id_string(field(e, "u", "edge"), "edge endpoint");
        const auto u = g.find_offline(uid);
        if (!u) fail(ErrorCode::kParse, "edge references unknown offline vertex " + uid);
        const double p = json_number(field(e, "p", "edge"), "p");
        const double w = e.contains("w") ? json_number(e.at("w"), "w") : g.offline(*u).weight;
        g.add_edge(*u, vi, p, w);
      }
    }
    constraints.push_back(v.contains("constraint") ? &v.at("constraint") : nullptr);
  }
  for (int v = 0; v < g.num_online(); ++v) {
    const Json* c = constraints[static_cast<std::size_t>(v)];
    if (c != nullptr) g.set_constraint(v, parse_constraint(*c, g, v));
  }
  return g;
}

template <class Fn>
auto as_parse_error(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    fail(ErrorCode::kParse, e.what());
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, e.what());
  }
}

Json number(double x) { return Json(x); }

}  // namespace

double json_number(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec == std::errc() && ptr == s.data() + s.size()) return x;
  }
  fail(ErrorCode::kParse, std::string("\"") + what + "\" must be a number or decimal string");
}

StochasticGraph graph_from_json(const Json& j) {
  return as_parse_error([&] { return parse_graph(j); });
}

KnownIdInput known_id_from_json(const Json& j) {
  return as_parse_error([&] {
    StochasticGraph types = parse_graph(field(j, "type_graph", "known-i.d. input"));
    std::vector<std::vector<TypeProb>> rows;
    for (const Json& row : field(j, "distributions", "known-i.d. input")) {
      std::vector<TypeProb> r;
      for (const Json& entry : row) {
        const std::string b = id_string(field(entry, "type", "distribution entry"), "type");
        const auto bi = types.find_online(b);
        if (!bi) fail(ErrorCode::kParse, "distribution references unknown type " + b);
        r.push_back({*bi, json_number(field(entry, "prob", "distribution entry"), "prob")});
      }
      rows.push_back(std::move(r));
    }
    return make_known_id(std::move(types), std::move(rows));
  });
}

Instance instance_from_json(const Json& j, std::string id) {
  Instance inst;
  inst.id = std::move(id);
  if (j.is_object() && j.contains("id") && j.at("id").is_string() && inst.id.empty()) {
    inst.id = j.at("id").get<std::string>();
  }
  if (j.is_object() && j.contains("type_graph")) {
    inst.known_id = known_id_from_json(j);
  } else {
    inst.graph = graph_from_json(j);
  }
  return inst;
}

Instance parse_instance(const std::string& text, std::string id) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, e.what());
  }
  return instance_from_json(j, std::move(id));
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string id = path;
  const auto slash = id.find_last_of('/');
  if (slash != std::string::npos) id = id.substr(slash + 1);
  const auto dot = id.find_last_of('.');
  if (dot != std::string::npos && dot > 0) id = id.substr(0, dot);
  return parse_instance(ss.str(), id);
}

Json graph_to_json(const StochasticGraph& g) {
  Json offline = Json::array();
  for (int u = 0; u < g.num_offline(); ++u) {
    offline.push_back({{"id", g.offline(u).id}, {"weight", number(g.offline(u).weight)}});
  }
  Json online = Json::array();
  for (int v = 0; v < g.num_online(); ++v) {
    const OnlineVertex& ov = g.online(v);
    Json edges = Json::array();
    for (EdgeId e : ov.edges) {
      const Edge& edge = g.edge(e);
      edges.push_back({{"u", g.offline(edge.offline).id}, {"p", number(edge.p)}, {"w", number(edge.w)}});
    }
    Json c;
    if (const auto* pat = std::get_if<Patience>(&ov.constraint)) {
      c = {{"type", "patience"}};
      if (pat->limit != kUnboundedPatience) c["l"] = pat->limit;
    } else if (const auto* ks = std::get_if<Knapsack>(&ov.constraint)) {
      Json costs = Json::object();
      for (EdgeId e : ov.edges) {
        const Edge& edge = g.edge(e);
        costs[g.offline(edge.offline).id] = number(ks->costs[static_cast<std::size_t>(edge.slot)]);
      }
      c = {{"type", "knapsack"}, {"budget", number(ks->budget)}, {"costs", costs}};
    } else {
      Json sets = Json::array();
      for (std::uint32_t mask : std::get<ExplicitFamily>(ov.constraint).generators()) {
        Json set = Json::array();
        for (EdgeId e : ov.edges) {
          const Edge& edge = g.edge(e);
          if ((mask >> edge.slot) & 1u) set.push_back(g.offline(edge.offline).id);
        }
        sets.push_back(set);
      }
      c = {{"type", "family"}, {"sets", sets}};
    }
    online.push_back({{"id", ov.id}, {"constraint", c}, {"edges", edges}});
  }
  return {{"offline", offline}, {"online", online}};
}

Json known_id_to_json(const KnownIdInput& input) {
  Json rows = Json::array();
  for (const auto& row : input.rows) {
    Json r = Json::array();
    for (const TypeProb& tp : row) {
      r.push_back({{"type", input.type_graph.online(tp.type).id}, {"prob", number(tp.prob)}});
    }
    rows.push_back(r);
  }
  return {{"type_graph", graph_to_json(input.type_graph)}, {"distributions", rows}};
}

Json instance_to_json(const Instance& inst) {
  Json j = inst.known_id ? known_id_to_json(*inst.known_id) : graph_to_json(*inst.graph);
  if (!inst.id.empty()) j["id"] = inst.id;
  return j;
}

}  // namespace stochmatch
