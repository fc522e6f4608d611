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

#include <cmath>

#include "doctest.h"
#include "stochmatch/error.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/instance_io.hpp"

using namespace stochmatch;

namespace {

const char* kMixed = R"({
  "offline": [{"id": "a", "weight": 1.0}, {"id": "b", "weight": 0.5}, {"id": "c"}],
  "online": [
    {"id": "x", "constraint": {"type": "patience", "l": 2},
     "edges": [{"u": "a", "p": 0.5, "w": 1.0}, {"u": "b", "p": "0.3333333333333333"}]},
    {"id": "y", "constraint": {"type": "knapsack", "budget": 1.0, "costs": {"a": 0.6, "c": 0.5}},
     "edges": [{"u": "a", "p": 0.4}, {"u": "c", "p": 0.9, "w": 2.0}]},
    {"id": "z", "constraint": {"type": "family", "sets": [["a", "b"], ["c"]]},
     "edges": [{"u": "a", "p": 0.2}, {"u": "b", "p": 0.7}, {"u": "c", "p": 0.1}]},
    {"id": "w", "edges": [{"u": "b", "p": 1}]}
  ]
})";

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("instance parsing") {
  const Instance inst = parse_instance(kMixed, "mixed");
  REQUIRE(inst.graph.has_value());
  const StochasticGraph& g = *inst.graph;
  CHECK(g.num_offline() == 3);
  CHECK(g.num_online() == 4);
  CHECK(g.num_edges() == 8);
  CHECK(g.edge(1).p == 0.3333333333333333);
  CHECK(g.edge(1).w == 0.5);
  CHECK(std::get<Patience>(g.online(0).constraint).limit == 2);
  CHECK(std::holds_alternative<Knapsack>(g.online(1).constraint));
  CHECK(membership(g, 1, EdgeString{3}));
  CHECK_FALSE(membership(g, 1, EdgeString{2, 3}));
  CHECK(membership(g, 2, EdgeString{5, 4}));
  CHECK_FALSE(membership(g, 2, EdgeString{4, 6}));
  CHECK(membership(g, 3, EdgeString{7}));
}

TEST_CASE("instances round trip") {
  const Instance inst = parse_instance(kMixed, "mixed");
  const Json once = instance_to_json(inst);
  const Json twice = instance_to_json(instance_from_json(once, "mixed"));
  CHECK(once == twice);
  const StochasticGraph back = graph_from_json(once);
  for (EdgeId e = 0; e < back.num_edges(); ++e) {
    CHECK(back.edge(e).p == inst.graph->edge(e).p);
    CHECK(back.edge(e).w == inst.graph->edge(e).w);
  }
  CHECK(solve_lp_config(back).objective == doctest::Approx(solve_lp_config(*inst.graph).objective).epsilon(1e-12));
}

TEST_CASE("known i.d. round trip") {
  const Json j = generate_instance("id-types", Json::object(), 5);
  const Instance inst = instance_from_json(j);
  REQUIRE(inst.is_known_id());
  const Json again = instance_to_json(instance_from_json(instance_to_json(inst)));
  CHECK(again["distributions"] == j["distributions"]);
  CHECK(solve_lp_config_id(*instance_from_json(again).known_id).objective ==
        doctest::Approx(solve_lp_config_id(*inst.known_id).objective).epsilon(1e-12));
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_instance("{"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_instance(R"({"offline": []})"); }) == ErrorCode::kParse);
  CHECK(code_of([] {
          parse_instance(R"({"offline":[{"id":"a"}],"online":[{"id":"x","edges":[{"u":"a","p":1.5}]}]})");
        }) == ErrorCode::kParse);
  CHECK(code_of([] {
          parse_instance(R"({"offline":[{"id":"a"}],"online":[{"id":"x","edges":[{"u":"q","p":0.5}]}]})");
        }) == ErrorCode::kParse);
  CHECK(code_of([] {
          parse_instance(R"({"offline":[{"id":"a"}],"online":[{"id":"x","constraint":{"type":"knapsack","budget":1,"costs":{}},"edges":[{"u":"a","p":0.5}]}]})");
        }) == ErrorCode::kParse);
  CHECK(code_of([] {
          parse_instance(R"({"offline":[{"id":"a"}],"online":[{"id":"x","edges":[{"u":"a","p":"abc"}]}]})");
        }) == ErrorCode::kParse);
  CHECK(code_of([] {
          parse_instance(R"({"type_graph":{"offline":[{"id":"a"}],"online":[{"id":"b","edges":[{"u":"a","p":0.5}]}]},"distributions":[[{"type":"b","prob":0.4}]]})");
        }) == ErrorCode::kParse);
  CHECK(code_of([] { load_instance("/nonexistent/instance.json"); }) == ErrorCode::kIo);
}

TEST_CASE("generators") {
  for (const std::string& family : generator_families()) {
    const Json a = generate_instance(family, Json::object(), 11);
    const Json b = generate_instance(family, Json::object(), 11);
    CHECK(a == b);
    CHECK(a.dump() != generate_instance(family, Json::object(), 12).dump());
    CHECK_NOTHROW(instance_from_json(a));
  }
  CHECK(code_of([] { generate_instance("er-gap", Json{{"bogus", 1}}, 1); }) != ErrorCode::kInternal);
  CHECK_THROWS(generate_instance("no-such-family", Json::object(), 1));
  CHECK_THROWS(nonmonotone_star(0.2));
  const StochasticGraph g = er_gap_graph(7, 0.3, 2);
  CHECK(g.num_online() == 7);
  CHECK(g.num_offline() == 2);
  CHECK(g.num_edges() == 14);
  for (const Edge& e : g.edges()) CHECK(e.p == 0.3);
  const Instance er = instance_from_json(generate_instance("er-gap", Json{{"n", 50}, {"p", 0.1}}, 1));
  CHECK(er.graph->num_offline() == 4);  // floor(0.9 * 5)
}

TEST_CASE("names and arrival specs") {
  for (const char* name : {"config", "config-id", "std", "std-unit", "dp", "qc"}) {
    CHECK(to_string(parse_lp_kind(name)) == name);
  }
  for (const char* name : {"known-graph", "known-id", "known-id-ocrs", "known-id-rcrs", "secretary", "greedy-dp"}) {
    CHECK(to_string(parse_algorithm(name)) == name);
  }
  CHECK_THROWS(parse_lp_kind("simplex"));
  CHECK_THROWS(parse_algorithm("magic"));
  CHECK(parse_arrival("rom").kind == ArrivalSpec::Kind::kRandom);
  const ArrivalSpec fixed = parse_arrival("aom:2,0,1");
  CHECK(fixed.kind == ArrivalSpec::Kind::kFixed);
  CHECK(fixed.permutation == std::vector<int>{2, 0, 1});
  CHECK(parse_arrival("aom:worst").sampled == 0);
  CHECK(parse_arrival("aom:worst16").sampled == 16);
  CHECK_THROWS(parse_arrival("aom:"));
  CHECK_THROWS(parse_arrival("aom:1,x"));
  CHECK_THROWS(parse_arrival("later"));
}

TEST_CASE("solve_lp reports") {
  const Instance inst = instance_from_json(generate_instance("nonmonotone-star", Json::object(), 1));
  const LpReport cfg = solve_lp(inst, LpKind::kConfig);
  CHECK(cfg.objective == doctest::Approx(19.0 / 18.0).epsilon(1e-9));
  CHECK(solve_lp(inst, LpKind::kDp).objective == doctest::Approx(19.0 / 18.0).epsilon(1e-9));
  CHECK(solve_lp(inst, LpKind::kConfigId).objective == doctest::Approx(19.0 / 18.0).epsilon(1e-9));
  CHECK(cfg.to_json().contains("objective"));
  CHECK(code_of([&] { solve_lp(inst, LpKind::kQc); }) == ErrorCode::kInapplicable);
  const Instance id = instance_from_json(generate_instance("iid-types", Json::object(), 2));
  CHECK(code_of([&] { solve_lp(id, LpKind::kStd); }) == ErrorCode::kInapplicable);
}

// Property: identical configurations give bit-identical rows.
TEST_CASE("simulation is deterministic in the seed") {
  const Instance inst =
      instance_from_json(generate_instance("random-weighted", Json{{"vertex_weighted", true}}, 3));
  for (const char* alg : {"known-graph", "secretary", "greedy-dp", "known-id", "known-id-ocrs", "known-id-rcrs"}) {
    SimulationConfig c;
    c.algorithm = parse_algorithm(alg);
    c.trials = 3000;
    c.seed = 9;
    c.arrival = parse_arrival(std::string(alg) == "known-id-ocrs" ? "aom:worst" : "rom");
    c.screen_trials = 500;
    const ResultRow a = simulate(inst, c), b = simulate(inst, c);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(a.ratio == doctest::Approx(a.mean / a.lp_value));
    CHECK(a.ci99 == doctest::Approx(kZ99 * a.sem));
    c.seed = 10;
    CHECK(to_csv(simulate(inst, c)) != to_csv(a));
  }
}

TEST_CASE("greedy-dp needs vertex weights") {
  const Instance inst = instance_from_json(generate_instance("random-weighted", Json::object(), 3));
  SimulationConfig c;
  c.algorithm = Algorithm::kGreedyDp;
  c.trials = 10;
  CHECK(code_of([&] { simulate(inst, c); }) == ErrorCode::kInapplicable);
}

TEST_CASE("result rows") {
  const Instance inst = instance_from_json(generate_instance("nonmonotone-star", Json::object(), 1));
  SimulationConfig c;
  c.algorithm = Algorithm::kGreedyDp;
  c.trials = 2000;
  c.seed = 4;
  const ResultRow r = simulate(inst, c);
  CHECK(csv_header() == "instance,algorithm,arrival,trials,mean,ci99,lp,lp_value,opt,ratio");
  REQUIRE(r.opt.has_value());
  CHECK(*r.opt == doctest::Approx(19.0 / 18.0));
  CHECK(r.lp == "dp");
  const std::string line = to_csv(r);
  CHECK(std::count(line.begin(), line.end(), ',') == 9);
  const Json j = r.to_json();
  CHECK(j["trials"] == 2000);
  CHECK(j["algorithm"] == "greedy-dp");
}
