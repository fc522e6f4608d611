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

#include "stochmatch/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

#include "stochmatch/error.hpp"
#include "stochmatch/oracles.hpp"

namespace stochmatch {

namespace {

const std::pair<const char*, LpKind> kLpNames[] = {
    {"config", LpKind::kConfig}, {"config-id", LpKind::kConfigId},
    {"std", LpKind::kStd},       {"std-unit", LpKind::kStdUnit},
    {"dp", LpKind::kDp},         {"qc", LpKind::kQc},
};

const std::pair<const char*, Algorithm> kAlgorithmNames[] = {
    {"known-graph", Algorithm::kKnownGraph},
    {"known-id", Algorithm::kKnownId},
    {"known-id-ocrs", Algorithm::kKnownIdOcrs},
    {"known-id-rcrs", Algorithm::kKnownIdRcrs},
    {"secretary", Algorithm::kSecretary},
    {"greedy-dp", Algorithm::kGreedyDp},
};

const StochasticGraph& need_graph(const Instance& inst, const std::string& what) {
  if (!inst.graph) fail(ErrorCode::kInapplicable, what + " needs a stochastic graph instance");
  return *inst.graph;
}

KnownIdInput as_known_id(const Instance& inst) {
  return inst.known_id ? *inst.known_id : point_mass_input(*inst.graph);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

template <class Run>
RunningStats estimate(std::int64_t trials, std::uint64_t seed, const ArrivalModel& model,
                      int n, const Run& run) {
  return run_trials<RunningStats>(
      trials, seed, [] { return RunningStats(); },
      [&](RunningStats& acc, std::int64_t, Rng& rng) {
        const ArrivalOrder order = model.realize(n, rng);
        acc.add(run(order, rng));
      });
}

std::vector<std::vector<int>> candidate_orders(int n, int sampled, std::uint64_t seed) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  long long factorial = 1;
  for (int k = 2; k <= n && factorial <= 1000000; ++k) factorial *= k;
  if (sampled == 0 || factorial <= sampled) {
    if (factorial > 40320) {
      fail(ErrorCode::kTooLarge, "aom:worst enumerates at most 8! orders; use aom:worst<k>");
    }
    do out.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  Rng rng = make_rng(seed, 0x0badULL);
  for (int s = 0; s < sampled; ++s) {
    shuffle_in_place(perm, rng);
    out.push_back(perm);
  }
  return out;
}

}  // namespace

LpKind parse_lp_kind(const std::string& name) {
  for (const auto& [n, k] : kLpNames) {
    if (name == n) return k;
  }
  fail(ErrorCode::kInvalidArgument, "unknown LP \"" + name + "\"");
}

std::string to_string(LpKind kind) {
  for (const auto& [n, k] : kLpNames) {
    if (kind == k) return n;
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (const auto& [n, a] : kAlgorithmNames) {
    if (name == n) return a;
  }
  fail(ErrorCode::kInvalidArgument, "unknown algorithm \"" + name + "\"");
}

std::string to_string(Algorithm a) {
  for (const auto& [n, k] : kAlgorithmNames) {
    if (a == k) return n;
  }
  return "unknown";
}

Json LpReport::to_json() const {
  Json j = {{"lp", to_string(kind)}, {"objective", objective}};
  if (kind == LpKind::kConfig || kind == LpKind::kConfigId) {
    j["columns"] = columns;
    j["rounds"] = rounds;
    j["support_sizes"] = support_sizes;
    j["alpha"] = alpha;
  }
  return j;
}

LpReport solve_lp(const Instance& inst, LpKind kind, const ColumnGenOptions& options) {
  LpReport r;
  r.kind = kind;
  switch (kind) {
    case LpKind::kConfig: {
      const ConfigLpSolution sol = solve_lp_config(need_graph(inst, "LP-config"), options);
      r.objective = sol.objective;
      r.columns = static_cast<std::size_t>(sol.columns);
      r.rounds = sol.rounds;
      for (const auto& d : sol.support) r.support_sizes.push_back(d.size());
      r.alpha = sol.alpha;
      break;
    }
    case LpKind::kConfigId: {
      const ConfigIdLpSolution sol = solve_lp_config_id(as_known_id(inst), options);
      r.objective = sol.objective;
      r.columns = static_cast<std::size_t>(sol.columns);
      r.rounds = sol.rounds;
      for (const auto& grp : sol.groups) r.support_sizes.push_back(grp.support.size());
      r.alpha = sol.alpha;
      break;
    }
    case LpKind::kStd: r.objective = solve_lp_std(need_graph(inst, "LP-std")); break;
    case LpKind::kStdUnit: r.objective = solve_lp_std_unit(need_graph(inst, "LP-std-unit")); break;
    case LpKind::kDp: r.objective = solve_lp_dp(need_graph(inst, "LP-DP")); break;
    case LpKind::kQc: r.objective = solve_lp_qc(need_graph(inst, "LP-QC")); break;
  }
  return r;
}

ArrivalSpec parse_arrival(const std::string& text) {
  ArrivalSpec spec;
  if (text == "rom") return spec;
  require(text.rfind("aom:", 0) == 0, "arrival must be rom or aom:<...>");
  const std::string rest = text.substr(4);
  if (rest.rfind("worst", 0) == 0) {
    spec.kind = ArrivalSpec::Kind::kWorst;
    const std::string k = rest.substr(5);
    if (!k.empty()) {
      require(k.find_first_not_of("0123456789") == std::string::npos && k.size() < 9,
              "aom:worst<k> needs a positive integer k");
      spec.sampled = std::stoi(k);
      require(spec.sampled >= 1, "aom:worst<k> needs k >= 1");
    }
    return spec;
  }
  spec.kind = ArrivalSpec::Kind::kFixed;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty() && item.find_first_not_of("0123456789") == std::string::npos &&
                item.size() < 9,
            "aom permutation entries must be nonnegative integers");
    spec.permutation.push_back(std::stoi(item));
  }
  require(!spec.permutation.empty(), "aom permutation is empty");
  return spec;
}

RunningStats estimate_known_graph(const StochasticGraph& g, const ConfigLpSolution& sol,
                                  const ArrivalModel& model, std::int64_t trials,
                                  std::uint64_t seed) {
  const KnownGraphPolicy policy(g, sol);
  return estimate(trials, seed, model, g.num_online(),
                  [&](const ArrivalOrder& a, Rng& rng) { return policy.run(a, rng).weight; });
}

RunningStats estimate_known_id(const KnownIdInput& input, const ConfigIdLpSolution& sol,
                               IdMode mode, const ArrivalModel& model,
                               std::int64_t trials, std::uint64_t seed) {
  const KnownIdPolicy policy(input, sol, mode);
  return estimate(trials, seed, model, input.n(),
                  [&](const ArrivalOrder& a, Rng& rng) { return policy.run(a, rng).weight; });
}

RunningStats estimate_greedy_dp(const StochasticGraph& g, const ArrivalModel& model,
                                std::int64_t trials, std::uint64_t seed) {
  const GreedyDpPolicy policy(g);
  return estimate(trials, seed, model, g.num_online(),
                  [&](const ArrivalOrder& a, Rng& rng) { return policy.run(a, rng).weight; });
}

RunningStats estimate_secretary(const StochasticGraph& g, const ArrivalModel& model,
                                std::int64_t trials, std::uint64_t seed) {
  const SecretaryPolicy policy(g);
  return estimate(trials, seed, model, g.num_online(),
                  [&](const ArrivalOrder& a, Rng& rng) { return policy.run(a, rng).weight; });
}

Json ResultRow::to_json() const {
  Json j = {{"instance", instance}, {"algorithm", algorithm}, {"arrival", arrival},
            {"trials", trials},     {"mean", mean},           {"ci99", ci99},
            {"lp", lp},             {"lp_value", lp_value},   {"ratio", ratio}};
  j["opt"] = opt ? Json(*opt) : Json(nullptr);
  return j;
}

std::string csv_header() {
  return "instance,algorithm,arrival,trials,mean,ci99,lp,lp_value,opt,ratio";
}

std::string to_csv(const ResultRow& row) {
  std::string out = csv_field(row.instance) + ',' + csv_field(row.algorithm) + ',' +
                    csv_field(row.arrival) + ',' + std::to_string(row.trials) + ',' +
                    format_double(row.mean) + ',' + format_double(row.ci99) + ',' +
                    csv_field(row.lp) + ',' + format_double(row.lp_value) + ',';
  if (row.opt) out += format_double(*row.opt);
  return out + ',' + format_double(row.ratio);
}

ResultRow simulate(const Instance& inst, const SimulationConfig& config) {
  require(config.trials >= 1, "trial count must be at least 1");
  require(config.screen_trials >= 1, "screening trial count must be at least 1");
  const Algorithm alg = config.algorithm;
  const bool id_alg = alg == Algorithm::kKnownId || alg == Algorithm::kKnownIdOcrs ||
                      alg == Algorithm::kKnownIdRcrs;

  ResultRow row;
  row.instance = inst.id.empty() ? "instance" : inst.id;
  row.algorithm = to_string(alg);
  row.trials = config.trials;

  // Reference LP and a trial runner for a given arrival model and seed.
  std::function<RunningStats(const ArrivalModel&, std::int64_t, std::uint64_t)> runner;
  int n = 0;
  std::optional<KnownIdInput> id_input;
  std::optional<ConfigIdLpSolution> id_sol;
  std::optional<ConfigLpSolution> graph_sol;

  if (id_alg) {
    id_input = as_known_id(inst);
    id_sol = solve_lp_config_id(*id_input, config.lp_options);
    row.lp = "config-id";
    row.lp_value = id_sol->objective;
    n = id_input->n();
    const IdMode mode = alg == Algorithm::kKnownId       ? IdMode::kPlain
                        : alg == Algorithm::kKnownIdOcrs ? IdMode::kOcrs
                                                         : IdMode::kRcrs;
    runner = [&, mode](const ArrivalModel& m, std::int64_t t, std::uint64_t s) {
      return estimate_known_id(*id_input, *id_sol, mode, m, t, s);
    };
  } else if (alg == Algorithm::kKnownGraph || alg == Algorithm::kSecretary) {
    const StochasticGraph& g = need_graph(inst, row.algorithm);
    graph_sol = solve_lp_config(g, config.lp_options);
    row.lp = "config";
    row.lp_value = graph_sol->objective;
    n = g.num_online();
    if (alg == Algorithm::kKnownGraph) {
      runner = [&](const ArrivalModel& m, std::int64_t t, std::uint64_t s) {
        return estimate_known_graph(g, *graph_sol, m, t, s);
      };
    } else {
      runner = [&](const ArrivalModel& m, std::int64_t t, std::uint64_t s) {
        return estimate_secretary(g, m, t, s);
      };
    }
  } else if (inst.graph) {
    const StochasticGraph& g = *inst.graph;
    n = g.num_online();
    row.lp = "dp";
    try {
      row.lp_value = solve_lp_dp(g);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLarge) throw;
      row.lp = "config";
      row.lp_value = solve_lp_config(g, config.lp_options).objective;
    }
    runner = [&](const ArrivalModel& m, std::int64_t t, std::uint64_t s) {
      return estimate_greedy_dp(g, m, t, s);
    };
  } else {
    // Greedy-DP on a fresh draw per trial.
    id_input = *inst.known_id;
    require(id_input->type_graph.is_vertex_weighted(),
            "greedy-dp needs vertex weights");
    row.lp = "config-id";
    row.lp_value = solve_lp_config_id(*id_input, config.lp_options).objective;
    n = id_input->n();
    runner = [&](const ArrivalModel& m, std::int64_t t, std::uint64_t s) {
      return estimate(t, s, m, n, [&](const ArrivalOrder& a, Rng& rng) {
        std::vector<int> types(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          const auto& r = id_input->rows[static_cast<std::size_t>(i)];
          const double x = uniform01(rng);
          double acc = 0.0;
          types[static_cast<std::size_t>(i)] = r.back().type;
          for (const TypeProb& tp : r) {
            acc += tp.prob;
            if (x < acc) {
              types[static_cast<std::size_t>(i)] = tp.type;
              break;
            }
          }
        }
        const StochasticGraph g = realize_types(*id_input, types);
        return GreedyDpPolicy(g).run(a, rng).weight;
      });
    };
  }

  RunningStats stats;
  switch (config.arrival.kind) {
    case ArrivalSpec::Kind::kRandom:
      row.arrival = "rom";
      stats = runner(ArrivalModel::random_order(), config.trials, stream_seed(config.seed, 1));
      break;
    case ArrivalSpec::Kind::kFixed: {
      const ArrivalModel m = ArrivalModel::adversarial(config.arrival.permutation);
      row.arrival = "aom:" + join(config.arrival.permutation);
      Rng probe = make_rng(config.seed, 2);
      m.realize(n, probe);  // validates the permutation up front
      stats = runner(m, config.trials, stream_seed(config.seed, 1));
      break;
    }
    case ArrivalSpec::Kind::kWorst: {
      const auto orders = candidate_orders(n, config.arrival.sampled, config.seed);
      std::size_t worst = 0;
      double worst_mean = 0.0;
      for (std::size_t o = 0; o < orders.size(); ++o) {
        const RunningStats s = runner(ArrivalModel::adversarial(orders[o]), config.screen_trials,
                                      stream_seed(config.seed, 1000 + o));
        if (o == 0 || s.mean() < worst_mean) {
          worst = o;
          worst_mean = s.mean();
        }
      }
      row.arrival = "aom:worst[" + join(orders[worst]) + "]";
      stats = runner(ArrivalModel::adversarial(orders[worst]), config.trials,
                     stream_seed(config.seed, 1));
      break;
    }
  }

  row.mean = stats.mean();
  row.ci99 = stats.ci99();
  row.sem = stats.sem();
  row.ratio = row.lp_value > 0.0 ? row.mean / row.lp_value : 1.0;
  if (config.brute_force && inst.graph) {
    try {
      row.opt = brute_force_opt(*inst.graph);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLarge) throw;
    }
  }
  return row;
}

}  // namespace stochmatch
