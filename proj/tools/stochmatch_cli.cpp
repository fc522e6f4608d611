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

// Command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochmatch/stochmatch.h"

namespace {

using Json = nlohmann::json;

// Exit codes: 1 argument or failed verification, 2 parse, 3 inapplicable
// or too large, 4 solver cap, 5 I/O, 6 internal.
int exit_code(sm_status s) {
  switch (s) {
    case SM_OK: return 0;
    case SM_ERR_ARGUMENT: return 1;
    case SM_ERR_PARSE: return 2;
    case SM_ERR_INAPPLICABLE: return 3;
    case SM_ERR_TOO_LARGE: return 3;
    case SM_ERR_CAP: return 4;
    case SM_ERR_IO: return 5;
    case SM_ERR_INTERNAL: return 6;
  }
  return 6;
}

struct Failure {
  sm_status status;
};

void check(sm_status s) {
  if (s != SM_OK) {
    std::cerr << "error: " << sm_last_error() << "\n";
    throw Failure{s};
  }
}

std::string take(char* s) {
  std::string out(s);
  sm_string_free(s);
  return out;
}

using InstancePtr = std::unique_ptr<sm_instance, decltype(&sm_instance_free)>;

InstancePtr open_instance(const std::string& path, const std::string& family,
                          const std::string& params, std::uint64_t seed) {
  sm_instance* raw = nullptr;
  if (!family.empty()) {
    char* json = nullptr;
    check(sm_generate(family.c_str(), params.c_str(), seed, &json));
    const std::string text = take(json);
    check(sm_instance_from_json(text.c_str(), nullptr, &raw));
  } else {
    check(sm_instance_load(path.c_str(), &raw));
  }
  return InstancePtr(raw, sm_instance_free);
}

std::string lp_label(const std::string& lp) {
  if (lp == "dp") return "LP-DP";
  if (lp == "qc") return "LP-QC";
  return "LP-" + lp;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Failure{SM_ERR_IO};
  }
  out << text;
}

int run_solve(const std::string& path, const std::vector<std::string>& lps,
              const std::string& format) {
  InstancePtr inst = open_instance(path, "", "", 0);
  Json all = Json::array();
  for (const std::string& lp : lps) {
    char* out = nullptr;
    check(sm_solve_lp_json(inst.get(), lp.c_str(), &out));
    const Json j = Json::parse(take(out));
    if (format == "json") {
      all.push_back(j);
      continue;
    }
    std::printf("%s = %.12g\n", lp_label(lp).c_str(), j.at("objective").get<double>());
    if (j.contains("columns")) {
      std::printf("  columns %lld, rounds %d\n", j.at("columns").get<long long>(),
                  j.at("rounds").get<int>());
      std::string sizes, alpha;
      for (const auto& s : j.at("support_sizes")) sizes += " " + std::to_string(s.get<long long>());
      for (const auto& a : j.at("alpha")) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6g", a.get<double>());
        alpha += buf;
      }
      std::printf("  support sizes:%s\n  offline duals:%s\n", sizes.c_str(), alpha.c_str());
    }
  }
  if (format == "json") std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  return 0;
}

int run_simulate(const std::string& path, const std::string& family, const std::string& params,
                 sm_sim_options options, const std::string& format, const std::string& out_path) {
  InstancePtr inst = open_instance(path, family, params, options.seed);
  char* raw = nullptr;
  check(sm_simulate(inst.get(), &options, format.c_str(), &raw));
  const std::string row = take(raw);
  if (format == "json") {
    write_output(out_path, row + "\n");
    return 0;
  }
  char* hdr = nullptr;
  check(sm_csv_header(&hdr));
  const std::string header = take(hdr);
  if (out_path.empty() || out_path == "-") {
    std::cout << header << "\n" << row << "\n";
    return 0;
  }
  bool fresh = true;
  {
    std::ifstream probe(out_path, std::ios::binary | std::ios::ate);
    fresh = !probe || probe.tellg() == 0;
  }
  std::ofstream out(out_path, std::ios::app);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return exit_code(SM_ERR_IO);
  }
  if (fresh) out << header << "\n";
  out << row << "\n";
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, std::int64_t trials, int instances,
               const std::string& format) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = {"crs", "rounding", "lp-consistency", "benchmarks"};
  } else {
    suites = {suite};
  }
  bool ok = true;
  Json reports = Json::array();
  for (const std::string& s : suites) {
    int passed = 0;
    char* raw = nullptr;
    check(sm_verify(s.c_str(), seed, trials, instances, &passed, &raw));
    const Json rep = Json::parse(take(raw));
    ok = ok && passed != 0;
    if (format == "json") {
      reports.push_back(rep);
      continue;
    }
    for (const auto& c : rep.at("checks")) {
      std::printf("[%s] %s: %s (%s)\n", c.at("passed").get<bool>() ? "PASS" : "FAIL", s.c_str(),
                  c.at("name").get<std::string>().c_str(), c.at("detail").get<std::string>().c_str());
    }
  }
  if (format == "json") std::cout << reports.dump(2) << "\n";
  return ok ? 0 : 1;
}

int run_gap(int n, double p, int s, std::int64_t trials, std::uint64_t seed,
            const std::string& format) {
  char* raw = nullptr;
  check(sm_gap(n, p, s, trials, seed, &raw));
  const Json j = Json::parse(take(raw));
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::printf("n=%d p=%g s=%d trials=%lld\n", n, p, s, static_cast<long long>(trials));
  std::printf("adaptive      %.6f +- %.6f (exact %.6f)\n", j["adaptive_mean"].get<double>(),
              j["adaptive_ci99"].get<double>(), j["adaptive_exact"].get<double>());
  std::printf("non-adaptive  %.6f +- %.6f (exact %.6f, bound %.6f)\n",
              j["nonadaptive_mean"].get<double>(), j["nonadaptive_ci99"].get<double>(),
              j["nonadaptive_exact"].get<double>(), j["jensen_bound"].get<double>());
  std::printf("ratio         %.6f +- %.6f (exact %.6f)\n", j["ratio"].get<double>(),
              j["ratio_ci99"].get<double>(), j["exact_ratio"].get<double>());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online stochastic matching: LP solver, simulator and verifier."};
  app.require_subcommand(1);

  std::string instance, format = "text", out_path;
  std::vector<std::string> lps = {"config"};
  auto* solve = app.add_subcommand("solve", "Solve an LP relaxation of an instance.");
  solve->add_option("--instance", instance, "Instance JSON path.")->required();
  solve->add_option("--lp", lps, "config, config-id, std, std-unit, dp, qc (repeatable).")
      ->check(CLI::IsMember({"config", "config-id", "std", "std-unit", "dp", "qc"}));
  solve->add_option("--format", format, "text or json.")->check(CLI::IsMember({"text", "json"}));

  sm_sim_options sim;
  sm_sim_options_init(&sim);
  std::string algorithm = "greedy-dp", arrival = "rom", family, params;
  std::string sim_format = "csv";
  bool no_brute_force = false;
  auto* simulate = app.add_subcommand("simulate", "Run an online algorithm and report a result row.");
  auto* sim_instance = simulate->add_option("--instance", instance, "Instance JSON path.");
  auto* sim_family = simulate->add_option("--generate", family, "Generator family instead of a file.");
  sim_instance->excludes(sim_family);
  simulate->add_option("--params", params, "Generator params as JSON.")->needs(sim_family);
  simulate->add_option("--algorithm", algorithm, "Online algorithm.")
      ->check(CLI::IsMember({"known-graph", "known-id", "known-id-ocrs", "known-id-rcrs",
                             "secretary", "greedy-dp"}));
  simulate->add_option("--arrival", arrival, "rom, aom:<i,j,...>, aom:worst or aom:worst<k>.");
  simulate->add_option("--trials", sim.trials, "Trial count.")->check(CLI::PositiveNumber);
  simulate->add_option("--screen-trials", sim.screen_trials, "Trials per order when screening.")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Master seed.")->required();
  simulate->add_option("--out", out_path, "CSV file to append to (header on first write).");
  simulate->add_option("--format", sim_format, "csv or json.")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_flag("--no-brute-force", no_brute_force, "Skip the OPT(G) oracle.");

  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Emit a generated instance as JSON.");
  generate->add_option("--family", family, "er-gap, nonmonotone-star, random-weighted, iid-types, id-types.")
      ->required();
  generate->add_option("--params", params, "Generator params as JSON.");
  generate->add_option("--seed", gen_seed, "Seed.")->required();
  generate->add_option("--out", out_path, "Output path (stdout by default).");

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  std::int64_t verify_trials = 1000000;
  int verify_instances = 40;
  std::string verify_format = "text";
  auto* verify = app.add_subcommand("verify", "Run invariant suites.");
  verify->add_option("--suite", suite, "crs, rounding, lp-consistency, benchmarks or all.")
      ->check(CLI::IsMember({"crs", "rounding", "lp-consistency", "benchmarks", "all"}));
  verify->add_option("--seed", verify_seed, "Seed.");
  verify->add_option("--trials", verify_trials, "Trials per CRS check.")->check(CLI::PositiveNumber);
  verify->add_option("--instances", verify_instances, "Random instances per check.")
      ->check(CLI::PositiveNumber);
  verify->add_option("--format", verify_format, "text or json.")->check(CLI::IsMember({"text", "json"}));

  int gap_n = 2000, gap_s = 36;
  double gap_p = 0.02;
  std::int64_t gap_trials = 10000;
  std::uint64_t gap_seed = 0;
  std::string gap_format = "text";
  auto* gap = app.add_subcommand("gap", "Adaptivity-gap experiment on the complete s x n graph.");
  gap->add_option("--n", gap_n, "Online vertices.")->check(CLI::PositiveNumber);
  gap->add_option("--p", gap_p, "Edge probability.")->check(CLI::Range(0.0, 1.0));
  gap->add_option("--s", gap_s, "Offline vertices.")->check(CLI::PositiveNumber);
  gap->add_option("--trials", gap_trials, "Trials per side.")->check(CLI::PositiveNumber);
  gap->add_option("--seed", gap_seed, "Seed.")->required();
  gap->add_option("--format", gap_format, "text or json.")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version print and succeed; usage errors map to exit 1.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return run_solve(instance, lps, format);
    if (*simulate) {
      if (instance.empty() && family.empty()) {
        std::cerr << "error: simulate needs --instance or --generate\n";
        return 1;
      }
      sim.algorithm = algorithm.c_str();
      sim.arrival = arrival.c_str();
      sim.brute_force = no_brute_force ? 0 : 1;
      return run_simulate(instance, family, params, sim, sim_format, out_path);
    }
    if (*generate) {
      char* raw = nullptr;
      check(sm_generate(family.c_str(), params.c_str(), gen_seed, &raw));
      write_output(out_path, take(raw) + "\n");
      return 0;
    }
    if (*verify) return run_verify(suite, verify_seed, verify_trials, verify_instances, verify_format);
    if (*gap) return run_gap(gap_n, gap_p, gap_s, gap_trials, gap_seed, gap_format);
  } catch (const Failure& f) {
    return exit_code(f.status);
  }
  return 0;
}
