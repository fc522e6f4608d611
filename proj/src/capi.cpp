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

#include "stochmatch/stochmatch.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "stochmatch/error.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/instance_io.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/verify.hpp"

struct sm_instance {
  stochmatch::Instance inst;
};

namespace {

thread_local std::string g_last_error;

sm_status to_status(stochmatch::ErrorCode code) {
  using stochmatch::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return SM_ERR_ARGUMENT;
    case ErrorCode::kParse: return SM_ERR_PARSE;
    case ErrorCode::kInapplicable: return SM_ERR_INAPPLICABLE;
    case ErrorCode::kIterationCap: return SM_ERR_CAP;
    case ErrorCode::kIo: return SM_ERR_IO;
    case ErrorCode::kInternal: return SM_ERR_INTERNAL;
    case ErrorCode::kTooLarge: return SM_ERR_TOO_LARGE;
  }
  return SM_ERR_INTERNAL;
}

template <class Fn>
sm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SM_OK;
  } catch (const stochmatch::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  stochmatch::require(p != nullptr, std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* sm_version(void) { return "1.0.0"; }

const char* sm_last_error(void) { return g_last_error.c_str(); }

void sm_string_free(char* s) { std::free(s); }

sm_status sm_instance_from_json(const char* json, const char* id, sm_instance** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto* h = new sm_instance{stochmatch::parse_instance(json, id ? id : "")};
    *out = h;
  });
}

sm_status sm_instance_load(const char* path, sm_instance** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sm_instance{stochmatch::load_instance(path)};
  });
}

void sm_instance_free(sm_instance* inst) { delete inst; }

int sm_instance_is_known_id(const sm_instance* inst) {
  return inst != nullptr && inst->inst.is_known_id() ? 1 : 0;
}

sm_status sm_instance_to_json(const sm_instance* inst, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    *out = dup_string(stochmatch::instance_to_json(inst->inst).dump());
  });
}

sm_status sm_solve_lp(const sm_instance* inst, const char* lp, double* objective) {
  return guarded([&] {
    need(inst, "instance");
    need(lp, "lp");
    need(objective, "objective");
    *objective = stochmatch::solve_lp(inst->inst, stochmatch::parse_lp_kind(lp)).objective;
  });
}

sm_status sm_solve_lp_json(const sm_instance* inst, const char* lp, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(lp, "lp");
    need(out, "out");
    const auto report = stochmatch::solve_lp(inst->inst, stochmatch::parse_lp_kind(lp));
    *out = dup_string(report.to_json().dump());
  });
}

sm_status sm_brute_force_opt(const sm_instance* inst, double* out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    if (!inst->inst.graph) {
      stochmatch::fail(stochmatch::ErrorCode::kInapplicable,
                       "OPT(G) needs a stochastic graph instance");
    }
    *out = stochmatch::brute_force_opt(*inst->inst.graph);
  });
}

void sm_sim_options_init(sm_sim_options* options) {
  if (options == nullptr) return;
  options->algorithm = "greedy-dp";
  options->arrival = "rom";
  options->trials = 1000;
  options->seed = 0;
  options->screen_trials = 20000;
  options->brute_force = 1;
}

sm_status sm_simulate(const sm_instance* inst, const sm_sim_options* options,
                      const char* format, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(options, "options");
    need(out, "out");
    need(options->algorithm, "algorithm");
    need(options->arrival, "arrival");
    const std::string fmt = format ? format : "csv";
    stochmatch::require(fmt == "csv" || fmt == "json", "format must be csv or json");
    stochmatch::SimulationConfig config;
    config.algorithm = stochmatch::parse_algorithm(options->algorithm);
    config.arrival = stochmatch::parse_arrival(options->arrival);
    config.trials = options->trials;
    config.seed = options->seed;
    config.screen_trials = options->screen_trials;
    config.brute_force = options->brute_force != 0;
    const auto row = stochmatch::simulate(inst->inst, config);
    *out = dup_string(fmt == "csv" ? stochmatch::to_csv(row) : row.to_json().dump());
  });
}

sm_status sm_csv_header(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup_string(stochmatch::csv_header());
  });
}

sm_status sm_generate(const char* family, const char* params_json, uint64_t seed,
                      char** out) {
  return guarded([&] {
    need(family, "family");
    need(out, "out");
    stochmatch::Json params = stochmatch::Json::object();
    if (params_json != nullptr && *params_json != '\0') {
      try {
        params = stochmatch::Json::parse(params_json);
      } catch (const stochmatch::Json::exception& e) {
        stochmatch::fail(stochmatch::ErrorCode::kInvalidArgument,
                         std::string("params: ") + e.what());
      }
    }
    *out = dup_string(stochmatch::generate_instance(family, params, seed).dump(2));
  });
}

sm_status sm_verify(const char* suite, uint64_t seed, int64_t crs_trials, int instances,
                    int* passed, char** out) {
  return guarded([&] {
    need(suite, "suite");
    need(passed, "passed");
    need(out, "out");
    stochmatch::VerifyOptions o;
    o.seed = seed;
    o.crs_trials = crs_trials;
    o.instances = instances;
    const auto report = stochmatch::run_verify_suite(suite, o);
    *passed = report.passed() ? 1 : 0;
    *out = dup_string(report.to_json().dump());
  });
}

sm_status sm_gap(int n, double p, int s, int64_t trials, uint64_t seed, char** out) {
  return guarded([&] {
    need(out, "out");
    const auto r = stochmatch::adaptivity_gap_experiment(n, p, s, trials, seed);
    const stochmatch::Json j = {
        {"n", r.n},
        {"p", r.p},
        {"s", r.s},
        {"trials", r.trials},
        {"adaptive_mean", r.adaptive_mean},
        {"adaptive_ci99", r.adaptive_ci},
        {"adaptive_exact", r.adaptive_exact},
        {"nonadaptive_mean", r.nonadaptive_mean},
        {"nonadaptive_ci99", r.nonadaptive_ci},
        {"nonadaptive_exact", r.nonadaptive_exact},
        {"jensen_bound", r.jensen_bound},
        {"ratio", r.ratio},
        {"ratio_ci99", r.ratio_ci},
        {"exact_ratio", r.exact_ratio},
    };
    *out = dup_string(j.dump());
  });
}

}  // extern "C"
