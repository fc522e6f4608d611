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

#ifndef STOCHMATCH_INSTANCE_IO_HPP_
#define STOCHMATCH_INSTANCE_IO_HPP_

#include <optional>
#include <string>

#include "json.hpp"
#include "stochmatch/model.hpp"

namespace stochmatch {

using Json = nlohmann::json;

// A parsed instance: either a stochastic graph or a known-i.d. input.
struct Instance {
  std::string id;
  std::optional<StochasticGraph> graph;
  std::optional<KnownIdInput> known_id;

  bool is_known_id() const { return known_id.has_value(); }
};

// All parse failures, including semantic ones, raise ErrorCode::kParse.
StochasticGraph graph_from_json(const Json& j);
KnownIdInput known_id_from_json(const Json& j);
Instance instance_from_json(const Json& j, std::string id = "");
Instance parse_instance(const std::string& text, std::string id = "");
Instance load_instance(const std::string& path);

Json graph_to_json(const StochasticGraph& g);
Json known_id_to_json(const KnownIdInput& input);
Json instance_to_json(const Instance& inst);

// Accepts a JSON number or a decimal string.
double json_number(const Json& j, const char* what);

}  // namespace stochmatch

#endif  // STOCHMATCH_INSTANCE_IO_HPP_
