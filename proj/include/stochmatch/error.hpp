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

#ifndef STOCHMATCH_ERROR_HPP_
#define STOCHMATCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace stochmatch {

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kInapplicable = 3,
  kIterationCap = 4,
  kIo = 5,
  kInternal = 6,
  kTooLarge = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Column generation ran into its column cap. Carries the last master value
// (a lower bound) and the Lagrangian upper bound from the last pricing round.
class IterationCapError : public Error {
 public:
  IterationCapError(const std::string& what, double lower, double upper)
      : Error(ErrorCode::kIterationCap, what), lower_(lower), upper_(upper) {}
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace stochmatch

#endif  // STOCHMATCH_ERROR_HPP_
