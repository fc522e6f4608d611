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

#ifndef STOCHMATCH_STATS_HPP_
#define STOCHMATCH_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "stochmatch/random.hpp"

namespace stochmatch {

inline constexpr double kZ99 = 2.5758293035489004;

class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  // Chan et al. pairwise update.
  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double n1 = static_cast<double>(count_);
    const double n2 = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * n2 / (n1 + n2);
    m2_ += other.m2_ + delta * delta * n1 * n2 / (n1 + n2);
    count_ += other.count_;
  }

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double stddev() const { return std::sqrt(variance()); }
  double sem() const {
    return count_ > 0 ? stddev() / std::sqrt(static_cast<double>(count_)) : 0.0;
  }
  double ci99() const { return kZ99 * sem(); }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

inline Interval wilson_interval(std::int64_t successes, std::int64_t n,
                                double z = kZ99) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline constexpr std::int64_t kTrialChunk = 1024;

inline int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

// Runs fn(acc, trial_index, rng) for every trial. Trials are grouped in
// fixed chunks, each with its own stream of `seed`; chunk accumulators are
// merged in chunk order, so the result does not depend on the thread count.
template <class Acc, class MakeAcc, class Fn>
Acc run_trials(std::int64_t trials, std::uint64_t seed, MakeAcc make_acc,
               Fn fn) {
  const std::int64_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<Acc> partial;
  partial.reserve(static_cast<std::size_t>(chunks));
  for (std::int64_t c = 0; c < chunks; ++c) partial.push_back(make_acc());

  auto run_chunk = [&](std::int64_t c) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(c));
    const std::int64_t end = std::min(trials, (c + 1) * kTrialChunk);
    for (std::int64_t t = c * kTrialChunk; t < end; ++t) {
      fn(partial[static_cast<std::size_t>(c)], t, rng);
    }
  };

  const int workers =
      static_cast<int>(std::min<std::int64_t>(worker_count(), chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::mutex mu;
    std::int64_t next = 0;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::int64_t c;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= chunks || error) return;
            c = next++;
          }
          try {
            run_chunk(c);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  Acc total = make_acc();
  for (auto& p : partial) total.merge(p);
  return total;
}

template <class T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    std::swap(v[static_cast<std::size_t>(i)],
              v[static_cast<std::size_t>(uniform_index(rng, i + 1))]);
  }
}

}  // namespace stochmatch

#endif  // STOCHMATCH_STATS_HPP_
