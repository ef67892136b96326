// Copyright 2026 The zeno-nh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Seedable 64-bit generator used by every stochastic engine.
//
// xoshiro256** (Blackman and Vigna, 2018) seeded through SplitMix64. Stream i
// of an ensemble with base seed s is seeded with splitmix64(s ^ i), so a
// trajectory's record depends only on (s, i).

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace zeno {

inline constexpr std::string_view kRngId = "xoshiro256**/splitmix64-v1";

/// One SplitMix64 output for state `x` (the state is advanced internally).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trajectory `index` in an ensemble: splitmix64(base ^ index).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return UINT64_MAX; }

  result_type operator()();
  /// Uniform double in the open interval (0, 1).
  double uniform();
  /// Exponential variate with the given rate (> 0).
  double exponential(double rate);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace zeno
