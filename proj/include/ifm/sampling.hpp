// Copyright 2026 The ifmsim Authors
//
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

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ifm/circuit.hpp"
#include "ifm/errors.hpp"

namespace ifm {

/// Mixes a master seed with a stream index into an independent seed
/// (splitmix64 finalizer), so sweeps get decorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using CountTable = std::map<TerminalEvent, std::uint64_t>;

/// Draws `shots` outcomes by inverse-CDF over the distribution's canonical
/// event order. The uniform doubles come straight from mt19937_64 output
/// (53-bit mantissa), so counts are identical across platforms for a given
/// seed; distribution classes from the standard library are avoided because
/// their algorithms are implementation-defined.
inline CountTable sample(const OutcomeDistribution& dist, std::uint64_t shots,
                         std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::bad_param, "shots must be at least 1");
  if (dist.empty()) throw Error(ErrorCode::bad_param, "cannot sample an empty distribution");

  std::vector<const TerminalEvent*> events;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& [event, p] : dist) {
    acc += p;
    events.push_back(&event);
    cumulative.push_back(acc);
  }

  std::mt19937_64 rng(seed);
  CountTable counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    u *= acc;  // tolerate rounding in the total
    std::size_t lo = 0;
    while (lo + 1 < cumulative.size() && u >= cumulative[lo]) ++lo;
    ++counts[*events[lo]];
  }
  return counts;
}

/// Binomial standard error of an empirical frequency.
inline double standard_error(double p, std::uint64_t shots) {
  if (shots < 1) throw Error(ErrorCode::bad_param, "shots must be at least 1");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
}

}  // namespace ifm
