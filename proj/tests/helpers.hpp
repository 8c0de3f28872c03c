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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "ifm/circuit.hpp"
#include "ifm/state_core.hpp"

namespace ifm::testing {

inline BasisLabel at(const std::string& mode) { return BasisLabel::photon_at(mode); }

/// Two-splitter interferometer with an optional object on the int arm. The
/// closing splitter uses the complementary transmittance with the int arm on
/// its plus port, so out2 is dark when nothing blocks the int arm.
inline Circuit two_splitter(double T,
                            std::vector<std::pair<std::string, Amplitude>> object_initial = {},
                            bool detectors = true) {
  Circuit circuit;
  circuit.modes = {"src", "vac", "free", "int", "out1", "out2"};
  circuit.stages.push_back({BeamSplitter{"src", "vac", "free", "int", T}});
  if (!object_initial.empty()) {
    circuit.objects.push_back({"bomb", std::move(object_initial)});
    circuit.stages.push_back({Absorber{"int", "bomb", "in", 0.0, true, 0.0}});
  }
  circuit.stages.push_back({BeamSplitter{"int", "free", "out1", "out2", 1.0 - T}});
  if (detectors) {
    circuit.stages.push_back({Detector{"out1", "D1", ""}, Detector{"out2", "D2", ""}});
  }
  return circuit;
}

inline bool amp_near(const Amplitude& a, const Amplitude& b, double eps = 1e-9) {
  return std::abs(a - b) < eps;
}

/// Term-by-term comparison of two states.
inline bool state_near(const PureState& a, const PureState& b, double eps = 1e-9) {
  for (const auto& [label, amp] : a.terms()) {
    if (!amp_near(amp, b.amplitude(label), eps)) return false;
  }
  for (const auto& [label, amp] : b.terms()) {
    if (!amp_near(amp, a.amplitude(label), eps)) return false;
  }
  return true;
}

/// Global phases are unobservable; distributions and conditionals only ever
/// fix a state up to one. Test-layer concern, deliberately not in the library.
inline bool equal_up_to_global_phase(const PureState& a, const PureState& b, double eps = 1e-9) {
  if (a.terms().empty() || b.terms().empty()) return a.terms().empty() == b.terms().empty();
  const auto& [label, amp] = *a.terms().begin();
  Amplitude other = b.amplitude(label);
  if (std::abs(amp) < eps || std::abs(other) < eps) return false;
  Amplitude phase = other / amp;
  if (std::abs(std::abs(phase) - 1.0) > eps) return false;
  for (const auto& [l, v] : a.terms()) {
    if (!amp_near(v * phase, b.amplitude(l), eps)) return false;
  }
  for (const auto& [l, v] : b.terms()) {
    if (!amp_near(v, a.amplitude(l) * phase, eps)) return false;
  }
  return true;
}

inline bool dist_near(const OutcomeDistribution& got,
                      const std::map<TerminalEvent, double>& expected, double eps = 1e-9) {
  for (const auto& [event, p] : expected) {
    if (std::abs(probability(got, event) - p) > eps) return false;
  }
  double total = 0.0;
  for (const auto& [event, p] : got) total += p;
  double expected_total = 0.0;
  for (const auto& [event, p] : expected) expected_total += p;
  return std::abs(total - expected_total) < eps;
}

}  // namespace ifm::testing
