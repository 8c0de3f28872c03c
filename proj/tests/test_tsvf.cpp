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

#include "helpers.hpp"

#include <cmath>

#include "ifm/tsvf.hpp"

using namespace ifm;
using ifm::testing::amp_near;
using ifm::testing::at;
using ifm::testing::two_splitter;

namespace {

Circuit open_interferometer() {
  Circuit circuit;
  circuit.modes = {"src", "vac", "up", "low", "up2", "low2"};
  circuit.stages.push_back({BeamSplitter{"src", "vac", "up", "low", 0.5}});
  circuit.stages.push_back({Mirror{"up", "up2", ""}, Mirror{"low", "low2", ""}});
  circuit.stages.push_back({Detector{"up2", "D2", ""}, Detector{"low2", "D1", ""}});
  return circuit;
}

}  // namespace

TEST_CASE("open interferometer: the backward state picks one path", "[tsvf]") {
  Circuit circuit = open_interferometer();
  PureState input = initial_state(circuit, "src");
  TwoStateVector tsv =
      make_two_state_vector(circuit, input, TerminalEvent::absorbed().with_click("D2"));

  REQUIRE(tsv.cuts() == 4);
  // Forward spreads over both arms; backward from D2 occupies only the upper.
  CHECK_THAT(tsv.forward[1].weight(photon_in_modes({"up"})),
             Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(tsv.backward[1].weight(photon_in_modes({"up"})),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(tsv.backward[1].weight(photon_in_modes({"low"})),
             Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK(tsv.trace_free(1, "low"));
  CHECK_FALSE(tsv.trace_free(1, "up"));
  CHECK_THAT(tsv.abl_probability(), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("blocked interferometer leaves no trace at the object", "[tsvf]") {
  Circuit circuit = two_splitter(0.5, {{"in", 1.0}});
  PureState input = initial_state(circuit, "src");
  TwoStateVector tsv =
      make_two_state_vector(circuit, input, TerminalEvent::absorbed().with_click("D2"));

  // Cut 1 sits between the opening splitter and the object.
  CHECK(tsv.forward[1].weight(photon_in_modes({"int"})) > 0.1);
  CHECK_THAT(tsv.backward[1].weight(photon_in_modes({"int"})),
             Catch::Matchers::WithinAbs(0.0, 1e-18));
  CHECK(tsv.trace_free(1, "int"));
  CHECK_FALSE(tsv.trace_free(1, "free"));
  // Between the object and the closing splitter, both backward arms revive.
  CHECK(tsv.backward[2].weight(photon_in_modes({"int"})) > 0.1);
  CHECK_FALSE(tsv.trace_free(2, "free"));
  CHECK_THAT(tsv.abl_probability(), Catch::Matchers::WithinAbs(0.25, 1e-12));
}

TEST_CASE("explosion post-selection pins the photon to the blocked arm", "[tsvf]") {
  Circuit circuit = two_splitter(0.5, {{"in", 1.0}});
  PureState input = initial_state(circuit, "src");
  TwoStateVector tsv =
      make_two_state_vector(circuit, input, TerminalEvent::absorbed().with_explosion("bomb"));

  CHECK_THAT(tsv.backward[1].weight(photon_in_modes({"int"})),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(tsv.trace_free(1, "free"));
  CHECK_THAT(tsv.abl_probability(), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("the overlap is the same at every cut", "[tsvf]") {
  Circuit circuit = two_splitter(0.7, {{"in", 1.0}});
  PureState input = initial_state(circuit, "src");
  for (const auto& event :
       {TerminalEvent::absorbed().with_click("D1"), TerminalEvent::absorbed().with_click("D2"),
        TerminalEvent::absorbed().with_explosion("bomb")}) {
    TwoStateVector tsv = make_two_state_vector(circuit, input, event);
    for (std::size_t cut = 0; cut < tsv.cuts(); ++cut) {
      Amplitude here = inner_product(tsv.backward[cut], tsv.forward[cut]);
      CHECK(amp_near(here, tsv.overlap, 1e-12));
    }
  }
}

TEST_CASE("the squared overlap reproduces every outcome probability", "[tsvf]") {
  for (double T : {0.3, 0.5, 0.8}) {
    Circuit circuit = two_splitter(T, {{"in", 1.0}});
    PureState input = initial_state(circuit, "src");
    OutcomeDistribution dist = outcome_distribution(circuit, input);
    for (const auto& [event, p] : dist) {
      TwoStateVector tsv = make_two_state_vector(circuit, input, event);
      CHECK_THAT(tsv.abl_probability(), Catch::Matchers::WithinAbs(p, 1e-12));
    }
  }
}

TEST_CASE("forward states drop terminal branches on request", "[tsvf]") {
  Circuit circuit = two_splitter(0.5, {{"in", 1.0}});
  PureState input = initial_state(circuit, "src");

  std::vector<PureState> live = forward_states(circuit, input);
  std::vector<PureState> full = forward_states(circuit, input, false);
  REQUIRE(live.size() == full.size());
  // After the object, half the weight sits in the exploded branch.
  CHECK_THAT(live[2].norm_squared(), Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(full[2].norm_squared(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  // After the detectors, nothing is still evolving.
  CHECK(live.back().empty());
}

TEST_CASE("impossible post-selection is rejected", "[tsvf]") {
  Circuit circuit = two_splitter(0.5);  // empty int arm: out2 is dark
  PureState input = initial_state(circuit, "src");
  CHECK_THROWS_MATCHES(
      backward_states(circuit, input, TerminalEvent::absorbed().with_click("D2")), Error,
      Catch::Matchers::Predicate<Error>([](const Error& e) {
        return e.code() == ErrorCode::impossible_postselection;
      }));
}

TEST_CASE("weak values of a balanced interferometer sum to one", "[tsvf]") {
  Circuit circuit = two_splitter(0.5);
  PureState input = initial_state(circuit, "src");
  TwoStateVector tsv =
      make_two_state_vector(circuit, input, TerminalEvent::absorbed().with_click("D1"));
  Amplitude on_free = tsv.weak_value(1, photon_in_modes({"free"}));
  Amplitude on_int = tsv.weak_value(1, photon_in_modes({"int"}));
  CHECK(amp_near(on_free, 0.5, 1e-12));
  CHECK(amp_near(on_int, 0.5, 1e-12));
  CHECK(amp_near(on_free + on_int, 1.0, 1e-12));
}

TEST_CASE("orthogonal pre- and post-selection has no weak values", "[tsvf]") {
  TwoStateVector degenerate;
  degenerate.forward = {PureState::superpose({{at("a"), 1.0}})};
  degenerate.backward = {PureState::superpose({{at("b"), 1.0}})};
  degenerate.overlap = Amplitude{0.0, 0.0};
  CHECK_THROWS_MATCHES(degenerate.weak_value(0, photon_in_modes({"a"})), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::zero_overlap;
                       }));
}

TEST_CASE("free functions agree with the assembled structure", "[tsvf]") {
  Circuit circuit = two_splitter(0.5, {{"in", 1.0}});
  PureState input = initial_state(circuit, "src");
  TerminalEvent d2 = TerminalEvent::absorbed().with_click("D2");
  CHECK(trace_free(circuit, input, d2, 1, "int"));
  CHECK_FALSE(trace_free(circuit, input, d2, 1, "free"));
  Amplitude wv = weak_value(circuit, input, d2, 1, photon_in_modes({"free"}));
  TwoStateVector tsv = make_two_state_vector(circuit, input, d2);
  CHECK(amp_near(wv, tsv.weak_value(1, photon_in_modes({"free"})), 1e-12));
}
