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
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "ifm/circuit.hpp"
#include "ifm/elements.hpp"
#include "ifm/errors.hpp"
#include "ifm/state_core.hpp"

namespace ifm {

inline constexpr double kTraceThreshold = 1e-9;
inline constexpr double kOverlapThreshold = 1e-12;

/// Pre- and post-selected description of one run. forward[k] and backward[k]
/// are the states at cut k (before stage k); forward states carry the full
/// branch structure including terminal branches, backward states are the
/// adjoint evolution of the normalized post-selected terminal projection and
/// are sub-normalized at earlier cuts when the post-selection attenuates.
struct TwoStateVector {
  std::vector<PureState> forward;
  std::vector<PureState> backward;
  Amplitude overlap;  // <backward|forward>, the same at every cut

  std::size_t cuts() const { return forward.size(); }

  /// Post-selection probability. Exact because the backward terminal state is
  /// the normalized projection onto the post-selected outcome.
  double abl_probability() const { return std::norm(overlap); }

  /// True when the pre- and post-selected photon leaves no record at
  /// (cut, mode): the product of forward and backward weight there vanishes.
  bool trace_free(std::size_t cut, const std::string& mode,
                  double threshold = kTraceThreshold) const {
    LabelPredicate at = [&](const BasisLabel& label) { return label.photon.is_at(mode); };
    double product = std::sqrt(forward.at(cut).weight(at)) * std::sqrt(backward.at(cut).weight(at));
    return product < threshold;
  }

  /// <b|P|f> / <b|f> for the projector onto labels matching `projector`.
  Amplitude weak_value(std::size_t cut, const LabelPredicate& projector) const {
    Amplitude denom = inner_product(backward.at(cut), forward.at(cut));
    if (std::abs(denom) < kOverlapThreshold) {
      throw Error(ErrorCode::zero_overlap,
                  "pre- and post-selected states are orthogonal at the queried cut");
    }
    Amplitude num = inner_product(backward.at(cut), forward.at(cut).restricted(projector));
    return num / denom;
  }
};

/// Projector predicate for "photon in one of these modes".
inline LabelPredicate photon_in_modes(std::set<std::string> modes) {
  return [modes = std::move(modes)](const BasisLabel& label) {
    return label.photon.kind == PhotonState::Kind::at_mode && modes.contains(label.photon.mode);
  };
}

/// Projector predicate for "object in one of these state labels".
inline LabelPredicate object_in_states(std::string object_id, std::set<std::string> states) {
  return [object_id = std::move(object_id), states = std::move(states)](const BasisLabel& label) {
    auto it = label.objects.find(object_id);
    return it != label.objects.end() && states.contains(it->second);
  };
}

/// Builds the two-state vector for a run post-selected on the terminal
/// labels matching `postselect`. Throws IMPOSSIBLE_POSTSELECTION when that
/// outcome has probability zero.
inline TwoStateVector make_two_state_vector(const Circuit& circuit, const PureState& input,
                                            const LabelPredicate& postselect) {
  TwoStateVector tsv;
  tsv.forward = evolve_cuts(circuit, input);

  auto [prob, projected] = project(tsv.forward.back(), postselect);
  if (!projected) {
    throw Error(ErrorCode::impossible_postselection,
                "post-selected outcome has probability zero");
  }

  tsv.backward.resize(tsv.forward.size());
  tsv.backward.back() = *projected;
  for (std::size_t k = circuit.stages.size(); k-- > 0;) {
    PureState state = tsv.backward[k + 1];
    const auto& stage = circuit.stages[k];
    for (std::size_t e = stage.size(); e-- > 0;) {
      state = apply_element(state, stage[e], Direction::adjoint, std::to_string(k));
    }
    tsv.backward[k] = std::move(state);
  }

  tsv.overlap = inner_product(tsv.backward.back(), tsv.forward.back());
  return tsv;
}

inline TwoStateVector make_two_state_vector(const Circuit& circuit, const PureState& input,
                                            const TerminalEvent& event) {
  return make_two_state_vector(
      circuit, input, [event](const BasisLabel& label) { return event_of(label) == event; });
}

/// Forward-evolving states at every cut. By default the terminal branches
/// (absorbed photon) are removed, leaving the sub-normalized still-evolving
/// part; pass drop_terminal = false for the full states.
inline std::vector<PureState> forward_states(const Circuit& circuit, const PureState& input,
                                             bool drop_terminal = true) {
  std::vector<PureState> cuts = evolve_cuts(circuit, input);
  if (!drop_terminal) return cuts;
  for (auto& state : cuts) {
    state = state.restricted(
        [](const BasisLabel& label) { return label.photon.kind != PhotonState::Kind::absorbed; });
  }
  return cuts;
}

/// Backward-evolving states at every cut for the given post-selection.
inline std::vector<PureState> backward_states(const Circuit& circuit, const PureState& input,
                                              const TerminalEvent& event) {
  return make_two_state_vector(circuit, input, event).backward;
}

inline bool trace_free(const Circuit& circuit, const PureState& input, const TerminalEvent& event,
                       std::size_t cut, const std::string& mode,
                       double threshold = kTraceThreshold) {
  return make_two_state_vector(circuit, input, event).trace_free(cut, mode, threshold);
}

inline Amplitude weak_value(const Circuit& circuit, const PureState& input,
                            const TerminalEvent& event, std::size_t cut,
                            const LabelPredicate& projector) {
  return make_two_state_vector(circuit, input, event).weak_value(cut, projector);
}

}  // namespace ifm
