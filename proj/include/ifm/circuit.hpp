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

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ifm/elements.hpp"
#include "ifm/errors.hpp"
#include "ifm/state_core.hpp"

namespace ifm {

/// Classical record a single run ends in: which objects blew up, which
/// detectors fired, and where the photon survived (or that it was absorbed).
/// Absorption sites are deliberately not part of the event.
struct TerminalEvent {
  std::set<std::string> exploded;
  std::set<std::string> clicked;
  PhotonState photon = PhotonState::absorbed();

  auto operator<=>(const TerminalEvent&) const = default;

  static TerminalEvent photon_at(std::string mode) {
    return TerminalEvent{{}, {}, PhotonState::at(std::move(mode))};
  }
  static TerminalEvent absorbed() { return TerminalEvent{}; }

  TerminalEvent with_click(const std::string& detector_id) const {
    TerminalEvent out = *this;
    out.clicked.insert(detector_id);
    return out;
  }
  TerminalEvent with_explosion(const std::string& object_id) const {
    TerminalEvent out = *this;
    out.exploded.insert(object_id);
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    std::string sep;
    if (!exploded.empty()) {
      os << "explosion(";
      std::string inner;
      for (const auto& id : exploded) {
        os << inner << id;
        inner = ",";
      }
      os << ")";
      sep = "+";
    }
    for (const auto& id : clicked) {
      os << sep << id;
      sep = "+";
    }
    if (photon.kind == PhotonState::Kind::at_mode) {
      os << sep << "photon@" << photon.mode;
      sep = "+";
    }
    if (sep.empty()) os << "absorbed";
    return os.str();
  }
};

/// Collapses a basis label to the classically distinguishable part.
inline TerminalEvent event_of(const BasisLabel& label) {
  TerminalEvent ev;
  ev.clicked = label.clicked;
  for (const auto& [id, state] : label.objects) {
    if (state == kExplodedState) ev.exploded.insert(id);
  }
  ev.photon = label.photon.kind == PhotonState::Kind::at_mode ? label.photon
                                                              : PhotonState::absorbed();
  return ev;
}

using OutcomeDistribution = std::map<TerminalEvent, double>;

inline double probability(const OutcomeDistribution& dist, const TerminalEvent& event) {
  auto it = dist.find(event);
  return it == dist.end() ? 0.0 : it->second;
}

struct ObjectSpec {
  std::string id;
  std::vector<std::pair<std::string, Amplitude>> initial;

  bool operator==(const ObjectSpec&) const = default;
};

/// A staged interferometer. Elements within one stage act on disjoint
/// resources and commute; stages apply in order. Cut k is the wavefront
/// before stage k, so a circuit with N stages has N+1 cuts.
struct Circuit {
  std::set<std::string> modes;
  std::vector<ObjectSpec> objects;
  std::vector<std::vector<Element>> stages;
  std::optional<TerminalEvent> postselection;

  bool operator==(const Circuit&) const = default;
};

struct ValidationIssue {
  ErrorCode code;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

namespace detail {

inline bool reserved_object_state(const std::string& s) {
  return s == kExplodedState || (!s.empty() && s.front() == '@');
}

struct ResourceCollector {
  const Circuit& circuit;
  std::vector<ValidationIssue>& issues;
  std::set<std::string> stage_keys;

  void claim(const std::string& key, const std::string& what) {
    if (!stage_keys.insert(key).second) {
      issues.push_back({ErrorCode::mode_clash, what + " '" + key.substr(2) +
                                                   "' used by two elements in one stage"});
    }
  }

  void photon_mode(const std::string& mode) {
    if (!circuit.modes.contains(mode)) {
      issues.push_back({ErrorCode::unknown_mode, "mode '" + mode + "' is not declared"});
    }
    claim("m:" + mode, "mode");
  }

  void object_exists(const std::string& id) {
    bool found = false;
    for (const auto& spec : circuit.objects) {
      if (spec.id == id) found = true;
    }
    if (!found) {
      issues.push_back({ErrorCode::unknown_object, "object '" + id + "' is not declared"});
    }
  }

  void object_state(const std::string& id, const std::string& s) {
    if (reserved_object_state(s)) {
      issues.push_back({ErrorCode::validation_error, "object state '" + s + "' is reserved"});
    }
    claim("s:" + id + ":" + s, "object state");
  }

  // Elements address either photon modes or one object's state labels. Claims
  // are per state, so elements touching disjoint states of a shared object may
  // still share a stage. Labels are deduplicated first: an in-place element
  // lists the same label as input and output, which is not a clash.
  void ports(const std::string& target, std::initializer_list<std::string> labels) {
    std::set<std::string> unique(labels);
    if (target.empty()) {
      for (const auto& m : unique) photon_mode(m);
    } else {
      object_exists(target);
      for (const auto& s : unique) object_state(target, s);
    }
  }
};

}  // namespace detail

/// Structural checks; an empty result means the circuit is well-formed.
inline std::vector<ValidationIssue> validate(const Circuit& circuit) {
  std::vector<ValidationIssue> issues;
  if (circuit.stages.empty()) {
    issues.push_back({ErrorCode::empty_circuit, "circuit has no stages"});
  }
  if (circuit.modes.empty()) {
    issues.push_back({ErrorCode::empty_circuit, "circuit declares no modes"});
  }

  std::set<std::string> object_ids;
  for (const auto& spec : circuit.objects) {
    if (!object_ids.insert(spec.id).second) {
      issues.push_back({ErrorCode::validation_error, "duplicate object id '" + spec.id + "'"});
    }
    if (spec.initial.empty()) {
      issues.push_back(
          {ErrorCode::validation_error, "object '" + spec.id + "' has no initial terms"});
    }
    for (const auto& [state, amp] : spec.initial) {
      if (detail::reserved_object_state(state)) {
        issues.push_back({ErrorCode::validation_error,
                          "object '" + spec.id + "' initial state '" + state + "' is reserved"});
      }
    }
  }

  std::map<std::string, int> object_detector_stage;
  for (std::size_t k = 0; k < circuit.stages.size(); ++k) {
    detail::ResourceCollector rc{circuit, issues, {}};
    for (const auto& element : circuit.stages[k]) {
      if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
        rc.ports(bs->target, {bs->in_a, bs->in_b, bs->out_a, bs->out_b});
        if (bs->in_a == bs->in_b || bs->out_a == bs->out_b) {
          issues.push_back(
              {ErrorCode::validation_error, "beam splitter input and output ports must be distinct"});
        }
        if (!(bs->transmittance >= 0.0 && bs->transmittance <= 1.0)) {
          issues.push_back({ErrorCode::bad_param, "beam splitter transmittance out of [0,1]"});
        }
      } else if (const auto* mi = std::get_if<Mirror>(&element)) {
        rc.ports(mi->target, {mi->in, mi->out});
      } else if (const auto* ph = std::get_if<PhaseShifter>(&element)) {
        rc.ports(ph->target, {ph->mode});
      } else if (const auto* cp = std::get_if<Coupler>(&element)) {
        rc.ports(cp->target, {cp->left, cp->right});
        if (cp->left == cp->right) {
          issues.push_back({ErrorCode::validation_error, "coupler ports must be distinct"});
        }
        if (!(cp->theta >= 0.0 && cp->theta <= 1.5707963267948967)) {
          issues.push_back({ErrorCode::bad_param, "coupler angle out of [0, pi/2]"});
        }
      } else if (const auto* ab = std::get_if<Absorber>(&element)) {
        rc.photon_mode(ab->mode);
        rc.object_exists(ab->object_id);
        rc.object_state(ab->object_id, ab->blocking_state);
        if (!(ab->transmittance >= 0.0 && ab->transmittance <= 1.0)) {
          issues.push_back({ErrorCode::bad_param, "absorber transmittance out of [0,1]"});
        }
      } else if (const auto* de = std::get_if<Detector>(&element)) {
        if (de->detector_id.empty()) {
          issues.push_back({ErrorCode::validation_error, "detector id must be non-empty"});
        }
        rc.claim("d:" + de->detector_id, "detector");
        if (de->target.empty()) {
          rc.photon_mode(de->mode);
        } else {
          rc.object_exists(de->target);
          rc.object_state(de->target, de->mode);
          auto [it, fresh] = object_detector_stage.emplace(de->detector_id, int(k));
          if (!fresh && it->second != int(k)) {
            issues.push_back({ErrorCode::mode_clash, "object detector '" + de->detector_id +
                                                         "' reused across stages"});
          }
        }
      }
    }
  }
  return issues;
}

inline void throw_if_invalid(const Circuit& circuit) {
  auto issues = validate(circuit);
  if (issues.empty()) return;
  std::string message;
  for (const auto& issue : issues) {
    if (!message.empty()) message += "; ";
    message += issue.message;
  }
  throw Error(issues.front().code, message);
}

/// Tensors a photon superposition with every object's initial state.
inline PureState initial_state(const Circuit& circuit,
                               const std::vector<std::pair<std::string, Amplitude>>& photon_terms) {
  std::vector<std::pair<BasisLabel, Amplitude>> terms;
  for (const auto& [mode, amp] : photon_terms) {
    if (!circuit.modes.contains(mode)) {
      throw Error(ErrorCode::unknown_mode, "input mode '" + mode + "' is not declared");
    }
    terms.emplace_back(BasisLabel::photon_at(mode), amp);
  }
  for (const auto& spec : circuit.objects) {
    std::vector<std::pair<BasisLabel, Amplitude>> expanded;
    for (const auto& [label, amp] : terms) {
      for (const auto& [state, obj_amp] : spec.initial) {
        expanded.emplace_back(label.with_object(spec.id, state), amp * obj_amp);
      }
    }
    terms = std::move(expanded);
  }
  return PureState::superpose(terms);
}

inline PureState initial_state(const Circuit& circuit, const std::string& mode) {
  return initial_state(circuit, {{mode, Amplitude{1.0, 0.0}}});
}

namespace detail {

inline void check_input_modes(const Circuit& circuit, const PureState& input) {
  for (const auto& [label, amp] : input.terms()) {
    if (label.photon.kind == PhotonState::Kind::at_mode &&
        !circuit.modes.contains(label.photon.mode)) {
      throw Error(ErrorCode::unknown_mode,
                  "input photon mode '" + label.photon.mode + "' is not declared");
    }
  }
}

}  // namespace detail

/// Full states at every cut, terminal branches included. Element application
/// within a stage is sequential, which equals parallel application because
/// validated stages touch disjoint resources.
inline std::vector<PureState> evolve_cuts(const Circuit& circuit, const PureState& input) {
  throw_if_invalid(circuit);
  detail::check_input_modes(circuit, input);
  std::vector<PureState> cuts;
  cuts.reserve(circuit.stages.size() + 1);
  cuts.push_back(input);
  for (std::size_t k = 0; k < circuit.stages.size(); ++k) {
    PureState state = cuts.back();
    for (const auto& element : circuit.stages[k]) {
      state = apply_element(state, element, Direction::forward, std::to_string(k));
    }
    cuts.push_back(std::move(state));
  }
  return cuts;
}

inline PureState evolve(const Circuit& circuit, const PureState& input) {
  return evolve_cuts(circuit, input).back();
}

/// Exact outcome probabilities, grouped by terminal event.
inline OutcomeDistribution outcome_distribution(const Circuit& circuit, const PureState& input) {
  PureState terminal = evolve(circuit, input);
  OutcomeDistribution dist;
  for (const auto& [label, amp] : terminal.terms()) {
    dist[event_of(label)] += std::norm(amp);
  }
  return dist;
}

/// Probability of `event` plus the renormalized post-measurement state of
/// everything that survives it. Click flags and exploded objects are part of
/// the classical record and are stripped from the labels; surviving photon
/// and object degrees of freedom are kept verbatim.
inline std::pair<double, std::optional<PureState>> conditional_state(const Circuit& circuit,
                                                                     const PureState& input,
                                                                     const TerminalEvent& event) {
  PureState terminal = evolve(circuit, input);
  auto [prob, projected] = project(
      terminal, [&](const BasisLabel& label) { return event_of(label) == event; });
  if (!projected) return {prob, std::nullopt};
  std::vector<std::pair<BasisLabel, Amplitude>> stripped;
  for (const auto& [label, amp] : projected->terms()) {
    BasisLabel out = label;
    out.clicked.clear();
    for (auto it = out.objects.begin(); it != out.objects.end();) {
      it = it->second == kExplodedState ? out.objects.erase(it) : std::next(it);
    }
    stripped.emplace_back(std::move(out), amp);
  }
  return {prob, PureState::superpose(stripped)};
}

/// Removes the branches a silent detector would have fired on and
/// renormalizes what is left.
inline PureState negative_result_update(const PureState& state,
                                        const LabelPredicate& would_have_fired) {
  auto [prob, kept] =
      project(state, [&](const BasisLabel& label) { return !would_have_fired(label); });
  if (!kept) {
    throw Error(ErrorCode::certain_detection,
                "detection is certain; no surviving branch to update onto");
  }
  return *kept;
}

/// Probability weight of each state label of one object.
inline std::map<std::string, double> object_marginal(const PureState& state,
                                                     const std::string& object_id) {
  std::map<std::string, double> marginal;
  for (const auto& [label, amp] : state.terms()) {
    auto it = label.objects.find(object_id);
    if (it != label.objects.end()) marginal[it->second] += std::norm(amp);
  }
  return marginal;
}

}  // namespace ifm
