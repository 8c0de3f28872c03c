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
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifm/circuit.hpp"
#include "ifm/elements.hpp"
#include "ifm/errors.hpp"
#include "ifm/state_core.hpp"
#include "ifm/tsvf.hpp"

namespace ifm {

// --- Bomb test -------------------------------------------------------------
//
// Two-splitter interferometer with the probed object on the `int` arm. The
// first splitter sends transmittance T into the free arm; the second uses
// the complementary transmittance 1-T with the interaction arm on its plus
// port, which makes out2 a dark port whenever the object is absent.

struct EvObject {
  enum class Kind { absent, bomb, opaque, semi_transparent };
  Kind kind = Kind::bomb;
  double alpha = 0.0;  // transmittance of a semi-transparent object

  static EvObject absent() { return {Kind::absent, 0.0}; }
  static EvObject bomb() { return {Kind::bomb, 0.0}; }
  static EvObject opaque() { return {Kind::opaque, 0.0}; }
  static EvObject semi_transparent(double alpha) { return {Kind::semi_transparent, alpha}; }
};

namespace detail {

inline void check_ev_transmittance(double T) {
  if (!(T > 0.0 && T < 1.0)) {
    throw Error(ErrorCode::bad_param, "transmittance must be strictly between 0 and 1");
  }
}

inline Circuit ev_skeleton(double T, SplitterConvention convention) {
  Circuit circuit;
  circuit.modes = {"src", "vac", "free", "int", "out1", "out2"};
  circuit.stages.push_back(
      {BeamSplitter{"src", "vac", "free", "int", T, convention, ""}});
  return circuit;
}

inline void ev_close(Circuit& circuit, double T, SplitterConvention convention) {
  circuit.stages.push_back(
      {BeamSplitter{"int", "free", "out1", "out2", 1.0 - T, convention, ""}});
  circuit.stages.push_back({Detector{"out1", "D1", ""}, Detector{"out2", "D2", ""}});
}

}  // namespace detail

/// Bomb-test interferometer with a definite object (or none) on the int arm.
inline Circuit make_ev_circuit(double T, const EvObject& object,
                               SplitterConvention convention = SplitterConvention::real_minus_second) {
  detail::check_ev_transmittance(T);
  Circuit circuit = detail::ev_skeleton(T, convention);
  if (object.kind != EvObject::Kind::absent) {
    double alpha = object.kind == EvObject::Kind::semi_transparent ? object.alpha : 0.0;
    // Only the plain blocker absorbs quietly; a semi-transparent device still
    // triggers on the absorbed branch.
    bool explosive = object.kind != EvObject::Kind::opaque;
    circuit.objects.push_back({"bomb", {{"in", Amplitude{1.0, 0.0}}}});
    circuit.stages.push_back({Absorber{"int", "bomb", "in", alpha, explosive, 0.0}});
  }
  detail::ev_close(circuit, T, convention);
  return circuit;
}

/// Same interferometer with the object prepared in a superposition of
/// position labels; only the "in" label blocks the arm.
inline Circuit make_ev_circuit(double T,
                               const std::vector<std::pair<std::string, Amplitude>>& object_initial,
                               bool explosive = true,
                               SplitterConvention convention = SplitterConvention::real_minus_second) {
  detail::check_ev_transmittance(T);
  Circuit circuit = detail::ev_skeleton(T, convention);
  circuit.objects.push_back({"bomb", object_initial});
  circuit.stages.push_back({Absorber{"int", "bomb", "in", 0.0, explosive, 0.0}});
  detail::ev_close(circuit, T, convention);
  return circuit;
}

inline TerminalEvent ev_explosion_event() {
  return TerminalEvent::absorbed().with_explosion("bomb");
}

inline TerminalEvent ev_click_event(const std::string& detector_id) {
  return TerminalEvent::absorbed().with_click(detector_id);
}

inline OutcomeDistribution ev_single_shot(double T, const EvObject& object,
                                          SplitterConvention convention = SplitterConvention::real_minus_second) {
  Circuit circuit = make_ev_circuit(T, object, convention);
  return outcome_distribution(circuit, initial_state(circuit, "src"));
}

// --- Repeated bomb test ---------------------------------------------------
//
// Every D1 click is inconclusive and the photon is sent again; D2 finds the
// bomb without touching it, an explosion ends the protocol in failure.

enum class RepeatMode { analytic, simulated };

struct RepeatedRound {
  int round = 0;
  double found = 0.0;      // cumulative P(D2 by this round)
  double exploded = 0.0;   // cumulative P(explosion by this round)
  double undecided = 0.0;  // P(still only D1 clicks)
};

struct RepeatedOutcome {
  double found = 0.0;
  double exploded = 0.0;
  double undecided = 0.0;
  double efficiency = 0.0;  // found / (found + exploded)
  std::vector<RepeatedRound> rounds;
};

inline RepeatedOutcome ev_repeated(double T, std::optional<int> max_rounds = std::nullopt,
                                   RepeatMode mode = RepeatMode::analytic) {
  detail::check_ev_transmittance(T);
  if (max_rounds && *max_rounds < 1) {
    throw Error(ErrorCode::bad_param, "max_rounds must be at least 1");
  }
  if (mode == RepeatMode::simulated && !max_rounds) {
    throw Error(ErrorCode::bad_param, "round-by-round mode needs a round bound");
  }

  OutcomeDistribution shot = ev_single_shot(T, EvObject::bomb());
  double d1 = probability(shot, ev_click_event("D1"));
  double d2 = probability(shot, ev_click_event("D2"));
  double boom = probability(shot, ev_explosion_event());

  RepeatedOutcome out;
  if (mode == RepeatMode::simulated) {
    double undecided = 1.0;
    for (int k = 1; k <= *max_rounds; ++k) {
      out.found += undecided * d2;
      out.exploded += undecided * boom;
      undecided *= d1;
      out.rounds.push_back({k, out.found, out.exploded, undecided});
    }
    out.undecided = undecided;
  } else {
    if (max_rounds) {
      double dk = std::pow(d1, *max_rounds);
      double series = (1.0 - dk) / (1.0 - d1);
      out.found = d2 * series;
      out.exploded = boom * series;
      out.undecided = dk;
    } else {
      out.found = d2 / (1.0 - d1);
      out.exploded = boom / (1.0 - d1);
      out.undecided = 0.0;
    }
  }
  out.efficiency = out.found / (out.found + out.exploded);
  return out;
}

/// Fraction of bombs found without explosion, per first-splitter
/// transmittance, for the unbounded repeated protocol.
inline std::vector<std::pair<double, double>> efficiency_frontier(const std::vector<double>& ts) {
  std::vector<std::pair<double, double>> out;
  out.reserve(ts.size());
  for (double T : ts) {
    out.emplace_back(T, ev_repeated(T).efficiency);
  }
  return out;
}

// --- Object in a superposition of places ----------------------------------

/// Runs the bomb test against an object superposed over position labels and
/// post-selects the interaction-free detection D2. Returns its probability
/// and the conditional state, in which the object is localized on the arm.
inline std::pair<double, PureState> dicke_localization(
    const std::vector<std::pair<std::string, Amplitude>>& object_initial, double T = 0.5) {
  Circuit circuit = make_ev_circuit(T, object_initial);
  auto [prob, state] =
      conditional_state(circuit, initial_state(circuit, "src"), ev_click_event("D2"));
  if (!state) {
    throw Error(ErrorCode::impossible_postselection,
                "interaction-free detection has probability zero for this object state");
  }
  return {prob, *state};
}

// --- Quantum Zeno bomb test ------------------------------------------------
//
// Two coupled cavities; per cycle a rotation by pi/(2*cycles) leaks a little
// amplitude into the right cavity, where the object (if present) measures
// it. With no object the photon ends fully right; with a bomb the photon is
// pinned left with probability cos^(2N)(pi/2N).

inline Circuit make_zeno_circuit(int cycles, bool bomb) {
  if (cycles < 1) throw Error(ErrorCode::bad_param, "cycle count must be at least 1");
  Circuit circuit;
  circuit.modes = {"left", "right"};
  if (bomb) circuit.objects.push_back({"bomb", {{"in", Amplitude{1.0, 0.0}}}});
  double theta = std::numbers::pi / (2.0 * cycles);
  for (int k = 0; k < cycles; ++k) {
    circuit.stages.push_back({Coupler{"left", "right", theta, ""}});
    if (bomb) {
      circuit.stages.push_back({Absorber{"right", "bomb", "in", 0.0, true, 0.0}});
    }
  }
  return circuit;
}

inline OutcomeDistribution zeno_run(int cycles, bool bomb) {
  Circuit circuit = make_zeno_circuit(cycles, bomb);
  return outcome_distribution(circuit, initial_state(circuit, "left"));
}

// --- Hardy's nested interferometer -----------------------------------------
//
// Photon and object each traverse their own balanced interferometer; the
// overlapping arms annihilate both. Post-selecting both dark detectors
// yields the paradoxical weak occupations.

struct HardyConfig {
  double transmittance = 0.5;
  SplitterConvention convention = SplitterConvention::real_minus_second;
};

inline Circuit make_hardy_circuit(const HardyConfig& config = {}) {
  detail::check_ev_transmittance(config.transmittance);
  Circuit circuit;
  circuit.modes = {"p_src", "p_vac", "p_w", "p_f", "p_d1", "p_d2"};
  circuit.objects.push_back({"obj", {{"o_src", Amplitude{1.0, 0.0}}}});
  double T = config.transmittance;
  auto conv = config.convention;
  circuit.stages.push_back({
      BeamSplitter{"p_src", "p_vac", "p_f", "p_w", T, conv, ""},
      BeamSplitter{"o_src", "o_vac", "o_f", "o_w", T, conv, "obj"},
  });
  circuit.stages.push_back({Absorber{"p_w", "obj", "o_w", 0.0, true, 0.0}});
  circuit.stages.push_back({
      BeamSplitter{"p_f", "p_w", "p_d1", "p_d2", 1.0 - T, conv, ""},
      BeamSplitter{"o_f", "o_w", "o_d1", "o_d2", 1.0 - T, conv, "obj"},
  });
  circuit.stages.push_back({
      Detector{"p_d1", "pD1", ""},
      Detector{"p_d2", "pD2", ""},
      Detector{"o_d1", "oD1", "obj"},
      Detector{"o_d2", "oD2", "obj"},
  });
  return circuit;
}

inline TerminalEvent hardy_click_event(const std::string& photon_detector,
                                       const std::string& object_detector) {
  return TerminalEvent::absorbed().with_click(photon_detector).with_click(object_detector);
}

inline TerminalEvent hardy_annihilation_event() {
  return TerminalEvent::absorbed().with_explosion("obj");
}

inline OutcomeDistribution hardy_run(const HardyConfig& config = {}) {
  Circuit circuit = make_hardy_circuit(config);
  return outcome_distribution(circuit, initial_state(circuit, "p_src"));
}

/// Weak occupations of the overlapping arms between the annihilation and the
/// closing splitters, post-selected on both dark detectors.
struct HardyWeakValues {
  Amplitude photon_at_w;
  Amplitude object_at_w;
  Amplitude both_at_w;
  Amplitude both_at_f;
};

inline HardyWeakValues hardy_weak_values(const HardyConfig& config = {}) {
  Circuit circuit = make_hardy_circuit(config);
  TwoStateVector tsv = make_two_state_vector(circuit, initial_state(circuit, "p_src"),
                                             hardy_click_event("pD2", "oD2"));
  const std::size_t cut = 2;  // after annihilation, before the closing splitters
  auto photon_w = photon_in_modes({"p_w"});
  auto photon_f = photon_in_modes({"p_f"});
  auto object_w = object_in_states("obj", {"o_w"});
  auto object_f = object_in_states("obj", {"o_f"});
  auto both = [](LabelPredicate a, LabelPredicate b) {
    return [a = std::move(a), b = std::move(b)](const BasisLabel& l) { return a(l) && b(l); };
  };
  return HardyWeakValues{
      tsv.weak_value(cut, photon_w),
      tsv.weak_value(cut, object_w),
      tsv.weak_value(cut, both(photon_w, object_w)),
      tsv.weak_value(cut, both(photon_f, object_f)),
  };
}

/// The three certainty statements of the nested test, each evaluated on the
/// variant circuit in which the relevant closing splitter is replaced by
/// position detectors on the arms.
enum class HardyQuery {
  object_at_w_given_photon_dark,  // photon reached its dark port
  photon_at_w_given_object_dark,  // object reached its dark port
  both_at_w,                      // both arms probed directly
};

inline double hardy_conditional(HardyQuery query, const HardyConfig& config = {}) {
  Circuit circuit;
  circuit.modes = {"p_src", "p_vac", "p_w", "p_f", "p_d1", "p_d2"};
  circuit.objects.push_back({"obj", {{"o_src", Amplitude{1.0, 0.0}}}});
  double T = config.transmittance;
  auto conv = config.convention;
  circuit.stages.push_back({
      BeamSplitter{"p_src", "p_vac", "p_f", "p_w", T, conv, ""},
      BeamSplitter{"o_src", "o_vac", "o_f", "o_w", T, conv, "obj"},
  });
  circuit.stages.push_back({Absorber{"p_w", "obj", "o_w", 0.0, true, 0.0}});

  std::vector<Element> closing;
  std::vector<Element> detectors;
  bool photon_positions = query != HardyQuery::object_at_w_given_photon_dark;
  bool object_positions = query != HardyQuery::photon_at_w_given_object_dark;
  if (photon_positions) {
    detectors.push_back(Detector{"p_w", "pW", ""});
    detectors.push_back(Detector{"p_f", "pF", ""});
  } else {
    closing.push_back(BeamSplitter{"p_f", "p_w", "p_d1", "p_d2", 1.0 - T, conv, ""});
    detectors.push_back(Detector{"p_d1", "pD1", ""});
    detectors.push_back(Detector{"p_d2", "pD2", ""});
  }
  if (object_positions) {
    detectors.push_back(Detector{"o_w", "oW", "obj"});
    detectors.push_back(Detector{"o_f", "oF", "obj"});
  } else {
    closing.push_back(BeamSplitter{"o_f", "o_w", "o_d1", "o_d2", 1.0 - T, conv, "obj"});
    detectors.push_back(Detector{"o_d1", "oD1", "obj"});
    detectors.push_back(Detector{"o_d2", "oD2", "obj"});
  }
  if (!closing.empty()) circuit.stages.push_back(std::move(closing));
  circuit.stages.push_back(std::move(detectors));

  OutcomeDistribution dist = outcome_distribution(circuit, initial_state(circuit, "p_src"));

  auto joint_and_marginal = [&](const std::string& condition_click,
                                const std::string& query_click) {
    double joint = 0.0;
    double marginal = 0.0;
    for (const auto& [event, p] : dist) {
      if (!event.clicked.contains(condition_click)) continue;
      marginal += p;
      if (event.clicked.contains(query_click)) joint += p;
    }
    if (marginal <= 0.0) {
      throw Error(ErrorCode::impossible_postselection,
                  "conditioning outcome has probability zero");
    }
    return joint / marginal;
  };

  switch (query) {
    case HardyQuery::object_at_w_given_photon_dark:
      return joint_and_marginal("pD2", "oW");
    case HardyQuery::photon_at_w_given_object_dark:
      return joint_and_marginal("oD2", "pW");
    case HardyQuery::both_at_w: {
      double joint = 0.0;
      for (const auto& [event, p] : dist) {
        if (event.clicked.contains("pW") && event.clicked.contains("oW")) joint += p;
      }
      return joint;
    }
  }
  throw Error(ErrorCode::bad_param, "unknown conditional query");
}

/// Generic container the command-line front end serializes.
struct ProtocolReport {
  std::string protocol;
  OutcomeDistribution distribution;
  std::map<std::string, double> quantities;
};

}  // namespace ifm
