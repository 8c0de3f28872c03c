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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ifm/circuit.hpp"
#include "ifm/elements.hpp"
#include "ifm/errors.hpp"
#include "ifm/protocols.hpp"
#include "ifm/state_core.hpp"

namespace ifm {

struct ProtocolRequest {
  std::string name;
  nlohmann::json params = nlohmann::json::object();

  bool operator==(const ProtocolRequest&) const = default;
};

struct SamplingRequest {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  bool operator==(const SamplingRequest&) const = default;
};

/// One self-contained experiment: a circuit, the photon input, and optional
/// protocol and sampling blocks.
struct ScenarioSpec {
  std::string name;
  std::string description;
  Circuit circuit;
  std::vector<std::pair<std::string, Amplitude>> input;
  std::optional<ProtocolRequest> protocol;
  std::optional<SamplingRequest> sampling;

  bool operator==(const ScenarioSpec&) const = default;
};

namespace detail {

inline Amplitude parse_amp(const nlohmann::json& j) {
  if (j.is_number()) return Amplitude{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Amplitude{j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorCode::parse_error, "amplitude must be a number or [re, im]");
}

inline nlohmann::json amp_json(const Amplitude& a) {
  return nlohmann::json::array({a.real(), a.imag()});
}

inline SplitterConvention parse_convention(const std::string& s) {
  if (s == "real_minus_second") return SplitterConvention::real_minus_second;
  if (s == "real_minus_first") return SplitterConvention::real_minus_first;
  if (s == "symmetric_i") return SplitterConvention::symmetric_i;
  throw Error(ErrorCode::parse_error, "unknown splitter convention '" + s + "'");
}

inline std::string convention_name(SplitterConvention c) {
  switch (c) {
    case SplitterConvention::real_minus_second: return "real_minus_second";
    case SplitterConvention::real_minus_first: return "real_minus_first";
    case SplitterConvention::symmetric_i: return "symmetric_i";
  }
  return "real_minus_second";
}

inline Element parse_element(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  std::string target = j.value("target", std::string{});
  if (kind == "beam_splitter") {
    const auto& in = j.at("in");
    const auto& out = j.at("out");
    if (!in.is_array() || in.size() != 2 || !out.is_array() || out.size() != 2) {
      throw Error(ErrorCode::parse_error, "beam_splitter needs two-entry in/out arrays");
    }
    return BeamSplitter{in[0].get<std::string>(),  in[1].get<std::string>(),
                        out[0].get<std::string>(), out[1].get<std::string>(),
                        j.value("transmittance", 0.5),
                        parse_convention(j.value("convention", std::string{"real_minus_second"})),
                        target};
  }
  if (kind == "mirror") {
    return Mirror{j.at("in").get<std::string>(), j.at("out").get<std::string>(), target};
  }
  if (kind == "phase") {
    return PhaseShifter{j.at("mode").get<std::string>(), j.at("phi").get<double>(), target};
  }
  if (kind == "absorber") {
    return Absorber{j.at("mode").get<std::string>(),
                    j.at("object").get<std::string>(),
                    j.value("blocking_state", std::string{"in"}),
                    j.value("transmittance", 0.0),
                    j.value("explosive", true),
                    j.value("transmission_phase", 0.0)};
  }
  if (kind == "detector") {
    return Detector{j.at("mode").get<std::string>(), j.at("id").get<std::string>(), target};
  }
  if (kind == "coupler") {
    return Coupler{j.at("left").get<std::string>(), j.at("right").get<std::string>(),
                   j.at("theta").get<double>(), target};
  }
  throw Error(ErrorCode::unknown_element_kind, "unknown element kind '" + kind + "'");
}

inline nlohmann::json element_json(const Element& element) {
  nlohmann::json j;
  if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
    j["kind"] = "beam_splitter";
    j["in"] = {bs->in_a, bs->in_b};
    j["out"] = {bs->out_a, bs->out_b};
    j["transmittance"] = bs->transmittance;
    j["convention"] = convention_name(bs->convention);
    j["target"] = bs->target;
  } else if (const auto* mi = std::get_if<Mirror>(&element)) {
    j["kind"] = "mirror";
    j["in"] = mi->in;
    j["out"] = mi->out;
    j["target"] = mi->target;
  } else if (const auto* ph = std::get_if<PhaseShifter>(&element)) {
    j["kind"] = "phase";
    j["mode"] = ph->mode;
    j["phi"] = ph->phi;
    j["target"] = ph->target;
  } else if (const auto* ab = std::get_if<Absorber>(&element)) {
    j["kind"] = "absorber";
    j["mode"] = ab->mode;
    j["object"] = ab->object_id;
    j["blocking_state"] = ab->blocking_state;
    j["transmittance"] = ab->transmittance;
    j["explosive"] = ab->explosive;
    j["transmission_phase"] = ab->transmission_phase;
  } else if (const auto* de = std::get_if<Detector>(&element)) {
    j["kind"] = "detector";
    j["mode"] = de->mode;
    j["id"] = de->detector_id;
    j["target"] = de->target;
  } else if (const auto* cp = std::get_if<Coupler>(&element)) {
    j["kind"] = "coupler";
    j["left"] = cp->left;
    j["right"] = cp->right;
    j["theta"] = cp->theta;
    j["target"] = cp->target;
  }
  return j;
}

inline TerminalEvent parse_event(const nlohmann::json& j) {
  TerminalEvent event;
  for (const auto& id : j.value("exploded", nlohmann::json::array())) {
    event.exploded.insert(id.get<std::string>());
  }
  for (const auto& id : j.value("clicked", nlohmann::json::array())) {
    event.clicked.insert(id.get<std::string>());
  }
  if (j.contains("photon")) {
    const auto& p = j.at("photon");
    if (p.is_string() && p.get<std::string>() == "absorbed") {
      event.photon = PhotonState::absorbed();
    } else if (p.is_object() && p.contains("at")) {
      event.photon = PhotonState::at(p.at("at").get<std::string>());
    } else {
      throw Error(ErrorCode::parse_error, "photon must be \"absorbed\" or {\"at\": mode}");
    }
  }
  return event;
}

inline nlohmann::json event_json(const TerminalEvent& event) {
  nlohmann::json j;
  j["exploded"] = event.exploded;
  j["clicked"] = event.clicked;
  if (event.photon.kind == PhotonState::Kind::at_mode) {
    j["photon"] = nlohmann::json{{"at", event.photon.mode}};
  } else {
    j["photon"] = "absorbed";
  }
  return j;
}

}  // namespace detail

/// Parses scenario JSON. Structural problems raise PARSE_ERROR or
/// UNKNOWN_ELEMENT_KIND; a well-formed file describing an ill-formed circuit
/// raises VALIDATION_ERROR with every issue listed.
inline ScenarioSpec parse_scenario(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }

  ScenarioSpec spec;
  try {
    spec.name = root.at("name").get<std::string>();
    spec.description = root.value("description", std::string{});

    const auto& cj = root.at("circuit");
    for (const auto& m : cj.at("modes")) {
      spec.circuit.modes.insert(m.get<std::string>());
    }
    for (const auto& oj : cj.value("objects", nlohmann::json::array())) {
      ObjectSpec object;
      object.id = oj.at("id").get<std::string>();
      for (const auto& t : oj.at("initial")) {
        object.initial.emplace_back(t.at("state").get<std::string>(),
                                    detail::parse_amp(t.at("amp")));
      }
      spec.circuit.objects.push_back(std::move(object));
    }
    for (const auto& sj : cj.at("stages")) {
      if (!sj.is_array()) {
        throw Error(ErrorCode::parse_error, "each stage must be an array of elements");
      }
      std::vector<Element> stage;
      for (const auto& ej : sj) {
        stage.push_back(detail::parse_element(ej));
      }
      spec.circuit.stages.push_back(std::move(stage));
    }
    if (cj.contains("postselection")) {
      spec.circuit.postselection = detail::parse_event(cj.at("postselection"));
    }
    for (const auto& t : cj.at("input")) {
      spec.input.emplace_back(t.at("mode").get<std::string>(), detail::parse_amp(t.at("amp")));
    }

    if (root.contains("protocol")) {
      ProtocolRequest request;
      request.name = root.at("protocol").at("name").get<std::string>();
      request.params = root.at("protocol").value("params", nlohmann::json::object());
      spec.protocol = std::move(request);
    }
    if (root.contains("sampling")) {
      SamplingRequest request;
      request.shots = root.at("sampling").at("shots").get<std::uint64_t>();
      request.seed = root.at("sampling").value("seed", std::uint64_t{0});
      spec.sampling = request;
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }

  auto issues = validate(spec.circuit);
  if (!issues.empty()) {
    std::string message = "scenario circuit is invalid: ";
    for (std::size_t i = 0; i < issues.size(); ++i) {
      if (i) message += "; ";
      message += issues[i].message;
    }
    throw Error(ErrorCode::validation_error, message);
  }
  return spec;
}

/// Inverse of parse_scenario: parse(serialize(spec)) == spec.
inline std::string serialize_scenario(const ScenarioSpec& spec) {
  nlohmann::json root;
  root["name"] = spec.name;
  root["description"] = spec.description;

  nlohmann::json cj;
  cj["modes"] = spec.circuit.modes;
  cj["objects"] = nlohmann::json::array();
  for (const auto& object : spec.circuit.objects) {
    nlohmann::json oj;
    oj["id"] = object.id;
    oj["initial"] = nlohmann::json::array();
    for (const auto& [state, amp] : object.initial) {
      oj["initial"].push_back({{"state", state}, {"amp", detail::amp_json(amp)}});
    }
    cj["objects"].push_back(std::move(oj));
  }
  cj["stages"] = nlohmann::json::array();
  for (const auto& stage : spec.circuit.stages) {
    nlohmann::json sj = nlohmann::json::array();
    for (const auto& element : stage) {
      sj.push_back(detail::element_json(element));
    }
    cj["stages"].push_back(std::move(sj));
  }
  if (spec.circuit.postselection) {
    cj["postselection"] = detail::event_json(*spec.circuit.postselection);
  }
  cj["input"] = nlohmann::json::array();
  for (const auto& [mode, amp] : spec.input) {
    cj["input"].push_back({{"mode", mode}, {"amp", detail::amp_json(amp)}});
  }
  root["circuit"] = std::move(cj);

  if (spec.protocol) {
    root["protocol"] = {{"name", spec.protocol->name}, {"params", spec.protocol->params}};
  }
  if (spec.sampling) {
    root["sampling"] = {{"shots", spec.sampling->shots}, {"seed", spec.sampling->seed}};
  }
  return root.dump(2) + "\n";
}

// --- Protocol dispatch -----------------------------------------------------

namespace detail {

inline EvObject parse_ev_object(const nlohmann::json& params) {
  std::string kind = params.value("object", std::string{"bomb"});
  if (kind == "absent") return EvObject::absent();
  if (kind == "bomb") return EvObject::bomb();
  if (kind == "opaque") return EvObject::opaque();
  if (kind == "semi_transparent") {
    return EvObject::semi_transparent(params.value("alpha", 0.5));
  }
  throw Error(ErrorCode::parse_error, "unknown object kind '" + kind + "'");
}

}  // namespace detail

/// Runs a named protocol with JSON parameters. The report carries the exact
/// outcome distribution (when the protocol has a single canonical run) plus
/// named scalar results.
inline ProtocolReport run_protocol(const ProtocolRequest& request) {
  ProtocolReport report;
  report.protocol = request.name;
  const nlohmann::json& p = request.params;

  try {
    if (request.name == "ev_single_shot") {
      double T = p.value("transmittance", 0.5);
      report.distribution = ev_single_shot(T, detail::parse_ev_object(p));
      double d2 = probability(report.distribution, ev_click_event("D2"));
      double boom = probability(report.distribution, ev_explosion_event());
      report.quantities["p_d1"] = probability(report.distribution, ev_click_event("D1"));
      report.quantities["p_d2"] = d2;
      report.quantities["p_explosion"] = boom;
      if (d2 + boom > 0.0) report.quantities["efficiency"] = d2 / (d2 + boom);
    } else if (request.name == "ev_repeated") {
      double T = p.value("transmittance", 0.5);
      std::optional<int> rounds;
      if (p.contains("max_rounds")) rounds = p.at("max_rounds").get<int>();
      RepeatMode mode = p.value("mode", std::string{"analytic"}) == "simulated"
                            ? RepeatMode::simulated
                            : RepeatMode::analytic;
      RepeatedOutcome outcome = ev_repeated(T, rounds, mode);
      report.quantities["found"] = outcome.found;
      report.quantities["exploded"] = outcome.exploded;
      report.quantities["undecided"] = outcome.undecided;
      report.quantities["efficiency"] = outcome.efficiency;
    } else if (request.name == "zeno") {
      int cycles = p.value("cycles", 10);
      bool bomb = p.value("bomb", true);
      report.distribution = zeno_run(cycles, bomb);
      report.quantities["p_left"] =
          probability(report.distribution, TerminalEvent::photon_at("left"));
      report.quantities["p_right"] =
          probability(report.distribution, TerminalEvent::photon_at("right"));
      if (bomb) {
        report.quantities["p_explosion"] =
            probability(report.distribution, ev_explosion_event());
      }
    } else if (request.name == "hardy") {
      HardyConfig config;
      config.transmittance = p.value("transmittance", 0.5);
      report.distribution = hardy_run(config);
      report.quantities["p_both_dark"] =
          probability(report.distribution, hardy_click_event("pD2", "oD2"));
      report.quantities["p_annihilation"] =
          probability(report.distribution, hardy_annihilation_event());
      HardyWeakValues wv = hardy_weak_values(config);
      report.quantities["weak_photon_at_w"] = wv.photon_at_w.real();
      report.quantities["weak_object_at_w"] = wv.object_at_w.real();
      report.quantities["weak_both_at_w"] = wv.both_at_w.real();
      report.quantities["weak_both_at_f"] = wv.both_at_f.real();
      report.quantities["p_object_at_w_given_photon_dark"] =
          hardy_conditional(HardyQuery::object_at_w_given_photon_dark, config);
      report.quantities["p_photon_at_w_given_object_dark"] =
          hardy_conditional(HardyQuery::photon_at_w_given_object_dark, config);
      report.quantities["p_both_at_w"] = hardy_conditional(HardyQuery::both_at_w, config);
    } else if (request.name == "dicke") {
      double T = p.value("transmittance", 0.5);
      std::vector<std::pair<std::string, Amplitude>> initial;
      for (const auto& t : p.at("initial")) {
        initial.emplace_back(t.at("state").get<std::string>(), detail::parse_amp(t.at("amp")));
      }
      auto [prob, state] = dicke_localization(initial, T);
      report.quantities["p_d2"] = prob;
      for (const auto& [label, weight] : object_marginal(state, "bomb")) {
        report.quantities["object_weight_" + label] = weight;
      }
    } else {
      throw Error(ErrorCode::unknown_protocol, "unknown protocol '" + request.name + "'");
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  return report;
}

}  // namespace ifm
