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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "ifm/ifm.hpp"

namespace {

using namespace ifm;
using namespace ifm::testing;

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  REQUIRE(file.good());
  std::ostringstream os;
  os << file.rdbuf();
  return os.str();
}

ScenarioSpec load(const std::string& name) {
  return parse_scenario(slurp(std::string(IFM_SCENARIO_DIR) + "/" + name + ".scenario"));
}

template <typename F>
std::optional<ErrorCode> code_of(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

const char* kBundled[] = {"ev_bomb",  "ev_empty",     "ev_asymmetric",
                          "penrose",  "wheeler_open", "renninger_sectors",
                          "dicke_ev", "hardy",        "zeno"};

}  // namespace

TEST_CASE("bundled scenarios parse and survive a serialize round trip", "[scenario]") {
  for (const char* name : kBundled) {
    DYNAMIC_SECTION(name) {
      ScenarioSpec spec = load(name);
      CHECK(spec.name == name);
      CHECK_FALSE(spec.description.empty());
      CHECK(parse_scenario(serialize_scenario(spec)) == spec);
    }
  }
}

TEST_CASE("bomb and reference scenarios give the textbook split", "[scenario]") {
  RunReport bomb = run_scenario(load("ev_bomb"));
  CHECK(dist_near(bomb.distribution, {{ev_explosion_event(), 0.5},
                                      {ev_click_event("D1"), 0.25},
                                      {ev_click_event("D2"), 0.25}}));
  REQUIRE(bomb.postselection_probability.has_value());
  CHECK(*bomb.postselection_probability == Catch::Approx(0.25).margin(1e-9));
  std::uint64_t total = 0;
  for (const auto& [event, n] : bomb.counts) total += n;
  CHECK(total == 10000);

  RunReport empty = run_scenario(load("ev_empty"));
  CHECK(probability(empty.distribution, ev_click_event("D2")) == 0.0);
  CHECK(probability(empty.distribution, ev_click_event("D1")) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("asymmetric scenario feeds the repeated protocol", "[scenario]") {
  RunReport report = run_scenario(load("ev_asymmetric"));
  CHECK(dist_near(report.distribution, {{ev_explosion_event(), 0.2},
                                        {ev_click_event("D1"), 0.64},
                                        {ev_click_event("D2"), 0.16}}));
  REQUIRE(report.protocol.has_value());
  CHECK(report.protocol->quantities.at("found") == Catch::Approx(4.0 / 9.0).margin(1e-9));
  CHECK(report.protocol->quantities.at("exploded") == Catch::Approx(5.0 / 9.0).margin(1e-9));
  CHECK(report.protocol->quantities.at("efficiency") == Catch::Approx(4.0 / 9.0).margin(1e-9));
}

TEST_CASE("superposed-object scenarios localize on the dark click", "[scenario]") {
  ScenarioSpec penrose = load("penrose");
  RunReport report = run_scenario(penrose);
  CHECK(dist_near(report.distribution, {{TerminalEvent::absorbed().with_explosion("mine"), 0.25},
                                        {ev_click_event("D1"), 0.625},
                                        {ev_click_event("D2"), 0.125}}));
  PureState input = initial_state(penrose.circuit, penrose.input);
  auto [prob, state] = conditional_state(penrose.circuit, input, ev_click_event("D2"));
  REQUIRE(state.has_value());
  CHECK(prob == Catch::Approx(0.125).margin(1e-9));
  auto marginal = object_marginal(*state, "mine");
  CHECK(marginal.at("live") == Catch::Approx(1.0).margin(1e-9));
  CHECK(marginal.count("dud") == 0);

  RunReport dicke = run_scenario(load("dicke_ev"));
  REQUIRE(dicke.protocol.has_value());
  CHECK(dicke.protocol->quantities.at("p_d2") == Catch::Approx(0.125).margin(1e-9));
  CHECK(dicke.protocol->quantities.at("object_weight_in") == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("open interferometer and sector scenarios expose which-path records",
          "[scenario]") {
  RunReport wheeler = run_scenario(load("wheeler_open"));
  CHECK(dist_near(wheeler.distribution,
                  {{ev_click_event("D1"), 0.5}, {ev_click_event("D2"), 0.5}}));

  RunReport sectors = run_scenario(load("renninger_sectors"));
  CHECK(dist_near(sectors.distribution, {{ev_click_event("DS0"), 0.25},
                                         {TerminalEvent::photon_at("s1"), 0.25},
                                         {TerminalEvent::photon_at("s2"), 0.25},
                                         {TerminalEvent::photon_at("s3"), 0.25}}));
}

TEST_CASE("joint-interferometer scenario reports the paradoxical certainties",
          "[scenario]") {
  RunReport report = run_scenario(load("hardy"));
  CHECK(dist_near(report.distribution,
                  {{hardy_click_event("pD1", "oD1"), 9.0 / 16.0},
                   {hardy_click_event("pD1", "oD2"), 1.0 / 16.0},
                   {hardy_click_event("pD2", "oD1"), 1.0 / 16.0},
                   {hardy_click_event("pD2", "oD2"), 1.0 / 16.0},
                   {hardy_annihilation_event(), 0.25}}));
  REQUIRE(report.protocol.has_value());
  const auto& q = report.protocol->quantities;
  CHECK(q.at("p_both_dark") == Catch::Approx(1.0 / 16.0).margin(1e-9));
  CHECK(q.at("weak_photon_at_w") == Catch::Approx(1.0).margin(1e-9));
  CHECK(q.at("weak_object_at_w") == Catch::Approx(1.0).margin(1e-9));
  CHECK(q.at("weak_both_at_w") == Catch::Approx(0.0).margin(1e-9));
  CHECK(q.at("weak_both_at_f") == Catch::Approx(-1.0).margin(1e-9));
  CHECK(q.at("p_object_at_w_given_photon_dark") == Catch::Approx(1.0).margin(1e-9));
  CHECK(q.at("p_photon_at_w_given_object_dark") == Catch::Approx(1.0).margin(1e-9));
  CHECK(q.at("p_both_at_w") == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("pinned-rail scenario matches the closed-form survival", "[scenario]") {
  RunReport report = run_scenario(load("zeno"));
  double survive4 = std::pow(std::cos(std::numbers::pi / 8.0), 8.0);
  CHECK(dist_near(report.distribution,
                  {{TerminalEvent::photon_at("left"), survive4},
                   {ev_explosion_event(), 1.0 - survive4}}));
  REQUIRE(report.protocol.has_value());
  double survive10 = std::pow(std::cos(std::numbers::pi / 20.0), 20.0);
  CHECK(report.protocol->quantities.at("p_left") == Catch::Approx(survive10).margin(1e-9));
  CHECK(report.protocol->quantities.at("p_right") == Catch::Approx(0.0).margin(1e-9));
  CHECK(report.protocol->quantities.at("p_explosion") ==
        Catch::Approx(1.0 - survive10).margin(1e-9));
}

TEST_CASE("malformed scenario text raises typed errors", "[scenario]") {
  CHECK(code_of([] { parse_scenario("{ nope"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { parse_scenario("{}"); }) == ErrorCode::parse_error);

  const std::string skeleton_open = R"({"name":"x","circuit":{"modes":["a"],)";
  CHECK(code_of([&] {
          parse_scenario(skeleton_open +
                         R"("input":[{"mode":"a","amp":1.0}],
                             "stages":[[{"kind":"teleporter"}]]}})");
        }) == ErrorCode::unknown_element_kind);
  CHECK(code_of([&] {
          parse_scenario(skeleton_open +
                         R"("input":[{"mode":"a","amp":"big"}],"stages":[]}})");
        }) == ErrorCode::parse_error);
  CHECK(code_of([&] {
          parse_scenario(skeleton_open +
                         R"("input":[{"mode":"a","amp":1.0}],
                             "stages":[[{"kind":"beam_splitter","in":["a","a"],
                                         "out":["a","a"],"convention":"sideways"}]]}})");
        }) == ErrorCode::parse_error);
  CHECK(code_of([&] {
          parse_scenario(skeleton_open +
                         R"("input":[{"mode":"a","amp":1.0}],
                             "stages":[{"kind":"mirror","in":"a","out":"a"}]}})");
        }) == ErrorCode::parse_error);
  CHECK(code_of([&] {
          parse_scenario(skeleton_open +
                         R"("input":[{"mode":"a","amp":1.0}],
                             "stages":[[{"kind":"mirror","in":"a","out":"b"}]]}})");
        }) == ErrorCode::validation_error);
  CHECK(code_of([&] {
          parse_scenario(skeleton_open +
                         R"("input":[{"mode":"a","amp":1.0}],
                             "stages":[[{"kind":"phase","mode":"a","phi":0.5}]],
                             "postselection":{"photon":7}}})");
        }) == ErrorCode::parse_error);
}

TEST_CASE("protocol dispatch rejects unknown names and bad parameters", "[scenario]") {
  CHECK(code_of([] { run_protocol({"teleport", nlohmann::json::object()}); }) ==
        ErrorCode::unknown_protocol);
  CHECK(code_of([] { run_protocol({"dicke", nlohmann::json::object()}); }) ==
        ErrorCode::parse_error);
  CHECK(code_of([] {
          run_protocol({"ev_single_shot", nlohmann::json{{"object", "ghost"}}});
        }) == ErrorCode::parse_error);
  CHECK(code_of([] {
          run_protocol({"ev_repeated", nlohmann::json{{"max_rounds", 0}}});
        }) == ErrorCode::bad_param);

  ProtocolReport shot =
      run_protocol({"ev_single_shot", nlohmann::json{{"transmittance", 0.5}}});
  CHECK(shot.quantities.at("p_d2") == Catch::Approx(0.25).margin(1e-9));
  CHECK(shot.quantities.at("efficiency") == Catch::Approx(1.0 / 3.0).margin(1e-9));

  ProtocolReport semi = run_protocol(
      {"ev_single_shot", nlohmann::json{{"object", "semi_transparent"}, {"alpha", 0.25}}});
  CHECK(semi.quantities.at("p_explosion") == Catch::Approx(0.375).margin(1e-9));
}

TEST_CASE("a synthetic scenario with every element kind round-trips", "[scenario]") {
  ScenarioSpec spec;
  spec.name = "synthetic";
  spec.description = "exercises every element kind";
  spec.circuit.modes = {"a", "b", "c", "d", "e"};
  spec.circuit.objects.push_back({"obj", {{"s1", Amplitude{0.0, 1.0}}}});
  spec.circuit.stages.push_back(
      {BeamSplitter{"a", "b", "c", "d", 0.3, SplitterConvention::symmetric_i, ""}});
  spec.circuit.stages.push_back({PhaseShifter{"c", 0.7, ""}, Coupler{"d", "e", 0.2, ""}});
  spec.circuit.stages.push_back({Absorber{"d", "obj", "s1", 0.5, false, 0.25}});
  spec.circuit.stages.push_back({Mirror{"c", "a", ""}});
  spec.circuit.stages.push_back({Detector{"a", "DA", ""}});
  spec.circuit.postselection = ev_click_event("DA");
  spec.input = {{"a", Amplitude{0.6, 0.8}}};
  spec.protocol = ProtocolRequest{"zeno", nlohmann::json{{"cycles", 3}, {"bomb", false}}};
  spec.sampling = SamplingRequest{64, 9};

  ScenarioSpec back = parse_scenario(serialize_scenario(spec));
  CHECK(back == spec);
}

TEST_CASE("run reports expose schema, counts, and sampling metadata", "[scenario]") {
  RunReport report = run_scenario(load("ev_bomb"));
  nlohmann::json j = run_report_json(report);
  CHECK(j.at("schema") == kReportSchema);
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("scenario") == "ev_bomb");
  CHECK(j.at("distribution").size() == 3);
  CHECK(j.at("postselection_probability").get<double>() == Catch::Approx(0.25).margin(1e-9));
  REQUIRE(j.contains("sampling"));
  CHECK(j.at("sampling").at("generator") == kGeneratorName);
  std::uint64_t total = 0;
  for (const auto& row : j.at("sampling").at("counts")) {
    total += row.at("count").get<std::uint64_t>();
    CHECK(row.at("frequency").get<double>() >= 0.0);
    CHECK(row.at("standard_error").get<double>() >= 0.0);
  }
  CHECK(total == 10000);

  RunReport overridden = run_scenario(load("ev_empty"), SamplingRequest{128, 1});
  std::uint64_t small = 0;
  for (const auto& [event, n] : overridden.counts) small += n;
  CHECK(small == 128);

  std::string table = format_run(report);
  CHECK(table.find("ev_bomb") != std::string::npos);
  CHECK(table.find("D2") != std::string::npos);
  CHECK(table.find("shots: 10000") != std::string::npos);
}

TEST_CASE("two-state-vector reports serialize weights per cut", "[scenario]") {
  Circuit circuit = two_splitter(0.5, {{"in", Amplitude{1.0, 0.0}}});
  TwoStateVector tsv =
      make_two_state_vector(circuit, initial_state(circuit, "src"), ev_click_event("D2"));
  nlohmann::json j = tsv_json(circuit, tsv);
  CHECK(j.at("schema") == "ifm-tsv/1");
  CHECK(j.at("abl_probability").get<double>() == Catch::Approx(0.25).margin(1e-9));
  REQUIRE(j.at("cuts").size() == circuit.stages.size() + 1);
  for (const auto& cj : j.at("cuts")) {
    CHECK(cj.at("modes").size() == circuit.modes.size());
  }
  std::string table = format_tsv(circuit, tsv);
  CHECK(table.find("trace_free") != std::string::npos);
}
