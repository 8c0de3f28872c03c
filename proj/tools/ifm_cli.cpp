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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ifm/ifm.hpp"

namespace {

using namespace ifm;

// Exit codes: 0 success, 2 scenario/circuit rejected, 3 runtime failure.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::validation_error:
    case ErrorCode::unknown_element_kind:
    case ErrorCode::unknown_mode:
    case ErrorCode::unknown_object:
    case ErrorCode::mode_clash:
    case ErrorCode::empty_circuit:
      return 2;
    default:
      return 3;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  if (!file.good()) {
    throw Error(ErrorCode::parse_error, "cannot read scenario file '" + path + "'");
  }
  std::ostringstream os;
  os << file.rdbuf();
  return os.str();
}

// Every subcommand produces one human-readable table and one JSON record.
// `--json -` swaps the streams: JSON on stdout, table on stderr.
// `--json PATH` writes the record to a file and keeps the table on stdout.
void emit(const nlohmann::json& record, const std::string& table, const std::string& json_target) {
  if (json_target.empty()) {
    std::cout << table;
    return;
  }
  if (json_target == "-") {
    std::cout << record.dump(2) << "\n";
    std::cerr << table;
    return;
  }
  std::ofstream out(json_target);
  if (!out.good()) {
    throw Error(ErrorCode::bad_param, "cannot write report file '" + json_target + "'");
  }
  out << record.dump(2) << "\n";
  std::cout << table;
}

// --postselect accepts comma-separated key=value pairs:
//   detector=D2          one detector click
//   clicks=pD2+oD2       several clicks
//   photon=out1          surviving photon mode ("absorbed" for none)
//   exploded=bomb        object blown up
TerminalEvent parse_postselect(const std::string& text) {
  TerminalEvent event = TerminalEvent::absorbed();
  std::istringstream stream(text);
  std::string pair;
  while (std::getline(stream, pair, ',')) {
    auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse_error, "postselect entry '" + pair + "' is not key=value");
    }
    std::string key = pair.substr(0, eq);
    std::string value = pair.substr(eq + 1);
    if (key == "detector") {
      event.clicked.insert(value);
    } else if (key == "clicks") {
      std::istringstream clicks(value);
      std::string id;
      while (std::getline(clicks, id, '+')) event.clicked.insert(id);
    } else if (key == "photon") {
      event.photon = value == "absorbed" ? PhotonState::absorbed() : PhotonState::at(value);
    } else if (key == "exploded") {
      event.exploded.insert(value);
    } else {
      throw Error(ErrorCode::parse_error, "unknown postselect key '" + key + "'");
    }
  }
  return event;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> shots, std::uint64_t seed,
            const std::string& json_target) {
  ScenarioSpec spec = parse_scenario(slurp(path));
  std::optional<SamplingRequest> sampling_override;
  if (shots) sampling_override = SamplingRequest{*shots, seed};
  RunReport report = run_scenario(spec, sampling_override);
  emit(run_report_json(report), format_run(report), json_target);
  return 0;
}

int cmd_sweep(const std::string& param, double from, double to, int steps,
              const std::string& json_target) {
  if (param != "T") {
    throw Error(ErrorCode::bad_param, "only the transmittance parameter 'T' can be swept");
  }
  if (steps < 1) throw Error(ErrorCode::bad_param, "steps must be at least 1");
  std::vector<double> ts;
  for (int k = 0; k < steps; ++k) {
    double f = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    ts.push_back(from + f * (to - from));
  }
  auto frontier = efficiency_frontier(ts);

  nlohmann::json record;
  record["schema"] = "ifm-sweep/1";
  record["version"] = kVersion;
  record["parameter"] = param;
  record["rows"] = nlohmann::json::array();
  std::ostringstream table;
  table << "transmittance  efficiency\n";
  for (const auto& [T, eta] : frontier) {
    record["rows"].push_back({{"transmittance", T}, {"efficiency", eta}});
    table << detail::fixed(T, 6) << "       " << detail::fixed(eta) << "\n";
  }
  emit(record, table.str(), json_target);
  return 0;
}

int cmd_zeno(int cycles, std::optional<int> max_n, const std::string& json_target) {
  std::vector<int> ns;
  if (max_n) {
    if (*max_n < 1) throw Error(ErrorCode::bad_param, "max-n must be at least 1");
    for (int n = 1; n < *max_n; n *= 2) ns.push_back(n);
    ns.push_back(*max_n);
  } else {
    ns.push_back(cycles);
  }

  nlohmann::json record;
  record["schema"] = "ifm-zeno/1";
  record["version"] = kVersion;
  record["rows"] = nlohmann::json::array();
  std::ostringstream table;
  table << "cycles  p_left_bomb   p_explosion   p_right_absent\n";
  for (int n : ns) {
    OutcomeDistribution with_bomb = zeno_run(n, true);
    OutcomeDistribution absent = zeno_run(n, false);
    double p_left = probability(with_bomb, TerminalEvent::photon_at("left"));
    double p_boom = probability(with_bomb, ev_explosion_event());
    double p_right = probability(absent, TerminalEvent::photon_at("right"));
    record["rows"].push_back({{"cycles", n},
                              {"p_left_bomb", p_left},
                              {"p_explosion", p_boom},
                              {"p_right_absent", p_right}});
    table << detail::pad(std::to_string(n), 8) << detail::fixed(p_left) << "   "
          << detail::fixed(p_boom) << "   " << detail::fixed(p_right) << "\n";
  }
  emit(record, table.str(), json_target);
  return 0;
}

int cmd_hardy(double transmittance, const std::string& json_target) {
  ProtocolReport report =
      run_protocol({"hardy", nlohmann::json{{"transmittance", transmittance}}});
  std::ostringstream table;
  table << format_distribution(report.distribution) << "\n";
  for (const auto& [key, value] : report.quantities) {
    table << detail::pad(key, 36) << detail::fixed(value) << "\n";
  }
  emit(protocol_report_json(report), table.str(), json_target);
  return 0;
}

int cmd_repeat(double transmittance, std::optional<int> rounds, const std::string& mode,
               const std::string& json_target) {
  RepeatMode repeat_mode;
  if (mode == "analytic") {
    repeat_mode = RepeatMode::analytic;
  } else if (mode == "simulated") {
    repeat_mode = RepeatMode::simulated;
  } else {
    throw Error(ErrorCode::bad_param, "mode must be analytic or simulated");
  }
  RepeatedOutcome outcome = ev_repeated(transmittance, rounds, repeat_mode);

  nlohmann::json record;
  record["schema"] = "ifm-repeat/1";
  record["version"] = kVersion;
  record["transmittance"] = transmittance;
  record["found"] = outcome.found;
  record["exploded"] = outcome.exploded;
  record["undecided"] = outcome.undecided;
  record["efficiency"] = outcome.efficiency;
  std::ostringstream table;
  if (!outcome.rounds.empty()) {
    record["rounds"] = nlohmann::json::array();
    table << "round  found         exploded      undecided\n";
    for (const auto& r : outcome.rounds) {
      record["rounds"].push_back({{"round", r.round},
                                  {"found", r.found},
                                  {"exploded", r.exploded},
                                  {"undecided", r.undecided}});
      table << detail::pad(std::to_string(r.round), 7) << detail::fixed(r.found) << "   "
            << detail::fixed(r.exploded) << "   " << detail::fixed(r.undecided) << "\n";
    }
    table << "\n";
  }
  table << "found:      " << detail::fixed(outcome.found) << "\n"
        << "exploded:   " << detail::fixed(outcome.exploded) << "\n"
        << "undecided:  " << detail::fixed(outcome.undecided) << "\n"
        << "efficiency: " << detail::fixed(outcome.efficiency) << "\n";
  emit(record, table.str(), json_target);
  return 0;
}

int cmd_tsvf(const std::string& path, const std::string& postselect,
             const std::string& json_target) {
  ScenarioSpec spec = parse_scenario(slurp(path));
  std::optional<TerminalEvent> event = spec.circuit.postselection;
  if (!postselect.empty()) event = parse_postselect(postselect);
  if (!event) {
    throw Error(ErrorCode::bad_param,
                "no postselection: give --postselect or a scenario postselection block");
  }
  PureState input = initial_state(spec.circuit, spec.input);
  TwoStateVector tsv = make_two_state_vector(spec.circuit, input, *event);
  emit(tsv_json(spec.circuit, tsv), format_tsv(spec.circuit, tsv), json_target);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator for interaction-free measurement interferometers"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string json_target;
  std::string postselect;
  std::string sweep_param = "T";
  std::string repeat_mode = "analytic";
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
  double from = 0.1;
  double to = 0.9;
  int steps = 9;
  int cycles = 10;
  std::optional<int> max_n;
  std::optional<int> rounds;
  double transmittance = 0.5;

  auto add_json = [&](CLI::App* cmd) {
    cmd->add_option("--json", json_target,
                    "write the JSON record here ('-' for stdout, table moves to stderr)");
  };

  CLI::App* run = app.add_subcommand("run", "evolve a scenario file and report outcomes");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--shots", shots, "override sampling shot count");
  run->add_option("--seed", seed, "sampling seed used with --shots");
  add_json(run);

  CLI::App* sweep = app.add_subcommand("sweep", "repeated-protocol efficiency versus transmittance");
  sweep->add_option("--param", sweep_param, "swept parameter (only 'T')");
  sweep->add_option("--from", from, "first value");
  sweep->add_option("--to", to, "last value");
  sweep->add_option("--steps", steps, "number of rows");
  add_json(sweep);

  CLI::App* zeno = app.add_subcommand("zeno", "pinned-rail survival versus cycle count");
  zeno->add_option("--cycles", cycles, "single cycle count to evaluate");
  zeno->add_option("--max-n", max_n, "emit a table of cycle counts up to this value");
  add_json(zeno);

  CLI::App* hardy = app.add_subcommand("hardy", "joint interferometer with an annihilation vertex");
  hardy->add_option("--transmittance", transmittance, "splitter transmittance");
  add_json(hardy);

  CLI::App* repeat = app.add_subcommand("repeat", "repeat-until-decided bomb test");
  repeat->add_option("--transmittance", transmittance, "first splitter transmittance");
  repeat->add_option("--rounds", rounds, "maximum number of rounds");
  repeat->add_option("--mode", repeat_mode, "analytic or simulated");
  add_json(repeat);

  CLI::App* tsvf = app.add_subcommand("tsvf", "forward/backward weights and weak values per cut");
  tsvf->add_option("scenario", scenario_path, "scenario file")->required();
  tsvf->add_option("--postselect", postselect,
                   "terminal event, e.g. detector=D2 or clicks=pD2+oD2,photon=absorbed");
  add_json(tsvf);

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(scenario_path, shots, seed, json_target);
    if (sweep->parsed()) return cmd_sweep(sweep_param, from, to, steps, json_target);
    if (zeno->parsed()) return cmd_zeno(cycles, max_n, json_target);
    if (hardy->parsed()) return cmd_hardy(transmittance, json_target);
    if (repeat->parsed()) return cmd_repeat(transmittance, rounds, repeat_mode, json_target);
    if (tsvf->parsed()) return cmd_tsvf(scenario_path, postselect, json_target);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
