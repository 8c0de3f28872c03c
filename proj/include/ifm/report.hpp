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
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ifm/circuit.hpp"
#include "ifm/sampling.hpp"
#include "ifm/scenario.hpp"
#include "ifm/tsvf.hpp"

namespace ifm {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "ifm-report/1";
inline constexpr const char* kGeneratorName = "mt19937_64+inverse-cdf";

/// Everything one scenario run produced.
struct RunReport {
  std::string scenario;
  std::string description;
  OutcomeDistribution distribution;
  std::optional<double> postselection_probability;
  std::optional<ProtocolReport> protocol;
  std::optional<SamplingRequest> sampling;
  CountTable counts;
};

inline RunReport run_scenario(const ScenarioSpec& spec,
                              std::optional<SamplingRequest> sampling_override = std::nullopt) {
  RunReport report;
  report.scenario = spec.name;
  report.description = spec.description;
  PureState input = initial_state(spec.circuit, spec.input);
  report.distribution = outcome_distribution(spec.circuit, input);
  if (spec.circuit.postselection) {
    report.postselection_probability =
        probability(report.distribution, *spec.circuit.postselection);
  }
  if (spec.protocol) {
    report.protocol = run_protocol(*spec.protocol);
  }
  std::optional<SamplingRequest> sampling =
      sampling_override ? sampling_override : spec.sampling;
  if (sampling && sampling->shots > 0) {
    report.sampling = sampling;
    report.counts = sample(report.distribution, sampling->shots, sampling->seed);
  }
  return report;
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::json distribution_json(const OutcomeDistribution& dist) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [event, p] : dist) {
    out.push_back({{"event", detail::event_json(event)},
                   {"label", event.str()},
                   {"probability", p}});
  }
  return out;
}

inline nlohmann::json protocol_report_json(const ProtocolReport& report) {
  nlohmann::json out;
  out["protocol"] = report.protocol;
  if (!report.distribution.empty()) {
    out["distribution"] = distribution_json(report.distribution);
  }
  out["quantities"] = report.quantities;
  return out;
}

inline nlohmann::json run_report_json(const RunReport& report) {
  nlohmann::json out;
  out["schema"] = kReportSchema;
  out["version"] = kVersion;
  out["scenario"] = report.scenario;
  out["description"] = report.description;
  out["distribution"] = distribution_json(report.distribution);
  if (report.postselection_probability) {
    out["postselection_probability"] = *report.postselection_probability;
  }
  if (report.protocol) {
    out["protocol"] = protocol_report_json(*report.protocol);
  }
  if (report.sampling) {
    nlohmann::json sj;
    sj["shots"] = report.sampling->shots;
    sj["seed"] = report.sampling->seed;
    sj["generator"] = kGeneratorName;
    sj["counts"] = nlohmann::json::array();
    for (const auto& [event, n] : report.counts) {
      double freq = static_cast<double>(n) / static_cast<double>(report.sampling->shots);
      sj["counts"].push_back({{"event", detail::event_json(event)},
                              {"label", event.str()},
                              {"count", n},
                              {"frequency", freq},
                              {"standard_error", standard_error(freq, report.sampling->shots)}});
    }
    out["sampling"] = std::move(sj);
  }
  return out;
}

// --- Human-readable tables ---------------------------------------------------

namespace detail {

inline std::string fixed(double x, int digits = 9) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace detail

inline std::string format_distribution(const OutcomeDistribution& dist) {
  std::size_t width = 12;
  for (const auto& [event, p] : dist) width = std::max(width, event.str().size() + 2);
  std::ostringstream os;
  os << detail::pad("outcome", width) << "probability\n";
  for (const auto& [event, p] : dist) {
    os << detail::pad(event.str(), width) << detail::fixed(p) << "\n";
  }
  return os.str();
}

inline std::string format_run(const RunReport& report) {
  std::ostringstream os;
  os << "scenario: " << report.scenario << "\n";
  if (!report.description.empty()) os << report.description << "\n";
  os << "\n";

  std::size_t width = 12;
  for (const auto& [event, p] : report.distribution) {
    width = std::max(width, event.str().size() + 2);
  }
  bool sampled = report.sampling.has_value();
  os << detail::pad("outcome", width) << detail::pad("probability", 14);
  if (sampled) {
    os << detail::pad("count", 10) << detail::pad("frequency", 14) << "std.err";
  }
  os << "\n";
  for (const auto& [event, p] : report.distribution) {
    os << detail::pad(event.str(), width) << detail::pad(detail::fixed(p), 14);
    if (sampled) {
      auto it = report.counts.find(event);
      std::uint64_t n = it == report.counts.end() ? 0 : it->second;
      double freq = static_cast<double>(n) / static_cast<double>(report.sampling->shots);
      os << detail::pad(std::to_string(n), 10) << detail::pad(detail::fixed(freq), 14)
         << detail::fixed(standard_error(freq, report.sampling->shots), 6);
    }
    os << "\n";
  }
  if (sampled) {
    os << "\nshots: " << report.sampling->shots << "  seed: " << report.sampling->seed
       << "  generator: " << kGeneratorName << "\n";
  }
  if (report.postselection_probability) {
    os << "\npostselection probability: " << detail::fixed(*report.postselection_probability)
       << "\n";
  }
  if (report.protocol) {
    os << "\nprotocol: " << report.protocol->protocol << "\n";
    for (const auto& [key, value] : report.protocol->quantities) {
      os << "  " << detail::pad(key, 36) << detail::fixed(value) << "\n";
    }
  }
  return os.str();
}

// --- Two-state-vector rendering ----------------------------------------------

inline std::string format_amplitude(const Amplitude& a, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << a.real();
  if (a.imag() >= 0) {
    os << "+" << std::fixed << std::setprecision(digits) << a.imag() << "i";
  } else {
    os << "-" << std::fixed << std::setprecision(digits) << -a.imag() << "i";
  }
  return os.str();
}

inline nlohmann::json tsv_json(const Circuit& circuit, const TwoStateVector& tsv) {
  nlohmann::json out;
  out["schema"] = "ifm-tsv/1";
  out["version"] = kVersion;
  out["overlap"] = {tsv.overlap.real(), tsv.overlap.imag()};
  out["abl_probability"] = tsv.abl_probability();
  out["cuts"] = nlohmann::json::array();
  for (std::size_t cut = 0; cut < tsv.cuts(); ++cut) {
    nlohmann::json cj;
    cj["cut"] = cut;
    cj["modes"] = nlohmann::json::array();
    for (const auto& mode : circuit.modes) {
      LabelPredicate at = photon_in_modes({mode});
      double wf = tsv.forward.at(cut).weight(at);
      double wb = tsv.backward.at(cut).weight(at);
      nlohmann::json mj;
      mj["mode"] = mode;
      mj["forward_weight"] = wf;
      mj["backward_weight"] = wb;
      mj["trace_free"] = tsv.trace_free(cut, mode);
      if (std::abs(tsv.overlap) >= kOverlapThreshold) {
        Amplitude wv = tsv.weak_value(cut, at);
        mj["weak_value"] = {wv.real(), wv.imag()};
      }
      cj["modes"].push_back(std::move(mj));
    }
    out["cuts"].push_back(std::move(cj));
  }
  return out;
}

inline std::string format_tsv(const Circuit& circuit, const TwoStateVector& tsv) {
  std::ostringstream os;
  os << "postselection probability: " << detail::fixed(tsv.abl_probability()) << "\n";
  os << "overlap: " << format_amplitude(tsv.overlap) << "\n\n";
  std::size_t width = 8;
  for (const auto& mode : circuit.modes) width = std::max(width, mode.size() + 2);
  os << detail::pad("cut", 6) << detail::pad("mode", width) << detail::pad("fwd.weight", 14)
     << detail::pad("bwd.weight", 14) << detail::pad("trace_free", 12) << "weak value\n";
  for (std::size_t cut = 0; cut < tsv.cuts(); ++cut) {
    for (const auto& mode : circuit.modes) {
      LabelPredicate at = photon_in_modes({mode});
      os << detail::pad(std::to_string(cut), 6) << detail::pad(mode, width)
         << detail::pad(detail::fixed(tsv.forward.at(cut).weight(at), 6), 14)
         << detail::pad(detail::fixed(tsv.backward.at(cut).weight(at), 6), 14)
         << detail::pad(tsv.trace_free(cut, mode) ? "yes" : "no", 12);
      if (std::abs(tsv.overlap) >= kOverlapThreshold) {
        os << format_amplitude(tsv.weak_value(cut, at));
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace ifm
