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

#include <stdexcept>
#include <string>

namespace ifm {

enum class ErrorCode {
  bad_param,
  all_zero,
  unknown_mode,
  unknown_object,
  certain_detection,
  impossible_postselection,
  zero_overlap,
  parse_error,
  unknown_element_kind,
  unknown_protocol,
  validation_error,
  mode_clash,
  empty_circuit,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_param: return "BAD_PARAM";
    case ErrorCode::all_zero: return "ALL_ZERO";
    case ErrorCode::unknown_mode: return "UNKNOWN_MODE";
    case ErrorCode::unknown_object: return "UNKNOWN_OBJECT";
    case ErrorCode::certain_detection: return "CERTAIN_DETECTION";
    case ErrorCode::impossible_postselection: return "IMPOSSIBLE_POSTSELECTION";
    case ErrorCode::zero_overlap: return "ZERO_OVERLAP";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::unknown_element_kind: return "UNKNOWN_ELEMENT_KIND";
    case ErrorCode::unknown_protocol: return "UNKNOWN_PROTOCOL";
    case ErrorCode::validation_error: return "VALIDATION_ERROR";
    case ErrorCode::mode_clash: return "MODE_CLASH";
    case ErrorCode::empty_circuit: return "EMPTY_CIRCUIT";
  }
  return "UNKNOWN";
}

/// Exception carrying a stable error code alongside the human-readable text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ifm
