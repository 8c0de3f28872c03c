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

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "ifm/errors.hpp"
#include "ifm/state_core.hpp"

namespace ifm {

/// 2x2 complex matrix; M[i][j] is the amplitude from input port j to output
/// port i, so a splitter acts as |in_j> -> sum_i M[i][j] |out_i>.
using Mat2 = std::array<std::array<Amplitude, 2>, 2>;

inline Mat2 mat2_adjoint(const Mat2& m) {
  return {{{std::conj(m[0][0]), std::conj(m[1][0])},
           {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

inline Mat2 mat2_multiply(const Mat2& a, const Mat2& b) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    }
  }
  return out;
}

/// Sign placement for the real beam-splitter matrix. The real conventions put
/// the relative minus on one input port's reflected/transmitted pair; the
/// symmetric convention uses an i phase on both cross terms instead and is
/// kept for cross-checks.
enum class SplitterConvention {
  real_minus_second,  // [[sqrtT, sqrtR], [sqrtR, -sqrtT]]
  real_minus_first,   // [[-sqrtT, sqrtR], [sqrtR, sqrtT]]
  symmetric_i,        // [[sqrtT, i sqrtR], [i sqrtR, sqrtT]]
};

/// Beam-splitter matrix with transmittance T. Unitary by construction.
inline Mat2 bs_matrix(double T, SplitterConvention convention = SplitterConvention::real_minus_second) {
  if (!(T >= 0.0 && T <= 1.0)) {
    throw Error(ErrorCode::bad_param, "beam splitter transmittance must be in [0,1]");
  }
  double t = std::sqrt(T);
  double r = std::sqrt(1.0 - T);
  switch (convention) {
    case SplitterConvention::real_minus_second:
      return {{{Amplitude{t, 0}, Amplitude{r, 0}}, {Amplitude{r, 0}, Amplitude{-t, 0}}}};
    case SplitterConvention::real_minus_first:
      return {{{Amplitude{-t, 0}, Amplitude{r, 0}}, {Amplitude{r, 0}, Amplitude{t, 0}}}};
    case SplitterConvention::symmetric_i:
      return {{{Amplitude{t, 0}, Amplitude{0, r}}, {Amplitude{0, r}, Amplitude{t, 0}}}};
  }
  throw Error(ErrorCode::bad_param, "unknown splitter convention");
}

/// Per-cycle rotation between two coupled cavity modes.
inline Mat2 coupler_matrix(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::bad_param, "coupler angle must be in [0, pi/2]");
  }
  double c = std::cos(theta);
  double s = std::sin(theta);
  return {{{Amplitude{c, 0}, Amplitude{-s, 0}}, {Amplitude{s, 0}, Amplitude{c, 0}}}};
}

// --- Element descriptors -------------------------------------------------
//
// Every element carries a `target`: empty string for the photon, or an
// object id for elements acting on that object's discrete state labels
// (nested-interferometer setups give the object its own splitters and
// detectors).

struct BeamSplitter {
  std::string in_a;
  std::string in_b;
  std::string out_a;
  std::string out_b;
  double transmittance = 0.5;
  SplitterConvention convention = SplitterConvention::real_minus_second;
  std::string target{};  // "" = photon, else object id

  bool operator==(const BeamSplitter&) const = default;
};

struct Mirror {
  std::string in;
  std::string out;
  std::string target{};

  bool operator==(const Mirror&) const = default;
};

struct PhaseShifter {
  std::string mode;
  double phi = 0.0;
  std::string target{};

  bool operator==(const PhaseShifter&) const = default;
};

/// Object in the photon's path. With the object in `blocking_state`, a photon
/// at `mode` transmits with amplitude sqrt(transmittance) and is absorbed
/// with amplitude sqrt(1-transmittance); an explosive absorber destroys the
/// object in the absorbed branch, a plain blocker leaves it unchanged.
struct Absorber {
  std::string mode;
  std::string object_id;
  std::string blocking_state = "in";
  double transmittance = 0.0;       // alpha: 0 = opaque, 1 = fully transparent
  bool explosive = true;
  double transmission_phase = 0.0;  // phase picked up by the transmitted branch

  bool operator==(const Absorber&) const = default;
};

struct Detector {
  std::string mode;
  std::string detector_id;
  std::string target{};

  bool operator==(const Detector&) const = default;
};

struct Coupler {
  std::string left;
  std::string right;
  double theta = 0.0;
  std::string target{};

  bool operator==(const Coupler&) const = default;
};

using Element = std::variant<BeamSplitter, Mirror, PhaseShifter, Absorber, Detector, Coupler>;

enum class Direction { forward, adjoint };

/// Reserved object-state prefix marking an object consumed by its detector.
inline const std::string kDetectedPrefix = "@detected:";

namespace detail {

// Absorption sites must be unique per absorbing element so that every
// element application stays an isometry (two absorption events at different
// elements land on orthogonal labels). The engine passes the stage index as
// a prefix; bare apply_element calls fall back to the mode name alone.
inline std::string absorption_site(const std::string& prefix, const std::string& mode) {
  return prefix.empty() ? mode : prefix + ":" + mode;
}

inline bool label_matches_mode(const BasisLabel& label, const std::string& target,
                               const std::string& mode) {
  if (target.empty()) return label.photon.is_at(mode);
  auto it = label.objects.find(target);
  return it != label.objects.end() && it->second == mode;
}

inline BasisLabel relabel(const BasisLabel& label, const std::string& target,
                          const std::string& mode) {
  BasisLabel out = label;
  if (target.empty()) {
    out.photon = PhotonState::at(mode);
  } else {
    out.objects[target] = mode;
  }
  return out;
}

// Shared implementation for all two-port linear elements (beam splitters,
// couplers, mirrors as a 1x1 special case handled separately). Applies
// |in_j> -> sum_i M[i][j]|out_i> on the target system, identity elsewhere.
inline void emit_two_mode(PureState::Terms& out, const BasisLabel& label, const Amplitude& amp,
                          const std::string& target, const Mat2& m, const std::string& in_a,
                          const std::string& in_b, const std::string& out_a,
                          const std::string& out_b) {
  int port = label_matches_mode(label, target, in_a) ? 0
           : label_matches_mode(label, target, in_b) ? 1
                                                     : -1;
  if (port < 0) {
    out[label] += amp;
    return;
  }
  Amplitude to_a = m[0][port];
  Amplitude to_b = m[1][port];
  if (to_a != Amplitude{0.0, 0.0}) out[relabel(label, target, out_a)] += amp * to_a;
  if (to_b != Amplitude{0.0, 0.0}) out[relabel(label, target, out_b)] += amp * to_b;
}

// A fresh output label must not already carry amplitude, otherwise the
// element would overwrite live population and the map would not be an
// isometry. Inputs mapping onto themselves are exempt.
inline void check_outputs_free(const PureState& state, const std::string& target,
                               const std::vector<std::string>& inputs,
                               const std::vector<std::string>& outputs) {
  for (const auto& out : outputs) {
    bool is_input = false;
    for (const auto& in : inputs) {
      if (in == out) is_input = true;
    }
    if (is_input) continue;
    for (const auto& [label, amp] : state.terms()) {
      if (label_matches_mode(label, target, out)) {
        throw Error(ErrorCode::validation_error,
                    "element output '" + out + "' already carries amplitude");
      }
    }
  }
}

}  // namespace detail

/// Applies one element to a state, term by term. `site_prefix` disambiguates
/// absorption events between stages; the circuit engine supplies it. The
/// result keeps raw branch amplitudes (no renormalization); every element is
/// an isometry, so the norm is preserved regardless.
inline PureState apply_element(const PureState& state, const Element& element,
                               Direction direction = Direction::forward,
                               const std::string& site_prefix = "") {
  PureState::Terms out;

  auto two_mode = [&](const std::string& target, Mat2 m, std::string in_a, std::string in_b,
                      std::string out_a, std::string out_b) {
    if (direction == Direction::adjoint) {
      m = mat2_adjoint(m);
      std::swap(in_a, out_a);
      std::swap(in_b, out_b);
    }
    detail::check_outputs_free(state, target, {in_a, in_b}, {out_a, out_b});
    for (const auto& [label, amp] : state.terms()) {
      // A label sitting on an input not reachable from the outputs was
      // consumed in the forward direction; the adjoint annihilates it.
      if (direction == Direction::adjoint &&
          (detail::label_matches_mode(label, target, out_a) ||
           detail::label_matches_mode(label, target, out_b)) &&
          !detail::label_matches_mode(label, target, in_a) &&
          !detail::label_matches_mode(label, target, in_b)) {
        continue;
      }
      detail::emit_two_mode(out, label, amp, target, m, in_a, in_b, out_a, out_b);
    }
  };

  if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
    two_mode(bs->target, bs_matrix(bs->transmittance, bs->convention), bs->in_a, bs->in_b,
             bs->out_a, bs->out_b);
  } else if (const auto* cp = std::get_if<Coupler>(&element)) {
    two_mode(cp->target, coupler_matrix(cp->theta), cp->left, cp->right, cp->left, cp->right);
  } else if (const auto* mi = std::get_if<Mirror>(&element)) {
    std::string in = mi->in;
    std::string to = mi->out;
    if (direction == Direction::adjoint) std::swap(in, to);
    detail::check_outputs_free(state, mi->target, {in}, {to});
    for (const auto& [label, amp] : state.terms()) {
      if (direction == Direction::adjoint && detail::label_matches_mode(label, mi->target, to) &&
          !detail::label_matches_mode(label, mi->target, in)) {
        continue;  // consumed forward, annihilated backward
      }
      if (detail::label_matches_mode(label, mi->target, in)) {
        out[detail::relabel(label, mi->target, to)] += amp;
      } else {
        out[label] += amp;
      }
    }
  } else if (const auto* ph = std::get_if<PhaseShifter>(&element)) {
    double phi = direction == Direction::forward ? ph->phi : -ph->phi;
    Amplitude factor = std::polar(1.0, phi);
    for (const auto& [label, amp] : state.terms()) {
      if (detail::label_matches_mode(label, ph->target, ph->mode)) {
        out[label] += amp * factor;
      } else {
        out[label] += amp;
      }
    }
  } else if (const auto* ab = std::get_if<Absorber>(&element)) {
    if (!(ab->transmittance >= 0.0 && ab->transmittance <= 1.0)) {
      throw Error(ErrorCode::bad_param, "absorber transmittance must be in [0,1]");
    }
    const std::string site = detail::absorption_site(site_prefix, ab->mode);
    Amplitude transmit = std::polar(std::sqrt(ab->transmittance), ab->transmission_phase);
    double absorb = std::sqrt(1.0 - ab->transmittance);
    for (const auto& [label, amp] : state.terms()) {
      auto obj = label.objects.find(ab->object_id);
      bool blocked = label.photon.is_at(ab->mode) && obj != label.objects.end() &&
                     obj->second == ab->blocking_state;
      if (direction == Direction::forward) {
        if (!blocked) {
          out[label] += amp;
          continue;
        }
        if (std::abs(transmit) > 0.0) out[label] += amp * transmit;
        if (absorb > 0.0) {
          BasisLabel gone = label;
          gone.photon = PhotonState{PhotonState::Kind::absorbed, site};
          if (ab->explosive) gone.objects[ab->object_id] = kExplodedState;
          out[gone] += amp * absorb;
        }
      } else {
        // Adjoint: the absorbed label has a unique preimage; the blocked
        // live label keeps only its transmitted overlap.
        bool is_absorbed_here =
            label.photon.kind == PhotonState::Kind::absorbed && label.photon.mode == site &&
            obj != label.objects.end() &&
            obj->second == (ab->explosive ? kExplodedState : ab->blocking_state);
        if (is_absorbed_here) {
          BasisLabel back = label;
          back.photon = PhotonState::at(ab->mode);
          back.objects[ab->object_id] = ab->blocking_state;
          out[back] += amp * absorb;
        }
        if (blocked) {
          out[label] += amp * std::conj(transmit);
        } else if (!is_absorbed_here) {
          out[label] += amp;
        }
      }
    }
  } else if (const auto* de = std::get_if<Detector>(&element)) {
    const std::string site = detail::absorption_site(site_prefix, de->mode);
    for (const auto& [label, amp] : state.terms()) {
      bool armed = !label.clicked.contains(de->detector_id);
      bool at_mode = detail::label_matches_mode(label, de->target, de->mode);
      if (direction == Direction::forward) {
        if (armed && at_mode) {
          BasisLabel hit = label;
          hit.clicked.insert(de->detector_id);
          if (de->target.empty()) {
            hit.photon = PhotonState{PhotonState::Kind::absorbed, site};
          } else {
            hit.objects[de->target] = kDetectedPrefix + de->detector_id;
          }
          out[hit] += amp;
        } else {
          out[label] += amp;
        }
      } else {
        bool clicked_here = label.clicked.contains(de->detector_id);
        bool consumed_form =
            de->target.empty()
                ? (label.photon.kind == PhotonState::Kind::absorbed && label.photon.mode == site)
                : (label.objects.contains(de->target) &&
                   label.objects.at(de->target) == kDetectedPrefix + de->detector_id);
        if (clicked_here && consumed_form) {
          BasisLabel back = label;
          back.clicked.erase(de->detector_id);
          if (de->target.empty()) {
            back.photon = PhotonState::at(de->mode);
          } else {
            back.objects[de->target] = de->mode;
          }
          out[back] += amp;
        } else if (armed && at_mode) {
          continue;  // consumed forward, annihilated backward
        } else {
          out[label] += amp;
        }
      }
    }
  } else {
    throw Error(ErrorCode::unknown_element_kind, "unhandled element variant");
  }

  return raw_state(std::move(out), state.tolerance());
}

}  // namespace ifm
