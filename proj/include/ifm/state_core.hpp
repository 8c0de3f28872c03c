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
#include <compare>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ifm/errors.hpp"

namespace ifm {

using Amplitude = std::complex<double>;

/// Default pruning threshold: branch enumeration produces exact cancellations
/// (dark ports) whose residue must be dropped deterministically.
inline constexpr double kDefaultTolerance = 1e-12;

/// Reserved object-state label for an object destroyed by an explosive absorber.
inline const std::string kExplodedState = "exploded";

/// Photon part of a basis configuration: occupying one mode, absorbed by a
/// detector/absorber, or not present at all (used for stripped conditionals).
struct PhotonState {
  enum class Kind { at_mode, absorbed, none };

  Kind kind = Kind::none;
  std::string mode;  // nonempty iff kind == at_mode

  static PhotonState at(std::string m) { return {Kind::at_mode, std::move(m)}; }
  static PhotonState absorbed() { return {Kind::absorbed, {}}; }
  static PhotonState none() { return {Kind::none, {}}; }

  bool is_at(const std::string& m) const { return kind == Kind::at_mode && mode == m; }
  bool is_absorbed() const { return kind == Kind::absorbed; }

  auto operator<=>(const PhotonState&) const = default;

  std::string str() const {
    switch (kind) {
      case Kind::at_mode: return mode;
      case Kind::absorbed: return "@absorbed";
      case Kind::none: return "@none";
    }
    return "@none";
  }
};

/// One classical configuration of the whole setup: photon mode occupancy,
/// the discrete state of every tracked object, and which detectors clicked.
/// Labels are totally ordered so every state has a unique normal form.
struct BasisLabel {
  PhotonState photon;
  std::map<std::string, std::string> objects;  // object id -> discrete state
  std::set<std::string> clicked;               // detector ids that clicked

  auto operator<=>(const BasisLabel&) const = default;

  static BasisLabel photon_at(std::string mode) {
    BasisLabel l;
    l.photon = PhotonState::at(std::move(mode));
    return l;
  }

  BasisLabel with_object(std::string id, std::string state) const {
    BasisLabel l = *this;
    l.objects[std::move(id)] = std::move(state);
    return l;
  }

  BasisLabel with_click(std::string detector_id) const {
    BasisLabel l = *this;
    l.clicked.insert(std::move(detector_id));
    return l;
  }

  BasisLabel with_photon(PhotonState p) const {
    BasisLabel l = *this;
    l.photon = std::move(p);
    return l;
  }

  bool object_exploded() const {
    for (const auto& [id, state] : objects) {
      if (state == kExplodedState) return true;
    }
    return false;
  }

  std::string str() const {
    std::ostringstream out;
    out << "[photon=" << photon.str();
    for (const auto& [id, state] : objects) out << " " << id << "=" << state;
    if (!clicked.empty()) {
      out << " clicked=";
      bool first = true;
      for (const auto& d : clicked) {
        if (!first) out << "+";
        out << d;
        first = false;
      }
    }
    out << "]";
    return out.str();
  }
};

using LabelPredicate = std::function<bool(const BasisLabel&)>;

namespace detail {
inline void check_finite(const Amplitude& a, const char* where) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw Error(ErrorCode::bad_param, std::string("non-finite amplitude in ") + where);
  }
}

inline void check_label(const BasisLabel& label) {
  // Single-photon sector: an exploded object implies the photon was consumed.
  if (label.object_exploded() && label.photon.kind == PhotonState::Kind::at_mode) {
    throw Error(ErrorCode::bad_param,
                "label has an exploded object but a live photon: " + label.str());
  }
}
}  // namespace detail

/// Sparse complex-amplitude state over basis labels. Values are immutable
/// after construction and safe to share across threads.
///
/// Public constructors (superpose) normalize; states produced by circuit
/// evolution keep their raw amplitudes so branch weights stay meaningful.
class PureState {
 public:
  using Terms = std::map<BasisLabel, Amplitude>;

  PureState() = default;

  /// Builds a normalized state from (label, amplitude) terms. Duplicate
  /// labels merge by amplitude addition; terms below tolerance are pruned.
  static PureState superpose(const std::vector<std::pair<BasisLabel, Amplitude>>& terms,
                             double tolerance = kDefaultTolerance) {
    Terms merged;
    for (const auto& [label, amp] : terms) {
      detail::check_finite(amp, "superpose");
      detail::check_label(label);
      merged[label] += amp;
    }
    PureState state(std::move(merged), tolerance);
    state.prune();
    if (state.terms_.empty()) {
      throw Error(ErrorCode::all_zero, "every amplitude is below tolerance");
    }
    state.normalize();
    return state;
  }

  const Terms& terms() const { return terms_; }
  double tolerance() const { return tolerance_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Amplitude amplitude(const BasisLabel& label) const {
    auto it = terms_.find(label);
    return it == terms_.end() ? Amplitude{0.0, 0.0} : it->second;
  }

  double norm_squared() const {
    double total = 0.0;
    for (const auto& [label, amp] : terms_) total += std::norm(amp);
    return total;
  }

  /// Rescales to unit norm. Throws ALL_ZERO on a (numerically) empty state.
  PureState& normalize() {
    double n2 = norm_squared();
    if (n2 <= tolerance_ * tolerance_) {
      throw Error(ErrorCode::all_zero, "cannot normalize a zero state");
    }
    double scale = 1.0 / std::sqrt(n2);
    for (auto& [label, amp] : terms_) amp *= scale;
    return *this;
  }

  /// Total weight of labels matching the predicate.
  double weight(const LabelPredicate& predicate) const {
    double total = 0.0;
    for (const auto& [label, amp] : terms_) {
      if (predicate(label)) total += std::norm(amp);
    }
    return total;
  }

  /// Restriction to labels matching the predicate, without renormalizing.
  PureState restricted(const LabelPredicate& predicate) const {
    Terms kept;
    for (const auto& [label, amp] : terms_) {
      if (predicate(label)) kept.emplace(label, amp);
    }
    return PureState(std::move(kept), tolerance_);
  }

  bool operator==(const PureState& other) const { return terms_ == other.terms_; }

  std::string str() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [label, amp] : terms_) {
      if (!first) out << " + ";
      out << "(" << amp.real() << (amp.imag() < 0 ? "" : "+") << amp.imag() << "i)"
          << label.str();
      first = false;
    }
    return out.str();
  }

 private:
  explicit PureState(Terms terms, double tolerance)
      : terms_(std::move(terms)), tolerance_(tolerance) {}

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) < tolerance_) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  friend PureState raw_state(typename PureState::Terms terms, double tolerance);

  Terms terms_;
  double tolerance_ = kDefaultTolerance;
};

/// Escape hatch for evolution internals: wraps raw (possibly unnormalized)
/// terms after pruning. Not part of the public construction surface.
inline PureState raw_state(typename PureState::Terms terms, double tolerance = kDefaultTolerance) {
  PureState state(std::move(terms), tolerance);
  state.prune();
  return state;
}

/// <a|b> with conjugation on a.
inline Amplitude inner_product(const PureState& a, const PureState& b) {
  Amplitude total{0.0, 0.0};
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  // Walk the smaller map, look up in the larger.
  if (ta.size() <= tb.size()) {
    for (const auto& [label, amp] : ta) total += std::conj(amp) * b.amplitude(label);
  } else {
    for (const auto& [label, amp] : tb) total += std::conj(a.amplitude(label)) * amp;
  }
  return total;
}

/// Measurement/post-selection primitive: probability of the predicate holding
/// plus the renormalized conditional state (nullopt on a zero-probability branch).
inline std::pair<double, std::optional<PureState>> project(const PureState& state,
                                                           const LabelPredicate& predicate) {
  double prob = state.weight(predicate);
  if (prob <= state.tolerance() * state.tolerance()) {
    return {0.0, std::nullopt};
  }
  PureState conditional = state.restricted(predicate);
  conditional.normalize();
  return {prob, std::move(conditional)};
}

}  // namespace ifm
