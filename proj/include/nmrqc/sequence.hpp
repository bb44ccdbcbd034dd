// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NMRQC_SEQUENCE_HPP
#define NMRQC_SEQUENCE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nmrqc/shaped_pulse.hpp"

namespace nmrqc {

// Pulse-sequence events, one per DSL line. Sequences read left to right in
// time; compilation multiplies propagators right to left.

struct PulseEvent {
  Target target;
  double flip_deg;
  double phase_deg;
  bool operator==(const PulseEvent&) const = default;
};

struct SoftPulseEvent {
  Spin target;
  double flip_deg;
  double phase_deg;
  double duration_s;
  std::optional<double> offset_hz;
  std::optional<double> truncation;
  std::optional<int> slices;
  bool operator==(const SoftPulseEvent&) const = default;
};

struct DelayEvent {
  double value;  // seconds, or a multiple of 1/J
  bool fraction_of_j;
  bool operator==(const DelayEvent&) const = default;
};

struct CoupleEvent {
  double fraction;
  bool operator==(const CoupleEvent&) const = default;
};

struct ZRotEvent {
  Target target;
  double theta_deg;
  bool operator==(const ZRotEvent&) const = default;
};

using Event =
    std::variant<PulseEvent, SoftPulseEvent, DelayEvent, CoupleEvent,
                 ZRotEvent>;

struct Sequence {
  std::string name;
  std::vector<Event> events;
};

struct ParseError {
  int line;
  int column;
  std::string message;
  std::string token;

  std::string to_string() const;
};

/// Parse DSL text. '#' starts a comment; blank lines are skipped; `pulse`
/// events with a z axis normalize to zrot events. Returns the first error
/// encountered.
std::variant<Sequence, ParseError> parse(std::string_view text,
                                         std::string name = {});

/// Canonical text form; parse(print(s)) reproduces s exactly (numbers are
/// printed in shortest round-trip form).
std::string print(const Sequence& seq);

enum class CompileMode { Ideal, Shaped };

class CompileError : public std::runtime_error {
 public:
  explicit CompileError(const std::string& what) : std::runtime_error(what) {}
};

/// Compile a sequence to its 4x4 propagator.
///
/// Ideal mode: pulse events are instantaneous hard pulses; delay/couple are
/// exact free evolutions; zrot is exact.
///
/// Shaped mode: single-spin pulse events become calibrated selective pulses
/// drawn from `shaped` (required, else CompileError); both-spin pulses stay
/// hard; delay/couple/zrot are unchanged. Soft events are always simulated
/// by time slicing in either mode, with unset envelope fields filled from
/// the library defaults when available.
C4 compile(const Sequence& seq, const SpinSystem& sys,
           CompileMode mode = CompileMode::Ideal,
           const ShapedLibrary* shaped = nullptr);

/// Named gate realizations: u00, u01, u10, u11, u01_merged, u10_merged,
/// u11_shaped, hadamard_I, hadamard_S, pseudo_h, deutsch_prep. Throws
/// std::invalid_argument for unknown names.
Sequence builtin(std::string_view name);

std::vector<std::string_view> builtin_names();

/// Replace each zrot event by its composite pulse realization
/// 90_y . theta_x . 90_{-y} on the same target.
Sequence expand_composite_z(const Sequence& seq);

/// Compile and compare against a target propagator up to global phase.
PhaseDistance check_equivalence(const Sequence& seq, const C4& target,
                                const SpinSystem& sys,
                                CompileMode mode = CompileMode::Ideal,
                                const ShapedLibrary* shaped = nullptr);

}  // namespace nmrqc

#endif
