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

#ifndef NMRQC_SHAPED_PULSE_HPP
#define NMRQC_SHAPED_PULSE_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nmrqc/pulse_engine.hpp"

namespace nmrqc {

enum class PulseShape { Gaussian, Rectangular };

/// A frequency-selective pulse on one spin. The RF stays at the transmitter
/// frequency; selectivity comes from a linear phase ramp at ramp_offset_hz
/// (defaulting to the target spin's offset, i.e. on-resonance irradiation)
/// plus the envelope's narrow excitation bandwidth. The envelope is scaled
/// so its time integral equals the flip angle.
struct ShapedPulseSpec {
  Spin target = Spin::I;
  double flip_deg = 90.0;
  double phase_deg = 90.0;
  PulseShape shape = PulseShape::Gaussian;
  double duration_s = 6e-3;
  /// Fraction of the peak amplitude at which the Gaussian is truncated at
  /// the pulse edges; must lie in (0, 1). Ignored for rectangular pulses.
  double truncation = 0.01;
  int slices = 512;
  std::optional<double> ramp_offset_hz;

  /// Throws std::invalid_argument on nonpositive duration, truncation
  /// outside (0, 1), or fewer than 32 slices.
  void validate() const;
};

/// One time slice of the discretized envelope.
struct EnvelopeSample {
  double amplitude_rad_s;
  double phase_rad;
};

/// Midpoint-sampled envelope with the phase ramp applied. The spec's
/// ramp_offset_hz must be resolved (see resolve_ramp); an unset ramp means
/// no ramp. Invariant: sum(amplitude * dt) == flip angle in radians.
std::vector<EnvelopeSample> envelope(const ShapedPulseSpec& spec);

/// Fill an unset ramp_offset_hz with the target spin's offset.
ShapedPulseSpec resolve_ramp(const ShapedPulseSpec& spec,
                             const SpinSystem& sys);

/// Time-sliced propagator: the ordered product over slices of
/// exp(-i dt (H_free + w1(t_k) (cos(phi_k) F_x + sin(phi_k) F_y))) with
/// F_a acting on BOTH spins; spin selectivity is physical, not assumed.
/// Slices are multiplied in fixed-size chunks so the result is identical
/// for any OpenMP thread count.
C4 shaped_propagator(const SpinSystem& sys, const ShapedPulseSpec& spec);

/// Straight serial product over all slices; reference implementation for
/// testing the chunked kernel.
C4 shaped_propagator_reference(const SpinSystem& sys,
                               const ShapedPulseSpec& spec);

/// Convergence probe: max-abs difference between the propagator at the
/// requested slice count and at twice that count.
double slice_convergence(const SpinSystem& sys, const ShapedPulseSpec& spec);

/// |Tr(target^dag achieved)| / 4, the phase-insensitive gate fidelity;
/// equals 1 iff the unitaries agree up to global phase.
double propagator_fidelity(const C4& achieved, const C4& target);

/// Net z-rotation angle picked up by the spectator spin, in degrees in
/// (-180, 180]: the relative phase between the spectator's |0> and |1>
/// blocks of the propagator, insensitive to what the pulse did to the
/// target spin. A fully flipped spectator reports 180.
double spectator_z_residual_deg(const C4& u, Spin spectator);

struct PulseReport {
  C4 achieved;
  double fidelity;
  double spectator_z_residual_deg;
};

/// Compare an achieved propagator against the ideal hard pulse it stands in
/// for; spectator is the spin the pulse was not meant to touch.
PulseReport pulse_fidelity(const C4& achieved, const C4& ideal,
                           Spin spectator);

class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Adjust the pulse duration (within +-50% of the requested one) so the
/// spectator's net z-rotation vanishes; candidate zero crossings are spaced
/// by roughly the inverse spectator offset. Returns the spec with the
/// calibrated duration. Throws CalibrationError if the spins are degenerate
/// or no zero crossing lies in the window.
ShapedPulseSpec calibrate_spectator(const SpinSystem& sys,
                                    ShapedPulseSpec spec);

/// Default envelope parameters for selective pulses synthesized from hard
/// pulse events in shaped compilation.
struct ShapedDefaults {
  PulseShape shape = PulseShape::Gaussian;
  double duration_s = 6e-3;
  double truncation = 0.01;
  int slices = 512;
};

/// One calibrated selective pulse actually realized by a ShapedLibrary.
struct UsedPulse {
  Spin target;
  double flip_deg;
  double phase_deg;
  double duration_s;
  double fidelity;
  double spectator_z_residual_deg;
};

/// Cache of calibrated selective pulses for one spin system. Calibration is
/// per (target, flip); propagators are additionally keyed by phase. Safe to
/// share across threads.
class ShapedLibrary {
 public:
  explicit ShapedLibrary(const SpinSystem& sys, ShapedDefaults defaults = {});

  const SpinSystem& system() const { return sys_; }
  const ShapedDefaults& defaults() const { return defaults_; }

  /// Calibrated selective-pulse propagator standing in for
  /// hard_pulse(flip, phase, target).
  C4 selective(Spin target, double flip_deg, double phase_deg) const;

  /// The calibrated spec (phase left at its default).
  ShapedPulseSpec calibrated(Spin target, double flip_deg) const;

  /// Fidelity and spectator residual of one selective pulse against its
  /// ideal hard-pulse counterpart.
  PulseReport report(Spin target, double flip_deg, double phase_deg) const;

  /// Every distinct pulse realized so far, for end-of-run quality checks.
  std::vector<UsedPulse> used() const;

 private:
  struct Impl;
  SpinSystem sys_;
  ShapedDefaults defaults_;
  std::shared_ptr<Impl> impl_;
};

}  // namespace nmrqc

#endif
