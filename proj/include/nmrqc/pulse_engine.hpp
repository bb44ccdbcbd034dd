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

#ifndef NMRQC_PULSE_ENGINE_HPP
#define NMRQC_PULSE_ENGINE_HPP

#include <limits>
#include <vector>

#include "nmrqc/spin_algebra.hpp"

namespace nmrqc {

/// Rotating-frame parameters of the two-spin system. Offsets are in Hz
/// relative to the transmitter; J is the scalar coupling in Hz. The free
/// Hamiltonian is
///   H = 2 pi nu_I I_z + 2 pi nu_S S_z + pi J 2 I_z S_z   (rad/s),
/// diagonal in the computational basis (weak-coupling form).
struct SpinSystem {
  double nu_i_hz = 0.0;
  double nu_s_hz = 0.0;
  double j_hz = 0.0;
  double t2star_s = std::numeric_limits<double>::infinity();

  double offset_hz(Spin spin) const {
    return spin == Spin::I ? nu_i_hz : nu_s_hz;
  }

  /// The weak-coupling form is a good description when the chemical-shift
  /// difference dominates the coupling.
  bool weakly_coupled() const;

  /// Throws std::invalid_argument on t2star <= 0 or non-finite offsets.
  void validate() const;
};

/// Which spins a pulse or rotation acts on.
enum class Target { I, S, Both };

bool targets_spin(Target target, Spin spin);

/// Single-spin rotation exp(-i flip (cos(phase) sigma_x + sin(phase)
/// sigma_y) / 2); angles in degrees. phase = 0 is +x, 90 is +y.
C2 rotation2(double flip_deg, double phase_deg);

/// Single-spin z rotation exp(-i theta sigma_z / 2), theta in degrees.
C2 zrot2(double theta_deg);

/// Ideal instantaneous pulse about an equatorial axis, applied to the
/// targeted spins: exp(-i flip (cos(phase) F_x + sin(phase) F_y)) with
/// F_a the sum of the targeted spins' angular-momentum operators.
C4 hard_pulse(double flip_deg, double phase_deg, Target target);

/// Ideal z rotation exp(-i theta F_z) on the targeted spins.
C4 z_rotation(double theta_deg, Target target);

/// exp(-i t H) for the free Hamiltonian above. Requires t >= 0.
C4 free_evolution(const SpinSystem& sys, double t_s);

/// Coupling-only evolution for a time fraction/|J|, i.e. both chemical
/// shifts refocused: exp(-i pi J (fraction/|J|) 2 I_z S_z). couple(0.5) is
/// the CNOT-forming half turn. Requires fraction >= 0 and J != 0.
C4 couple(double fraction, const SpinSystem& sys);

/// True Hadamard on the targeted spins, built from the pulse sandwich
/// 45_y . 180_x . 45_{-y}; equals the textbook Hadamard up to a global
/// phase of -i per targeted spin.
C4 hadamard_exact(Target target);

/// Pseudo-Hadamard: a plain 90_y (inverse: 90_{-y}). Maps |0> to
/// (|0> + |1>)/sqrt(2) like the Hadamard but is not self-inverse.
C4 pseudo_hadamard(Target target, bool inverse = false);

/// T2* dephasing over an interval: off-diagonal elements decay by
/// exp(-t/T2*), populations are untouched. Requires t >= 0. With infinite
/// T2* this is the identity map.
DensityMatrix dephase(const DensityMatrix& rho, double t_s,
                      const SpinSystem& sys);

/// Diagonal of the free Hamiltonian in rad/s, basis order |00>, |01>,
/// |10>, |11>. Shared by free_evolution and the FID synthesis kernel.
std::array<double, 4> hamiltonian_diagonal(const SpinSystem& sys);

}  // namespace nmrqc

#endif
