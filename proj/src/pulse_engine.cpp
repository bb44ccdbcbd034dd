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

#include "nmrqc/pulse_engine.hpp"

#include <cmath>
#include <stdexcept>

namespace nmrqc {

bool SpinSystem::weakly_coupled() const {
  return std::abs(nu_i_hz - nu_s_hz) >= 10.0 * std::abs(j_hz);
}

void SpinSystem::validate() const {
  if (!(t2star_s > 0.0)) {
    throw std::invalid_argument("T2* must be positive");
  }
  if (!std::isfinite(nu_i_hz) || !std::isfinite(nu_s_hz) ||
      !std::isfinite(j_hz)) {
    throw std::invalid_argument("offsets and J must be finite");
  }
}

bool targets_spin(Target target, Spin spin) {
  if (target == Target::Both) return true;
  return (target == Target::I) == (spin == Spin::I);
}

C2 rotation2(double flip_deg, double phase_deg) {
  const double c = cos_deg(flip_deg / 2.0);
  const double s = sin_deg(flip_deg / 2.0);
  const double px = cos_deg(phase_deg);
  const double py = sin_deg(phase_deg);
  const Complex i(0.0, 1.0);
  C2 r;
  r(0, 0) = c;
  r(0, 1) = -i * s * (px - i * py);
  r(1, 0) = -i * s * (px + i * py);
  r(1, 1) = c;
  return r;
}

C2 zrot2(double theta_deg) {
  C2 r = C2::Zero();
  const double h = theta_deg / 2.0;
  r(0, 0) = Complex(cos_deg(h), -sin_deg(h));
  r(1, 1) = Complex(cos_deg(h), sin_deg(h));
  return r;
}

namespace {

C4 per_spin(Target target, const C2& action) {
  const C2& on_i = targets_spin(target, Spin::I) ? action : id2();
  const C2& on_s = targets_spin(target, Spin::S) ? action : id2();
  return kron(on_i, on_s);
}

}  // namespace

C4 hard_pulse(double flip_deg, double phase_deg, Target target) {
  return per_spin(target, rotation2(flip_deg, phase_deg));
}

C4 z_rotation(double theta_deg, Target target) {
  return per_spin(target, zrot2(theta_deg));
}

std::array<double, 4> hamiltonian_diagonal(const SpinSystem& sys) {
  const double wi = 2.0 * kPi * sys.nu_i_hz;
  const double ws = 2.0 * kPi * sys.nu_s_hz;
  const double wj = kPi * sys.j_hz;
  // Signs follow I_z = diag(1,1,-1,-1)/2, S_z = diag(1,-1,1,-1)/2,
  // 2 I_z S_z = diag(1,-1,-1,1)/2.
  return {
      0.5 * (wi + ws + wj),
      0.5 * (wi - ws - wj),
      0.5 * (-wi + ws - wj),
      0.5 * (-wi - ws + wj),
  };
}

C4 free_evolution(const SpinSystem& sys, double t_s) {
  if (t_s < 0.0) {
    throw std::invalid_argument("free evolution time must be nonnegative");
  }
  sys.validate();
  const auto h = hamiltonian_diagonal(sys);
  C4 u = C4::Zero();
  for (int k = 0; k < 4; ++k) {
    u(k, k) = std::exp(Complex(0.0, -t_s * h[k]));
  }
  return u;
}

C4 couple(double fraction, const SpinSystem& sys) {
  if (sys.j_hz == 0.0) {
    throw std::domain_error("couple requires a nonzero J coupling");
  }
  if (fraction < 0.0) {
    throw std::invalid_argument("coupling fraction must be nonnegative");
  }
  SpinSystem refocused = sys;
  refocused.nu_i_hz = 0.0;
  refocused.nu_s_hz = 0.0;
  return free_evolution(refocused, fraction / std::abs(sys.j_hz));
}

C4 hadamard_exact(Target target) {
  const C2 h2 = rotation2(45.0, 270.0) * rotation2(180.0, 0.0) *
                rotation2(45.0, 90.0);
  return per_spin(target, h2);
}

C4 pseudo_hadamard(Target target, bool inverse) {
  return hard_pulse(90.0, inverse ? 270.0 : 90.0, target);
}

DensityMatrix dephase(const DensityMatrix& rho, double t_s,
                      const SpinSystem& sys) {
  if (t_s < 0.0) {
    throw std::invalid_argument("dephasing time must be nonnegative");
  }
  sys.validate();
  if (std::isinf(sys.t2star_s)) return rho;
  const double damp = std::exp(-t_s / sys.t2star_s);
  C4 m = rho.matrix();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (r != c) m(r, c) *= damp;
    }
  }
  return DensityMatrix(m, rho.label());
}

}  // namespace nmrqc
