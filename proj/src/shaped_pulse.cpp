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

#include "nmrqc/shaped_pulse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>

namespace nmrqc {

void ShapedPulseSpec::validate() const {
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("shaped pulse duration must be positive");
  }
  if (shape == PulseShape::Gaussian &&
      !(truncation > 0.0 && truncation < 1.0)) {
    throw std::invalid_argument("truncation must lie in (0, 1)");
  }
  if (slices < 32) {
    throw std::invalid_argument("shaped pulses need at least 32 slices");
  }
  if (!std::isfinite(flip_deg) || !std::isfinite(phase_deg)) {
    throw std::invalid_argument("flip and phase must be finite");
  }
}

std::vector<EnvelopeSample> envelope(const ShapedPulseSpec& spec) {
  spec.validate();
  const int n = spec.slices;
  const double tau = spec.duration_s;
  const double dt = tau / n;
  const double ramp = spec.ramp_offset_hz.value_or(0.0);
  const double phase0 = spec.phase_deg * kDegToRad;

  std::vector<double> shape(n, 1.0);
  if (spec.shape == PulseShape::Gaussian) {
    // Truncation fixes the edge-to-peak ratio: exp(-(tau/2)^2 / 2 sigma^2)
    // = truncation.
    const double sigma = (tau / 2.0) / std::sqrt(2.0 * std::log(1.0 / spec.truncation));
    for (int k = 0; k < n; ++k) {
      const double t = (k + 0.5) * dt;
      const double x = (t - tau / 2.0) / sigma;
      shape[k] = std::exp(-0.5 * x * x);
    }
  }
  double area = 0.0;
  for (double s : shape) area += s * dt;
  const double peak = spec.flip_deg * kDegToRad / area;

  std::vector<EnvelopeSample> samples(n);
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * dt;
    samples[k].amplitude_rad_s = peak * shape[k];
    samples[k].phase_rad = phase0 + 2.0 * kPi * ramp * t;
  }
  return samples;
}

ShapedPulseSpec resolve_ramp(const ShapedPulseSpec& spec,
                             const SpinSystem& sys) {
  ShapedPulseSpec resolved = spec;
  if (!resolved.ramp_offset_hz) {
    resolved.ramp_offset_hz = sys.offset_hz(spec.target);
  }
  return resolved;
}

namespace {

// Chunk size for the parallel ordered product. Fixed so the grouping, and
// therefore the floating-point result, does not depend on thread count.
constexpr int kSliceChunk = 64;

C4 slice_propagator(const C4& h_free, const EnvelopeSample& s, double dt) {
  const C4 h = h_free +
               s.amplitude_rad_s * (std::cos(s.phase_rad) *
                                        (op_x(Spin::I) + op_x(Spin::S)) +
                                    std::sin(s.phase_rad) *
                                        (op_y(Spin::I) + op_y(Spin::S)));
  return expm_i(h, dt);
}

C4 free_hamiltonian(const SpinSystem& sys) {
  const auto diag = hamiltonian_diagonal(sys);
  C4 h = C4::Zero();
  for (int k = 0; k < 4; ++k) h(k, k) = diag[k];
  return h;
}

}  // namespace

C4 shaped_propagator(const SpinSystem& sys, const ShapedPulseSpec& spec) {
  sys.validate();
  const ShapedPulseSpec resolved = resolve_ramp(spec, sys);
  const auto env = envelope(resolved);
  const double dt = resolved.duration_s / resolved.slices;
  const C4 h_free = free_hamiltonian(sys);

  const int n = static_cast<int>(env.size());
  const int nchunks = (n + kSliceChunk - 1) / kSliceChunk;
  std::vector<C4> partial(nchunks);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nchunks; ++c) {
    C4 p = C4::Identity();
    const int hi = std::min(n, (c + 1) * kSliceChunk);
    for (int k = c * kSliceChunk; k < hi; ++k) {
      p = slice_propagator(h_free, env[k], dt) * p;
    }
    partial[c] = p;
  }
  C4 u = C4::Identity();
  for (int c = 0; c < nchunks; ++c) u = partial[c] * u;
  return u;
}

C4 shaped_propagator_reference(const SpinSystem& sys,
                               const ShapedPulseSpec& spec) {
  sys.validate();
  const ShapedPulseSpec resolved = resolve_ramp(spec, sys);
  const auto env = envelope(resolved);
  const double dt = resolved.duration_s / resolved.slices;
  const C4 h_free = free_hamiltonian(sys);
  C4 u = C4::Identity();
  for (const auto& s : env) {
    u = slice_propagator(h_free, s, dt) * u;
  }
  return u;
}

double slice_convergence(const SpinSystem& sys, const ShapedPulseSpec& spec) {
  ShapedPulseSpec doubled = spec;
  doubled.slices = 2 * spec.slices;
  return max_abs(C4(shaped_propagator(sys, spec) -
                    shaped_propagator(sys, doubled)));
}

double propagator_fidelity(const C4& achieved, const C4& target) {
  if (!is_unitary(achieved) || !is_unitary(target)) {
    throw std::invalid_argument("propagator_fidelity requires unitaries");
  }
  return std::abs(C4(target.adjoint() * achieved).trace()) / 4.0;
}

double spectator_z_residual_deg(const C4& u, Spin spectator) {
  // Relative phase between the spectator's |0> and |1> blocks. When the
  // propagator factorizes as A (x) diag(b0, b1), the blocks are b0 A and
  // b1 A, so Tr(B1 B0^dag) = b1 conj(b0) ||A||_F^2 and its argument is the
  // net spectator z angle. The coherent sum over all target matrix
  // elements stays well conditioned even when a 90-degree target rotation
  // spreads its weight evenly, where any single-block estimate flips
  // between branches that imperfect factorization leaves slightly apart.
  Complex z = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const int row0 = spectator == Spin::S ? 2 * r : r;
      const int col0 = spectator == Spin::S ? 2 * c : c;
      const int row1 = spectator == Spin::S ? 2 * r + 1 : 2 + r;
      const int col1 = spectator == Spin::S ? 2 * c + 1 : 2 + c;
      z += u(row1, col1) * std::conj(u(row0, col0));
    }
  }
  if (std::abs(z) < 1e-9) {
    // The spectator was flipped outright; report the worst case.
    return 180.0;
  }
  return wrap_deg(std::arg(z) * kRadToDeg);
}

PulseReport pulse_fidelity(const C4& achieved, const C4& ideal,
                           Spin spectator) {
  return {achieved, propagator_fidelity(achieved, ideal),
          spectator_z_residual_deg(achieved, spectator)};
}

ShapedPulseSpec calibrate_spectator(const SpinSystem& sys,
                                    ShapedPulseSpec spec) {
  sys.validate();
  spec.validate();
  const Spin spectator = other_spin(spec.target);
  if (std::abs(sys.nu_i_hz - sys.nu_s_hz) < 1e-9) {
    throw CalibrationError(
        "spectator calibration is degenerate: the spins have the same "
        "offset, so no duration can separate them");
  }

  const ShapedPulseSpec resolved = resolve_ramp(spec, sys);
  auto residual_at = [&](double tau) {
    ShapedPulseSpec probe = resolved;
    probe.duration_s = tau;
    return spectator_z_residual_deg(shaped_propagator(sys, probe), spectator);
  };

  const double tau0 = spec.duration_s;
  const double lo = 0.5 * tau0;
  const double hi = 1.5 * tau0;
  // The spectator phase winds at roughly its transmitter offset; sample a
  // few dozen points per winding period so no zero crossing is missed.
  const double nu_spect = std::abs(sys.offset_hz(spectator));
  double step = (hi - lo) / 64.0;
  if (nu_spect > 0.0) step = std::min(step, 1.0 / nu_spect / 32.0);

  struct Candidate {
    double tau;
    double residual;
  };
  std::vector<Candidate> candidates;
  double prev_tau = lo;
  double prev_phi = residual_at(lo);
  for (double tau = lo + step; tau <= hi + 0.5 * step; tau += step) {
    const double t = std::min(tau, hi);
    const double phi = residual_at(t);
    // A genuine zero crossing changes sign without wrapping through 180.
    if (prev_phi == 0.0) {
      candidates.push_back({prev_tau, prev_phi});
    } else if (phi * prev_phi < 0.0 && std::abs(phi - prev_phi) < 180.0) {
      double a = prev_tau;
      double b = t;
      double fa = prev_phi;
      double fmid = phi;
      for (int it = 0; it < 60 && std::abs(fmid) > 1e-7; ++it) {
        const double mid = 0.5 * (a + b);
        fmid = residual_at(mid);
        if (fmid == 0.0) {
          a = b = mid;
        } else if (fmid * fa > 0.0) {
          a = mid;
          fa = fmid;
        } else {
          b = mid;
        }
      }
      candidates.push_back({0.5 * (a + b), fmid});
    }
    prev_tau = t;
    prev_phi = phi;
  }
  if (candidates.empty()) {
    throw CalibrationError(
        "no spectator zero crossing within +-50% of the requested duration");
  }
  const auto best = std::min_element(
      candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.tau - tau0) < std::abs(b.tau - tau0);
      });
  ShapedPulseSpec out = spec;
  out.duration_s = best->tau;
  return out;
}

namespace {

// Angle keys quantized to a microdegree; selective pulses differing by less
// than that are physically identical.
long long angle_key(double deg) {
  return std::llround(deg * 1e6);
}

}  // namespace

struct ShapedLibrary::Impl {
  mutable std::mutex mutex;
  std::map<std::pair<int, long long>, ShapedPulseSpec> calibrations;
  std::map<std::tuple<int, long long, long long>, C4> propagators;
  std::map<std::tuple<int, long long, long long>, UsedPulse> used;
};

ShapedLibrary::ShapedLibrary(const SpinSystem& sys, ShapedDefaults defaults)
    : sys_(sys), defaults_(defaults), impl_(std::make_shared<Impl>()) {
  sys_.validate();
}

ShapedPulseSpec ShapedLibrary::calibrated(Spin target, double flip_deg) const {
  const auto key = std::make_pair(static_cast<int>(target),
                                  angle_key(flip_deg));
  {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    auto it = impl_->calibrations.find(key);
    if (it != impl_->calibrations.end()) return it->second;
  }
  ShapedPulseSpec spec;
  spec.target = target;
  spec.flip_deg = flip_deg;
  spec.shape = defaults_.shape;
  spec.duration_s = defaults_.duration_s;
  spec.truncation = defaults_.truncation;
  spec.slices = defaults_.slices;
  const ShapedPulseSpec cal = calibrate_spectator(sys_, spec);
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return impl_->calibrations.emplace(key, cal).first->second;
}

C4 ShapedLibrary::selective(Spin target, double flip_deg,
                            double phase_deg) const {
  const auto key = std::make_tuple(static_cast<int>(target),
                                   angle_key(flip_deg), angle_key(phase_deg));
  {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    auto it = impl_->propagators.find(key);
    if (it != impl_->propagators.end()) return it->second;
  }
  ShapedPulseSpec spec = calibrated(target, flip_deg);
  spec.phase_deg = phase_deg;
  const C4 u = shaped_propagator(sys_, spec);
  const C4 ideal = hard_pulse(flip_deg, phase_deg,
                              target == Spin::I ? Target::I : Target::S);
  const PulseReport rep = pulse_fidelity(u, ideal, other_spin(target));
  std::lock_guard<std::mutex> lock(impl_->mutex);
  impl_->used.emplace(key,
                      UsedPulse{target, flip_deg, phase_deg, spec.duration_s,
                                rep.fidelity, rep.spectator_z_residual_deg});
  return impl_->propagators.emplace(key, u).first->second;
}

PulseReport ShapedLibrary::report(Spin target, double flip_deg,
                                  double phase_deg) const {
  const C4 u = selective(target, flip_deg, phase_deg);
  const C4 ideal = hard_pulse(flip_deg, phase_deg,
                              target == Spin::I ? Target::I : Target::S);
  return pulse_fidelity(u, ideal, other_spin(target));
}

std::vector<UsedPulse> ShapedLibrary::used() const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  std::vector<UsedPulse> out;
  out.reserve(impl_->used.size());
  for (const auto& [key, pulse] : impl_->used) out.push_back(pulse);
  return out;
}

}  // namespace nmrqc
