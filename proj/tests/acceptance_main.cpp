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

// Acceptance gate: nine end-to-end criteria, each printed as a single
// [PASS]/[FAIL] line. The process exits nonzero if any criterion fails.
//
// Expected values are constructed independently here (truth tables from the
// xor rule, echo targets from the analytic coupling propagator, spectra
// checked against bin arithmetic) rather than read back from the modules
// under test.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nmrqc/cmatrix.hpp"
#include "nmrqc/experiments.hpp"
#include "nmrqc/pulse_engine.hpp"
#include "nmrqc/sequence.hpp"
#include "nmrqc/shaped_pulse.hpp"
#include "nmrqc/spin_algebra.hpp"

namespace nmrqc {
namespace {

const SpinSystem kPreset{381.5, -381.5, 7.2, 0.3};
constexpr int kPoints = 4096;
constexpr double kDwell = 1.0 / 1526.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) {
        pass = false;
      } else {
        detail << "; ";
      }
      detail << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Truth tables written out directly from |x>|y> -> |x>|y xor f(x)>.
C4 truth_matrix(int f0, int f1) {
  C4 u = C4::Zero();
  const int fx[2] = {f0, f1};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      u(2 * x + (y ^ fx[x]), 2 * x + y) = 1.0;
    }
  }
  return u;
}

constexpr std::array<std::pair<int, int>, 4> kTables = {
    {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

// --------------------------------------------------------------------------
// 1. Truth-table conformance for all four compiled gates, under a second.

Outcome criterion_truth_tables() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  for (int k = 0; k < 4; ++k) {
    const FunctionId f = kAllFunctions[k];
    const C4 u = compile(gate_sequence(f, CompileMode::Ideal), kPreset);
    const C4 truth = truth_matrix(kTables[k].first, kTables[k].second);
    const PhaseDistance pd = phase_distance(u, truth);
    o.require(pd.distance < 1e-9,
              std::string(function_name(f)) + " distance " +
                  std::to_string(pd.distance));
    // Column action on every basis state with the one extracted phase.
    const Complex rot = std::exp(Complex(0.0, pd.phase));
    for (int col = 0; col < 4; ++col) {
      const V4 want = rot * truth.col(col);
      o.require((u.col(col) - want).norm() < 1e-9,
                std::string(function_name(f)) + " column " +
                    std::to_string(col));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  return o;
}

// --------------------------------------------------------------------------
// 2. Pulse-sequence equivalences, including echo refocusing with offsets.

Outcome criterion_sequence_equivalence() {
  Outcome o;
  const C4 cnot_i1 = truth_matrix(0, 1);  // flip S when I is one
  const C4 cnot_i0 = truth_matrix(1, 0);  // flip S when I is zero

  const PhaseDistance d01 = check_equivalence(builtin("u01"), cnot_i1, kPreset);
  o.require(d01.distance < 1e-9, "u01 vs truth matrix");
  const PhaseDistance d10 = check_equivalence(builtin("u10"), cnot_i0, kPreset);
  o.require(d10.distance < 1e-9, "u10 vs truth matrix");

  // The merged echo forms must agree with the abstract sequences at the
  // full +-381.5 Hz offsets, where only the echo can refocus the Zeeman
  // precession.
  const C4 u01 = compile(builtin("u01"), kPreset);
  const C4 u10 = compile(builtin("u10"), kPreset);
  o.require(check_equivalence(builtin("u01_merged"), u01, kPreset).distance <
                1e-9,
            "u01_merged vs u01");
  o.require(check_equivalence(builtin("u10_merged"), u10, kPreset).distance <
                1e-9,
            "u10_merged vs u10");
  return o;
}

// --------------------------------------------------------------------------
// 3. Phase kickback for all eight (function, input) pairs.

Outcome criterion_phase_kickback() {
  Outcome o;
  const double inv = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 4; ++k) {
    const C4 truth = truth_matrix(kTables[k].first, kTables[k].second);
    const int fx[2] = {kTables[k].first, kTables[k].second};
    for (int x = 0; x < 2; ++x) {
      V4 in = V4::Zero();
      in(2 * x) = inv;
      in(2 * x + 1) = -inv;
      const V4 out = truth * in;
      const double sign = fx[x] == 1 ? -1.0 : 1.0;
      o.require((out - sign * in).cwiseAbs().maxCoeff() < 1e-12,
                "f" + std::to_string(kTables[k].first) +
                    std::to_string(kTables[k].second) + " x=" +
                    std::to_string(x));
      const KickbackResult r = phase_kickback_check(kAllFunctions[k], x);
      o.require(r.state_preserved && r.phase_sign == (fx[x] == 1 ? -1 : 1),
                "kickback op disagrees");
    }
  }
  return o;
}

// --------------------------------------------------------------------------
// 4. Deutsch's algorithm with exact Hadamards lands on |f(0) xor f(1)>|1>.

Outcome criterion_exact_hadamard_deutsch() {
  Outcome o;
  for (int k = 0; k < 4; ++k) {
    const PureState out = deutsch_exact_hadamard(kAllFunctions[k]);
    const int answer = kTables[k].first ^ kTables[k].second;
    const int index = 2 * answer + 1;
    for (int i = 0; i < 4; ++i) {
      const double want = i == index ? 1.0 : 0.0;
      o.require(std::abs(std::abs(out.amplitudes()(i)) - want) < 1e-12,
                "f" + std::to_string(kTables[k].first) +
                    std::to_string(kTables[k].second) + " amplitude " +
                    std::to_string(i));
    }
  }
  return o;
}

// --------------------------------------------------------------------------
// 5. NMR Deutsch expectations and verdicts in ideal mode.

Outcome criterion_nmr_deutsch() {
  Outcome o;
  const double want_ix[4] = {0.5, -0.5, -0.5, 0.5};
  const Verdict want_verdict[4] = {Verdict::Constant, Verdict::Balanced,
                                   Verdict::Balanced, Verdict::Constant};
  for (int k = 0; k < 4; ++k) {
    const ExperimentResult r = run_deutsch(kAllFunctions[k], kPreset).result;
    const std::string tag(function_name(kAllFunctions[k]));
    o.require(std::abs(r.ix - want_ix[k]) < 1e-10, tag + " <Ix>");
    o.require(std::abs(r.sx + 0.5) < 1e-10, tag + " <Sx>");
    o.require(r.verdict == want_verdict[k], tag + " verdict");
  }
  return o;
}

// --------------------------------------------------------------------------
// 6. Classical oracle runs reproduce the truth table in ideal mode.

Outcome criterion_classical_runs() {
  Outcome o;
  for (int k = 0; k < 4; ++k) {
    for (int input = 0; input < 2; ++input) {
      const ExperimentResult r =
          run_classical(kAllFunctions[k], input, kPreset).result;
      const int fx = input == 0 ? kTables[k].first : kTables[k].second;
      const std::string tag = std::string(function_name(kAllFunctions[k])) +
                              " input " + std::to_string(input);
      o.require(r.bit_i == input && r.bit_s == fx, tag + " bits");
      o.require(std::abs(r.ix - (input == 0 ? 0.5 : -0.5)) < 1e-10,
                tag + " <Ix>");
      o.require(std::abs(r.sx - (fx == 0 ? 0.5 : -0.5)) < 1e-10,
                tag + " <Sx>");
    }
  }
  return o;
}

// --------------------------------------------------------------------------
// Shared helpers for the spectral criteria.

struct CellTruth {
  int bit_i;
  int bit_s;
};

CellTruth cell_truth(ExperimentKind kind, int k) {
  const int f0 = kTables[k].first;
  const int f1 = kTables[k].second;
  switch (kind) {
    case ExperimentKind::Classical0:
      return {0, f0};
    case ExperimentKind::Classical1:
      return {1, f1};
    default:
      return {f0 == f1 ? 0 : 1, 1};
  }
}

ExperimentRun run_cell(ExperimentKind kind, FunctionId f, CompileMode mode,
                       const ShapedLibrary* lib) {
  switch (kind) {
    case ExperimentKind::Classical0:
      return run_classical(f, 0, kPreset, mode, lib);
    case ExperimentKind::Classical1:
      return run_classical(f, 1, kPreset, mode, lib);
    default:
      return run_deutsch(f, kPreset, mode, lib);
  }
}

// Distance between the two tallest |Re| peaks inside a multiplet window.
double doublet_splitting(const Spectrum& spec, double nu) {
  const double window = 2.0 * kPreset.j_hz;
  int first = -1;
  for (size_t b = 0; b < spec.bins.size(); ++b) {
    if (std::abs(spec.bins[b].freq_hz - nu) > window) continue;
    if (first < 0 || std::abs(spec.bins[b].amplitude.real()) >
                         std::abs(spec.bins[first].amplitude.real())) {
      first = static_cast<int>(b);
    }
  }
  int second = -1;
  for (size_t b = 0; b < spec.bins.size(); ++b) {
    if (std::abs(spec.bins[b].freq_hz - nu) > window) continue;
    if (std::abs(spec.bins[b].freq_hz - spec.bins[first].freq_hz) <
        0.5 * kPreset.j_hz) {
      continue;
    }
    if (second < 0 || std::abs(spec.bins[b].amplitude.real()) >
                          std::abs(spec.bins[second].amplitude.real())) {
      second = static_cast<int>(b);
    }
  }
  return std::abs(spec.bins[first].freq_hz - spec.bins[second].freq_hz);
}

// --------------------------------------------------------------------------
// 7. Spectral pipeline agrees with expectation readout; J splitting correct.

Outcome criterion_spectral_pipeline() {
  Outcome o;
  const double bin_width = 1.0 / (kPoints * kDwell);
  // The classical f00 run on input 0 is the phasing standard for the
  // whole ideal batch.
  const ExperimentRun ref = run_cell(ExperimentKind::Classical0,
                                     FunctionId::f00, CompileMode::Ideal,
                                     nullptr);
  const Fid ref_fid =
      synthesize_fid(ref.state.matrix(), kPreset, kPoints, kDwell);
  const double phase0 = calibrate_phase(spectrum(ref_fid), kPreset);
  const Spectrum ref_spec = spectrum(ref_fid, phase0);
  const MultipletIntegrals ref_integrals =
      multiplet_integrals(ref_spec, kPreset);

  const double split_i = doublet_splitting(ref_spec, kPreset.nu_i_hz);
  const double split_s = doublet_splitting(ref_spec, kPreset.nu_s_hz);
  o.require(std::abs(split_i - kPreset.j_hz) <= bin_width + 1e-9,
            "I splitting " + std::to_string(split_i));
  o.require(std::abs(split_s - kPreset.j_hz) <= bin_width + 1e-9,
            "S splitting " + std::to_string(split_s));

  for (ExperimentKind kind : kAllKinds) {
    for (int k = 0; k < 4; ++k) {
      const ExperimentRun run =
          run_cell(kind, kAllFunctions[k], CompileMode::Ideal, nullptr);
      const Fid fid =
          synthesize_fid(run.state.matrix(), kPreset, kPoints, kDwell);
      const SpectralClassification cls =
          classify(spectrum(fid, phase0), kPreset, ref_integrals);
      const std::string tag = std::string(kind_name(kind)) + "/" +
                              std::string(function_name(kAllFunctions[k]));
      o.require(cls.bit_i == run.result.bit_i &&
                    cls.bit_s == run.result.bit_s,
                tag + " spectral bits diverge from expectation bits");
      o.require(!cls.degraded(), tag + " degraded");
    }
  }
  return o;
}

// --------------------------------------------------------------------------
// 8. Shaped mode: classification survives calibrated Gaussian pulses.

Outcome criterion_shaped_mode() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  ShapedDefaults defaults;  // Gaussian, 6 ms, 1%, 512 slices
  const ShapedLibrary lib(kPreset, defaults);

  const ExperimentRun ref = run_cell(ExperimentKind::Classical0,
                                     FunctionId::f00, CompileMode::Shaped,
                                     &lib);
  const Fid ref_fid =
      synthesize_fid(ref.state.matrix(), kPreset, kPoints, kDwell);
  const double phase0 = calibrate_phase(spectrum(ref_fid), kPreset);
  const MultipletIntegrals ref_integrals =
      multiplet_integrals(spectrum(ref_fid, phase0), kPreset);

  for (ExperimentKind kind : kAllKinds) {
    for (int k = 0; k < 4; ++k) {
      const ExperimentRun run =
          run_cell(kind, kAllFunctions[k], CompileMode::Shaped, &lib);
      const Fid fid =
          synthesize_fid(run.state.matrix(), kPreset, kPoints, kDwell);
      const SpectralClassification cls =
          classify(spectrum(fid, phase0), kPreset, ref_integrals);
      const CellTruth truth = cell_truth(kind, k);
      const std::string tag = std::string(kind_name(kind)) + "/" +
                              std::string(function_name(kAllFunctions[k]));
      o.require(run.result.bit_i == truth.bit_i &&
                    run.result.bit_s == truth.bit_s,
                tag + " expectation bits");
      o.require(cls.bit_i == truth.bit_i && cls.bit_s == truth.bit_s,
                tag + " spectral bits");
    }
  }

  const std::vector<UsedPulse> pulses = lib.used();
  o.require(!pulses.empty(), "no selective pulses were exercised");
  for (const UsedPulse& p : pulses) {
    std::ostringstream tag;
    tag << spin_name(p.target) << " " << p.flip_deg << " deg phase "
        << p.phase_deg;
    o.require(p.fidelity >= 0.99,
              tag.str() + " fidelity " + std::to_string(p.fidelity));
    o.require(std::abs(p.spectator_z_residual_deg) < 1.0,
              tag.str() + " residual " +
                  std::to_string(p.spectator_z_residual_deg) + " deg");
  }

  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "batch took " + std::to_string(elapsed) + " s");
  return o;
}

// --------------------------------------------------------------------------
// 9. Numerical hygiene: randomized property sweep, >= 1000 cases.

Outcome criterion_hygiene(int* cases_out) {
  Outcome o;
  std::mt19937_64 rng(0xacce9709);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto random_complex = [&uniform]() {
    return Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
  };
  auto random_hermitian = [&random_complex]() {
    C4 m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m(r, c) = random_complex();
    }
    return C4(0.5 * (m + m.adjoint().eval()));
  };
  int cases = 0;

  // Unitarity of generated propagators; trace/Hermiticity/positivity
  // preservation under evolution.
  for (int t = 0; t < 250; ++t, ++cases) {
    const C4 u = expm_i(random_hermitian(), uniform(-2.0, 2.0));
    o.require(is_unitary(u, 1e-10), "expm unitarity");
    C4 rho = C4::Zero();
    double total = 0.0;
    for (int j = 0; j < 3; ++j) {
      V4 v;
      for (int i = 0; i < 4; ++i) v(i) = random_complex();
      v /= v.norm();
      const double w = uniform(0.1, 1.0);
      rho += w * (v * v.adjoint()).eval();
      total += w;
    }
    rho /= total;
    const DensityMatrix out = evolve(DensityMatrix(rho), u);
    o.require(std::abs(out.matrix().trace() - 1.0) < 1e-10,
              "trace preservation");
    o.require(is_hermitian(out.matrix(), 1e-10), "Hermiticity preservation");
    Eigen::SelfAdjointEigenSolver<C4> eig(out.matrix(),
                                          Eigen::EigenvaluesOnly);
    o.require(eig.eigenvalues().minCoeff() > -1e-10, "positivity");
  }

  // Product-operator round trips in both directions.
  for (int t = 0; t < 250; ++t, ++cases) {
    if (t % 2 == 0) {
      const C4 m = random_hermitian();
      o.require(max_abs(C4(po_compose(po_decompose(m)) - m)) < 1e-12,
                "matrix round trip");
    } else {
      PoCoeffs c{};
      for (double& x : c.c) x = uniform(-2.0, 2.0);
      const PoCoeffs back = po_decompose(po_compose(c));
      double err = 0.0;
      for (int k = 0; k < kPoTermCount; ++k) {
        err = std::max(err, std::abs(back.c[k] - c.c[k]));
      }
      o.require(err < 1e-12, "coefficient round trip");
    }
  }

  // Exact hard-pulse identities.
  for (int t = 0; t < 250; ++t, ++cases) {
    const double flip = uniform(-360.0, 360.0);
    const double phase = uniform(-360.0, 360.0);
    const Target target =
        std::array<Target, 3>{Target::I, Target::S, Target::Both}[t % 3];
    const C4 u = hard_pulse(flip, phase, target);
    o.require(is_unitary(u, 1e-10), "pulse unitarity");
    o.require(max_abs(C4(u * hard_pulse(-flip, phase, target) -
                         C4::Identity())) < 1e-13,
              "pulse inverse");
    o.require(max_abs(C4(hard_pulse(flip, phase + 180.0, target) -
                         hard_pulse(-flip, phase, target))) < 1e-13,
              "pulse phase flip");
  }

  // Spin-echo offset independence.
  for (int t = 0; t < 200; ++t, ++cases) {
    const SpinSystem sys{uniform(-1500.0, 1500.0), uniform(-1500.0, 1500.0),
                         uniform(0.5, 20.0)};
    const double tau = uniform(1e-4, 0.05);
    const C4 flip = hard_pulse(180.0, 0.0, Target::Both);
    const C4 echo =
        C4(flip * free_evolution(sys, tau) * flip * free_evolution(sys, tau));
    const PhaseDistance pd =
        phase_distance(echo, couple(2.0 * tau * sys.j_hz, sys));
    o.require(pd.distance < 1e-10, "echo refocusing");
  }

  // Slice-doubling convergence: second order for ramped pulses (doubling
  // shrinks the step about 4x), and below 1e-6 by 256 slices when the
  // target is irradiated on resonance (no phase ramp).
  const SpinSystem onres{0.0, 763.0, 7.2, 0.3};
  for (int t = 0; t < 50; ++t, ++cases) {
    if (t % 5 == 0) {
      // Near the default envelope (90 degrees over about 6 ms) the
      // unramped product is already below 1e-6 at 256 slices.
      ShapedPulseSpec spec;
      spec.target = Spin::I;
      spec.phase_deg = uniform(0.0, 360.0);
      spec.duration_s = uniform(5e-3, 8e-3);
      spec.slices = 256;
      o.require(slice_convergence(onres, spec) < 1e-6,
                "on-resonance convergence at 256 slices");
      o.require(is_unitary(shaped_propagator(onres, spec), 1e-10),
                "shaped unitarity");
    } else {
      ShapedPulseSpec spec;
      spec.target = t % 2 == 0 ? Spin::I : Spin::S;
      spec.flip_deg = uniform(10.0, 180.0);
      spec.phase_deg = uniform(0.0, 360.0);
      spec.duration_s = uniform(2e-3, 8e-3);
      spec.shape = t % 3 == 0 ? PulseShape::Rectangular : PulseShape::Gaussian;
      spec.slices = 128;
      const double c128 = slice_convergence(kPreset, spec);
      spec.slices = 256;
      const double c256 = slice_convergence(kPreset, spec);
      o.require(c256 < 1e-3 && c128 / c256 > 2.8 && c128 / c256 < 5.2,
                "second-order slice doubling");
      o.require(is_unitary(shaped_propagator(kPreset, spec), 1e-10),
                "shaped unitarity");
    }
  }

  *cases_out = cases;
  o.require(cases >= 1000, "only " + std::to_string(cases) + " cases");
  return o;
}

}  // namespace
}  // namespace nmrqc

int main() {
  using namespace nmrqc;
  struct Entry {
    const char* name;
    Outcome outcome;
  };
  int hygiene_cases = 0;
  std::vector<Entry> entries;
  entries.push_back({"truth-table conformance of all four compiled gates",
                     criterion_truth_tables()});
  entries.push_back({"pulse-sequence equivalences incl. echo refocusing",
                     criterion_sequence_equivalence()});
  entries.push_back(
      {"phase kickback for all eight (f, x) pairs", criterion_phase_kickback()});
  entries.push_back({"exact-Hadamard Deutsch output states",
                     criterion_exact_hadamard_deutsch()});
  entries.push_back(
      {"NMR Deutsch expectations and verdicts", criterion_nmr_deutsch()});
  entries.push_back(
      {"classical oracle runs over all inputs", criterion_classical_runs()});
  entries.push_back({"spectral classification and doublet splitting",
                     criterion_spectral_pipeline()});
  entries.push_back({"shaped-mode batch with calibrated pulses",
                     criterion_shaped_mode()});
  entries.push_back({"numerical hygiene property sweep",
                     criterion_hygiene(&hygiene_cases)});

  int failures = 0;
  for (size_t k = 0; k < entries.size(); ++k) {
    const Outcome& o = entries[k].outcome;
    std::string line = o.pass ? "[PASS]" : "[FAIL]";
    line += " criterion " + std::to_string(k + 1) + ": " + entries[k].name;
    if (k + 1 == 9 && o.pass) {
      line += " (" + std::to_string(hygiene_cases) + " randomized cases)";
    }
    if (!o.pass) {
      line += " -- " + o.detail.str();
      ++failures;
    }
    std::puts(line.c_str());
  }
  return failures == 0 ? 0 : 1;
}
