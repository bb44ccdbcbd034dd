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

#ifndef NMRQC_EXPERIMENTS_HPP
#define NMRQC_EXPERIMENTS_HPP

#include <iosfwd>

#include "nmrqc/sequence.hpp"

namespace nmrqc {

/// The four one-bit functions f: {0,1} -> {0,1}, named by their value
/// table f(0)f(1): f00 and f11 are constant, f01 is identity, f10 is NOT.
enum class FunctionId { f00, f01, f10, f11 };

inline constexpr std::array<FunctionId, 4> kAllFunctions = {
    FunctionId::f00, FunctionId::f01, FunctionId::f10, FunctionId::f11};

int f_value(FunctionId f, int x);
bool is_constant(FunctionId f);
std::string_view function_name(FunctionId f);

/// The permutation unitary |x, y> -> |x, y XOR f(x)>.
C4 uf_truth(FunctionId f);

/// The gate realization used for a function: abstract z-rotation forms in
/// ideal mode, spin-echo merged forms (plus the composite NOT) in shaped
/// mode.
Sequence gate_sequence(FunctionId f, CompileMode mode);

enum class ExperimentKind { Classical0, Classical1, Deutsch };

inline constexpr std::array<ExperimentKind, 3> kAllKinds = {
    ExperimentKind::Classical0, ExperimentKind::Classical1,
    ExperimentKind::Deutsch};

std::string_view kind_name(ExperimentKind kind);

enum class Verdict { Constant, Balanced, NotApplicable };

std::string_view verdict_name(Verdict verdict);

/// Outcome of one experiment cell. Bits decode as 0 when the corresponding
/// x expectation is positive (absorption), 1 when negative (inverted);
/// degraded flags any |expectation| below a quarter of the full 1/2.
struct ExperimentResult {
  ExperimentKind kind;
  FunctionId function;
  CompileMode mode;
  double ix;
  double sx;
  int bit_i;
  int bit_s;
  bool degraded;
  Verdict verdict;
};

struct ExperimentRun {
  ExperimentResult result;
  /// State the detector sees: post-readout for classical runs, the
  /// algorithm's final state for Deutsch runs.
  DensityMatrix state;
};

/// Fraction of the full +-1/2 signal below which a readout counts as
/// degraded, and of a reference integral below which a spectral window
/// counts as degraded.
inline constexpr double kDegradedFraction = 0.25;

/// Classical use of the oracle: prepare |x, 0>, apply U_f, read out with a
/// hard 90_y on both spins; bit_s holds f(x), bit_i echoes x.
ExperimentRun run_classical(FunctionId f, int input_bit, const SpinSystem& sys,
                            CompileMode mode = CompileMode::Ideal,
                            const ShapedLibrary* shaped = nullptr);

/// Deutsch's algorithm: prepare the |01> deviation state, pseudo-Hadamard
/// both spins, apply U_f; the final state is directly observable, I
/// absorptive for constant f and inverted for balanced f, S always
/// inverted. With explicit_readout the cancelling 90_{-y} 90_y pair is
/// applied instead of being dropped.
ExperimentRun run_deutsch(FunctionId f, const SpinSystem& sys,
                          CompileMode mode = CompileMode::Ideal,
                          const ShapedLibrary* shaped = nullptr,
                          bool explicit_readout = false);

/// Phase-kickback identity: U_f maps |x>(|0> - |1>) to
/// (-1)^f(x) |x>(|0> - |1>).
struct KickbackResult {
  int phase_sign;
  bool state_preserved;
};

KickbackResult phase_kickback_check(FunctionId f, int x);

/// The textbook circuit H.H U_f H.H |01> with exact Hadamards, for
/// cross-checking the pulse realization.
PureState deutsch_exact_hadamard(FunctionId f);

/// Complex quadrature signal Tr(rho(t) (I- + S-)) sampled every dwell_s,
/// off-diagonals damped by exp(-t/T2*). With the exp(-i t H) evolution
/// convention this picks the lower-triangle coherences and puts each
/// spin's multiplet at its own (signed) offset in the spectrum.
struct Fid {
  std::vector<Complex> samples;
  double dwell_s;
};

/// points must be a power of two >= 2; throws std::invalid_argument if a
/// spectral line would alias past the Nyquist frequency 1/(2 dwell).
Fid synthesize_fid(const C4& rho, const SpinSystem& sys, int points,
                   double dwell_s);

/// Dense per-point propagation (full conjugation by the free propagator);
/// reference implementation for testing the closed-form kernel.
Fid synthesize_fid_reference(const C4& rho, const SpinSystem& sys, int points,
                             double dwell_s);

struct SpectrumBin {
  double freq_hz;
  Complex amplitude;
};

/// Discrete spectrum, bins in ascending frequency spanning +-1/(2 dwell),
/// amplitudes rotated by the zero-order phase correction phase0_rad.
struct Spectrum {
  std::vector<SpectrumBin> bins;
  double phase0_rad;
};

Spectrum spectrum(const Fid& fid, double phase0_rad = 0.0);

/// Re-apply a different zero-order phase to an existing spectrum.
Spectrum rephase(const Spectrum& spec, double phase0_rad);

/// Zero-order phase that makes the I multiplet of a reference spectrum
/// purely absorptive (maximizes its real integral). Throws
/// std::invalid_argument if the I window is empty.
double calibrate_phase(const Spectrum& reference, const SpinSystem& sys);

/// Real (absorptive) integrals over the multiplet windows
/// [nu - |J|, nu + |J|] of each spin.
struct MultipletIntegrals {
  double i_integral;
  double s_integral;
};

MultipletIntegrals multiplet_integrals(const Spectrum& spec,
                                       const SpinSystem& sys);

class UnclassifiableError : public std::runtime_error {
 public:
  explicit UnclassifiableError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Bits read from the spectrum: 0 for an absorptive multiplet, 1 for an
/// inverted one, judged against the integrals of a reference spectrum
/// (canonically the f00 run on input 0, whose multiplets are known
/// absorptive). Degraded below kDegradedFraction of the reference; throws
/// UnclassifiableError when both windows hold under 1% of it.
struct SpectralClassification {
  int bit_i;
  int bit_s;
  bool degraded_i;
  bool degraded_s;
  double integral_i;
  double integral_s;

  bool degraded() const { return degraded_i || degraded_s; }
};

SpectralClassification classify(const Spectrum& spec, const SpinSystem& sys,
                                const MultipletIntegrals& reference);

/// CSV writers: exact headers `time_s,real,imag` / `freq_hz,real,imag`,
/// shortest round-trip number formatting, LF line endings.
void write_fid_csv(std::ostream& out, const Fid& fid);
void write_spectrum_csv(std::ostream& out, const Spectrum& spec);

}  // namespace nmrqc

#endif
