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

#ifndef NMRQC_SPIN_ALGEBRA_HPP
#define NMRQC_SPIN_ALGEBRA_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nmrqc/cmatrix.hpp"

namespace nmrqc {

/// The two heteronuclear spins. In all 4x4 operators and states, spin I is
/// the left Kronecker factor: basis kets are |i s> with index 2*i + s, so
/// the ordering is |00>, |01>, |10>, |11>.
enum class Spin { I, S };

Spin other_spin(Spin spin);
std::string_view spin_name(Spin spin);

/// Pauli matrices and identities.
const C2& pauli_x();
const C2& pauli_y();
const C2& pauli_z();
const C2& id2();
const C4& id4();

/// Embed a single-spin operator into the two-spin space, identity on the
/// other spin.
C4 embed(Spin spin, const C2& m);

/// Angular-momentum operators I_a = sigma_a/2 embedded for each spin.
const C4& op_x(Spin spin);
const C4& op_y(Spin spin);
const C4& op_z(Spin spin);

/// The sixteen-term product-operator basis:
///   E/2, I_x, I_y, I_z, S_x, S_y, S_z, and the nine 2*I_a*S_b terms.
/// All terms are Hermitian with Tr(B_k^2) = 1 and Tr(B_j B_k) = 0 for
/// j != k, so any Hermitian 4x4 operator decomposes uniquely with real
/// coefficients c_k = Tr(B_k * m). The two-spin terms carry the
/// conventional factor of 2; E/2 is half the identity.
enum class PoTerm {
  kHalfE,
  kIx,
  kIy,
  kIz,
  kSx,
  kSy,
  kSz,
  kIxSx,
  kIxSy,
  kIxSz,
  kIySx,
  kIySy,
  kIySz,
  kIzSx,
  kIzSy,
  kIzSz,
};

inline constexpr int kPoTermCount = 16;

const C4& po_basis(PoTerm term);
std::string_view po_name(PoTerm term);

/// Real coefficients of a Hermitian operator in the product-operator basis.
struct PoCoeffs {
  std::array<double, kPoTermCount> c{};

  double& operator[](PoTerm term) { return c[static_cast<int>(term)]; }
  double operator[](PoTerm term) const { return c[static_cast<int>(term)]; }
};

/// Decompose a Hermitian operator; throws std::invalid_argument if the
/// input is not Hermitian within 1e-12.
PoCoeffs po_decompose(const C4& hermitian);

/// Rebuild the operator from its coefficients; po_compose(po_decompose(m))
/// reproduces m to roundoff.
C4 po_compose(const PoCoeffs& coeffs);

/// Normalized two-spin pure state.
class PureState {
 public:
  /// Throws std::invalid_argument unless the squared norm of the
  /// amplitudes is 1 within 1e-12.
  explicit PureState(const V4& amplitudes);

  /// Computational basis ket |i s>.
  static PureState basis(int i_bit, int s_bit);

  const V4& amplitudes() const { return amp_; }

 private:
  V4 amp_;
};

/// Two-spin density matrix. Construction validates the physical invariants:
/// Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(const C4& m, std::string label = {});

  const C4& matrix() const { return m_; }
  const std::string& label() const { return label_; }

 private:
  C4 m_;
  std::string label_;
};

DensityMatrix pure_to_density(const PureState& psi, std::string label = {});

PoCoeffs po_decompose(const DensityMatrix& rho);

/// rho -> U rho U^dagger. Throws std::invalid_argument if u is not unitary
/// within 1e-10. The label is preserved.
DensityMatrix evolve(const DensityMatrix& rho, const C4& u);

/// Tr(rho * obs) for Hermitian obs; the imaginary residue (roundoff only)
/// is discarded.
double expectation(const DensityMatrix& rho, const C4& hermitian_obs);

/// Distance between unitaries up to global phase: phase = arg Tr(v^dag u),
/// distance = Frobenius norm of (u - e^{i phase} v). Zero distance means the
/// propagators are physically identical.
struct PhaseDistance {
  double distance;
  double phase;
};

/// Thrown by phase_distance when Tr(v^dag u) vanishes and no relative phase
/// is defined.
class OrthogonalPropagatorError : public std::domain_error {
 public:
  OrthogonalPropagatorError()
      : std::domain_error(
            "propagators are orthogonal: Tr(v^dag u) = 0, relative phase "
            "undefined") {}
};

PhaseDistance phase_distance(const C4& u, const C4& v);

}  // namespace nmrqc

#endif
