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

#include "nmrqc/spin_algebra.hpp"

#include <cmath>
#include <utility>

namespace nmrqc {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenvalueTol = 1e-10;
constexpr double kUnitNormTol = 1e-12;  // on the squared norm
constexpr double kUnitaryTol = 1e-10;

C2 make_pauli(int which) {
  C2 m = C2::Zero();
  const Complex i(0.0, 1.0);
  switch (which) {
    case 0:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 1:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    default:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

}  // namespace

Spin other_spin(Spin spin) { return spin == Spin::I ? Spin::S : Spin::I; }

std::string_view spin_name(Spin spin) { return spin == Spin::I ? "I" : "S"; }

const C2& pauli_x() {
  static const C2 m = make_pauli(0);
  return m;
}

const C2& pauli_y() {
  static const C2 m = make_pauli(1);
  return m;
}

const C2& pauli_z() {
  static const C2 m = make_pauli(2);
  return m;
}

const C2& id2() {
  static const C2 m = C2::Identity();
  return m;
}

const C4& id4() {
  static const C4 m = C4::Identity();
  return m;
}

C4 embed(Spin spin, const C2& m) {
  return spin == Spin::I ? kron(m, id2()) : kron(id2(), m);
}

const C4& op_x(Spin spin) {
  static const C4 ix = embed(Spin::I, C2(0.5 * pauli_x()));
  static const C4 sx = embed(Spin::S, C2(0.5 * pauli_x()));
  return spin == Spin::I ? ix : sx;
}

const C4& op_y(Spin spin) {
  static const C4 iy = embed(Spin::I, C2(0.5 * pauli_y()));
  static const C4 sy = embed(Spin::S, C2(0.5 * pauli_y()));
  return spin == Spin::I ? iy : sy;
}

const C4& op_z(Spin spin) {
  static const C4 iz = embed(Spin::I, C2(0.5 * pauli_z()));
  static const C4 sz = embed(Spin::S, C2(0.5 * pauli_z()));
  return spin == Spin::I ? iz : sz;
}

namespace {

std::array<C4, kPoTermCount> make_po_basis() {
  std::array<C4, kPoTermCount> basis;
  const std::array<C2, 3> half_sigma = {C2(0.5 * pauli_x()),
                                        C2(0.5 * pauli_y()),
                                        C2(0.5 * pauli_z())};
  basis[0] = 0.5 * C4::Identity();
  for (int a = 0; a < 3; ++a) {
    basis[1 + a] = kron(half_sigma[a], id2());
    basis[4 + a] = kron(id2(), half_sigma[a]);
  }
  // Two-spin terms 2 * I_a * S_b in row-major (a, b) order.
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      basis[7 + 3 * a + b] = 2.0 * kron(half_sigma[a], half_sigma[b]);
    }
  }
  return basis;
}

constexpr std::array<std::string_view, kPoTermCount> kPoNames = {
    "E/2",   "Ix",    "Iy",    "Iz",    "Sx",    "Sy",
    "Sz",    "2IxSx", "2IxSy", "2IxSz", "2IySx", "2IySy",
    "2IySz", "2IzSx", "2IzSy", "2IzSz",
};

}  // namespace

const C4& po_basis(PoTerm term) {
  static const std::array<C4, kPoTermCount> basis = make_po_basis();
  return basis[static_cast<int>(term)];
}

std::string_view po_name(PoTerm term) {
  return kPoNames[static_cast<int>(term)];
}

PoCoeffs po_decompose(const C4& hermitian) {
  if (!is_hermitian(hermitian, kHermitianTol)) {
    throw std::invalid_argument("po_decompose requires a Hermitian operator");
  }
  PoCoeffs coeffs;
  for (int k = 0; k < kPoTermCount; ++k) {
    const C4& b = po_basis(static_cast<PoTerm>(k));
    coeffs.c[k] = C4(b * hermitian).trace().real();
  }
  return coeffs;
}

C4 po_compose(const PoCoeffs& coeffs) {
  C4 out = C4::Zero();
  for (int k = 0; k < kPoTermCount; ++k) {
    out += coeffs.c[k] * po_basis(static_cast<PoTerm>(k));
  }
  return out;
}

PureState::PureState(const V4& amplitudes) : amp_(amplitudes) {
  if (std::abs(amp_.squaredNorm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("pure state amplitudes must have unit norm");
  }
}

PureState PureState::basis(int i_bit, int s_bit) {
  if ((i_bit != 0 && i_bit != 1) || (s_bit != 0 && s_bit != 1)) {
    throw std::invalid_argument("basis bits must be 0 or 1");
  }
  V4 amp = V4::Zero();
  amp[2 * i_bit + s_bit] = 1.0;
  return PureState(amp);
}

DensityMatrix::DensityMatrix(const C4& m, std::string label)
    : m_(m), label_(std::move(label)) {
  if (!is_hermitian(m_, kHermitianTol)) {
    throw std::invalid_argument("density matrix must be Hermitian");
  }
  if (std::abs(m_.trace().real() - 1.0) > kTraceTol ||
      std::abs(m_.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<C4> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigenvalueTol) {
    throw std::invalid_argument("density matrix must be positive semidefinite");
  }
}

DensityMatrix pure_to_density(const PureState& psi, std::string label) {
  const V4& a = psi.amplitudes();
  return DensityMatrix(C4(a * a.adjoint()), std::move(label));
}

PoCoeffs po_decompose(const DensityMatrix& rho) {
  return po_decompose(rho.matrix());
}

DensityMatrix evolve(const DensityMatrix& rho, const C4& u) {
  if (!is_unitary(u, kUnitaryTol)) {
    throw std::invalid_argument("evolve requires a unitary propagator");
  }
  return DensityMatrix(C4(u * rho.matrix() * u.adjoint()), rho.label());
}

double expectation(const DensityMatrix& rho, const C4& hermitian_obs) {
  if (!is_hermitian(hermitian_obs, kHermitianTol)) {
    throw std::invalid_argument("expectation requires a Hermitian observable");
  }
  return C4(rho.matrix() * hermitian_obs).trace().real();
}

PhaseDistance phase_distance(const C4& u, const C4& v) {
  if (!is_unitary(u, kUnitaryTol) || !is_unitary(v, kUnitaryTol)) {
    throw std::invalid_argument("phase_distance requires unitary inputs");
  }
  const Complex tr = C4(v.adjoint() * u).trace();
  if (std::abs(tr) < 1e-9) {
    throw OrthogonalPropagatorError();
  }
  const double phase = std::arg(tr);
  const C4 diff = u - std::exp(Complex(0.0, phase)) * v;
  return {diff.norm(), phase};
}

}  // namespace nmrqc
