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

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "nmrqc/cmatrix.hpp"
#include "nmrqc/spin_algebra.hpp"
#include "test_util.hpp"

namespace nmrqc {
namespace {

using testutil::Rng;

TEST_CASE("single-spin operators embed with I as the high bit") {
  // Iz distinguishes the first label of |i s>, Sz the second.
  const C4& iz = op_z(Spin::I);
  const C4& sz = op_z(Spin::S);
  for (int i_bit = 0; i_bit < 2; ++i_bit) {
    for (int s_bit = 0; s_bit < 2; ++s_bit) {
      const int idx = 2 * i_bit + s_bit;
      CHECK(iz(idx, idx).real() == doctest::Approx(i_bit == 0 ? 0.5 : -0.5));
      CHECK(sz(idx, idx).real() == doctest::Approx(s_bit == 0 ? 0.5 : -0.5));
    }
  }
  CHECK(testutil::diff(op_x(Spin::I), kron(C2(0.5 * pauli_x()), id2())) == 0.0);
  CHECK(testutil::diff(op_x(Spin::S), kron(id2(), C2(0.5 * pauli_x()))) == 0.0);
}

TEST_CASE("spin operators obey the su(2) commutator on each spin") {
  for (Spin spin : {Spin::I, Spin::S}) {
    const C4 comm = op_x(spin) * op_y(spin) - op_y(spin) * op_x(spin);
    CHECK(testutil::diff(comm, C4(Complex(0.0, 1.0) * op_z(spin))) < 1e-14);
  }
  // Operators on different spins commute.
  const C4 cross =
      op_x(Spin::I) * op_y(Spin::S) - op_y(Spin::S) * op_x(Spin::I);
  CHECK(max_abs(cross) < 1e-14);
}

TEST_CASE("product-operator basis is orthonormal under the trace metric") {
  for (int j = 0; j < kPoTermCount; ++j) {
    for (int k = 0; k < kPoTermCount; ++k) {
      const Complex tr =
          C4(po_basis(static_cast<PoTerm>(j)) * po_basis(static_cast<PoTerm>(k)))
              .trace();
      CHECK(std::abs(tr - (j == k ? 1.0 : 0.0)) < 1e-14);
    }
  }
  CHECK(testutil::diff(po_basis(PoTerm::kHalfE), C4(0.5 * id4())) == 0.0);
}

TEST_CASE("po_name labels the sixteen operators") {
  CHECK(po_name(PoTerm::kHalfE) == "E/2");
  CHECK(po_name(PoTerm::kIx) == "Ix");
  CHECK(po_name(PoTerm::kSz) == "Sz");
  CHECK(po_name(PoTerm::kIzSz) == "2IzSz");
}

TEST_CASE("the |01> deviation state decomposes as (Iz - Sz - 2IzSz + E/2)/2") {
  const PoCoeffs c = po_decompose(pure_to_density(PureState::basis(0, 1)));
  CHECK(c[PoTerm::kHalfE] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c[PoTerm::kIz] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c[PoTerm::kSz] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(c[PoTerm::kIzSz] == doctest::Approx(-0.5).epsilon(1e-12));
  double rest = 0.0;
  for (int k = 0; k < kPoTermCount; ++k) {
    const PoTerm term = static_cast<PoTerm>(k);
    if (term == PoTerm::kHalfE || term == PoTerm::kIz ||
        term == PoTerm::kSz || term == PoTerm::kIzSz) {
      continue;
    }
    rest += std::abs(c[term]);
  }
  CHECK(rest < 1e-12);
}

TEST_CASE("product-operator decomposition round-trips random operators") {
  Rng rng(0x50a10001);
  for (int trial = 0; trial < 200; ++trial) {
    const C4 m = testutil::random_hermitian(rng, 2.0);
    CHECK(testutil::diff(po_compose(po_decompose(m)), m) < 1e-12);
  }
  for (int trial = 0; trial < 200; ++trial) {
    PoCoeffs c{};
    for (double& x : c.c) x = testutil::uniform(rng, -2.0, 2.0);
    const PoCoeffs back = po_decompose(po_compose(c));
    for (int k = 0; k < kPoTermCount; ++k) {
      CHECK(std::abs(back.c[k] - c.c[k]) < 1e-12);
    }
  }
}

TEST_CASE("po_decompose rejects non-Hermitian input") {
  C4 m = C4::Zero();
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(po_decompose(m), std::invalid_argument);
}

TEST_CASE("PureState validates normalization and basis bits") {
  CHECK_THROWS_AS(PureState(V4(0.5, 0.0, 0.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(PureState::basis(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(PureState::basis(0, -1), std::invalid_argument);
  const PureState psi = PureState::basis(1, 0);
  CHECK(psi.amplitudes()(2) == Complex(1.0, 0.0));
  CHECK(psi.amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("pure_to_density builds rank-one projectors") {
  Rng rng(0x50a10002);
  for (int trial = 0; trial < 50; ++trial) {
    const V4 v = testutil::random_state_vector(rng);
    const DensityMatrix rho = pure_to_density(PureState(v));
    CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
    CHECK(is_hermitian(rho.matrix(), 1e-12));
    // Projector: rho^2 = rho.
    CHECK(testutil::diff(C4(rho.matrix() * rho.matrix()), rho.matrix()) <
          1e-12);
    // Expectation agrees with the state-vector form <psi|O|psi>.
    const C4 obs = testutil::random_hermitian(rng);
    const Complex direct = v.dot(obs * v);
    CHECK(expectation(rho, obs) == doctest::Approx(direct.real()).epsilon(1e-10));
  }
}

TEST_CASE("DensityMatrix rejects unphysical matrices") {
  C4 bad = C4::Zero();
  bad(0, 0) = 1.0;
  bad(0, 1) = 0.5;  // not Hermitian
  CHECK_THROWS_AS((void)DensityMatrix(bad), std::invalid_argument);

  bad = C4::Zero();
  bad(0, 0) = 0.7;  // trace 0.7
  CHECK_THROWS_AS((void)DensityMatrix(bad), std::invalid_argument);

  bad = C4::Zero();
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;  // negative eigenvalue
  CHECK_THROWS_AS((void)DensityMatrix(bad), std::invalid_argument);
}

TEST_CASE("evolve conjugates by the propagator and preserves structure") {
  Rng rng(0x50a10003);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho{testutil::random_density(rng), "trial"};
    const C4 u = testutil::random_unitary(rng);
    const DensityMatrix out = evolve(rho, u);
    CHECK(testutil::diff(out.matrix(), C4(u * rho.matrix() * u.adjoint())) <
          1e-12);
    CHECK(std::abs(out.matrix().trace() - 1.0) < 1e-10);
    CHECK(is_hermitian(out.matrix(), 1e-10));
    CHECK(out.label() == "trial");
  }
  CHECK_THROWS_AS(
      evolve(pure_to_density(PureState::basis(0, 0)), C4(2.0 * C4::Identity())),
      std::invalid_argument);
}

TEST_CASE("expectation requires a Hermitian observable") {
  C4 obs = C4::Zero();
  obs(0, 1) = 1.0;
  CHECK_THROWS_AS(expectation(pure_to_density(PureState::basis(0, 0)), obs),
                  std::invalid_argument);
}

TEST_CASE("phase_distance recovers a planted global phase") {
  Rng rng(0x50a10004);
  for (int trial = 0; trial < 100; ++trial) {
    const C4 v = testutil::random_unitary(rng);
    const double alpha = testutil::uniform(rng, -kPi + 0.01, kPi - 0.01);
    const C4 u = std::exp(Complex(0.0, alpha)) * v;
    const PhaseDistance pd = phase_distance(u, v);
    CHECK(pd.distance < 1e-12);
    CHECK(pd.phase == doctest::Approx(alpha).epsilon(1e-10));
  }
}

TEST_CASE("phase_distance flags orthogonal propagators") {
  // kron(sigma_x, sigma_x) is traceless, so no global phase can align it
  // with the identity.
  const C4 v = kron(pauli_x(), pauli_x());
  CHECK_THROWS_AS(phase_distance(C4(C4::Identity()), v),
                  OrthogonalPropagatorError);
  CHECK_THROWS_AS(phase_distance(C4(C4::Identity()), C4(1.1 * C4::Identity())),
                  std::invalid_argument);
}

TEST_CASE("embed places a 2x2 operator on the named spin only") {
  Rng rng(0x50a10005);
  for (int trial = 0; trial < 25; ++trial) {
    C2 m;
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = testutil::random_complex(rng);
    CHECK(testutil::diff(embed(Spin::I, m), kron(m, id2())) == 0.0);
    CHECK(testutil::diff(embed(Spin::S, m), kron(id2(), m)) == 0.0);
  }
  CHECK(other_spin(Spin::I) == Spin::S);
  CHECK(other_spin(Spin::S) == Spin::I);
  CHECK(spin_name(Spin::I) == "I");
  CHECK(spin_name(Spin::S) == "S");
}

}  // namespace
}  // namespace nmrqc
