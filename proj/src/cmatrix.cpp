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

#include "nmrqc/cmatrix.hpp"

#include <cmath>
#include <stdexcept>

namespace nmrqc {

double max_abs(const C2& m) { return m.cwiseAbs().maxCoeff(); }

double max_abs(const C4& m) { return m.cwiseAbs().maxCoeff(); }

bool is_unitary(const C4& u, double tol) {
  return max_abs(C4(u.adjoint() * u - C4::Identity())) <= tol;
}

bool is_hermitian(const C4& m, double tol) {
  return max_abs(C4(m - m.adjoint())) <= tol;
}

C4 kron(const C2& a, const C2& b) {
  C4 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    }
  }
  return out;
}

C4 expm_i(const C4& h, double t) {
  if (!is_hermitian(h, 1e-9 * (1.0 + max_abs(h)))) {
    throw std::invalid_argument("expm_i requires a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<C4> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("expm_i: eigendecomposition failed");
  }
  V4 phases;
  for (int k = 0; k < 4; ++k) {
    phases[k] = std::exp(Complex(0.0, -t * es.eigenvalues()[k]));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// Reduce x (degrees) to r in [0, 180) plus a sign, such that
// trig(x) == sign * trig(r) for the requested function. The subtractions are
// exact because both operands are multiples of the same binade-friendly
// constants, so e.g. phase + 180 inverts the result bit for bit.
struct Reduced {
  double r;
  double sign;
};

Reduced reduce_half_turn(double x) {
  double r = std::fmod(x, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;  // catches x = -epsilon rounding up to 360
  double sign = 1.0;
  if (r >= 180.0) {
    r -= 180.0;
    sign = -1.0;
  }
  return {r, sign};
}

}  // namespace

double cos_deg(double x) {
  auto [r, sign] = reduce_half_turn(x);
  if (r > 90.0) {
    r = 180.0 - r;
    sign = -sign;
  }
  if (r == 0.0) return sign;
  if (r == 90.0) return 0.0;
  return sign * std::cos(r * kDegToRad);
}

double sin_deg(double x) {
  auto [r, sign] = reduce_half_turn(x);
  if (r > 90.0) r = 180.0 - r;
  if (r == 0.0) return 0.0;
  if (r == 90.0) return sign;
  return sign * std::sin(r * kDegToRad);
}

double wrap_deg(double x) {
  double r = std::fmod(x, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

}  // namespace nmrqc
