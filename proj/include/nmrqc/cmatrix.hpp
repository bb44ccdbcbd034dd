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

#ifndef NMRQC_CMATRIX_HPP
#define NMRQC_CMATRIX_HPP

#include <complex>

#include <Eigen/Dense>

namespace nmrqc {

using Complex = std::complex<double>;

/// Dense complex matrices. Single-spin factors are 2x2, two-spin operators
/// are 4x4; keeping the dimension in the type (instead of a runtime field)
/// makes kron and embed mismatches uncompilable.
using C2 = Eigen::Matrix2cd;
using C4 = Eigen::Matrix4cd;
using V4 = Eigen::Vector4cd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Largest elementwise magnitude, used as the infinity-like norm in
/// equality checks.
double max_abs(const C2& m);
double max_abs(const C4& m);

bool is_unitary(const C4& u, double tol = 1e-10);
bool is_hermitian(const C4& m, double tol = 1e-12);

/// Kronecker product; the left factor acts on spin I, the right on spin S.
C4 kron(const C2& a, const C2& b);

/// exp(-i * t * h) for Hermitian h, via eigendecomposition. Exact unitarity
/// up to roundoff; throws std::invalid_argument if h is not Hermitian.
C4 expm_i(const C4& h, double t);

/// Sine and cosine of an angle given in degrees, with exact reduction to the
/// first quadrant. Guarantees identities the propagator algebra relies on,
/// e.g. cos_deg(x + 180) == -cos_deg(x) bit for bit and sin_deg(180) == 0,
/// so that a 360-degree pulse is exactly -identity and inverting the phase
/// exactly inverts the rotation.
double cos_deg(double x);
double sin_deg(double x);

/// Wrap an angle in degrees to (-180, 180].
double wrap_deg(double x);

}  // namespace nmrqc

#endif
