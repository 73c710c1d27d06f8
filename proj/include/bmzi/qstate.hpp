// Copyright 2026 The bmzi authors
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

#ifndef BMZI_QSTATE_HPP_
#define BMZI_QSTATE_HPP_

#include <array>
#include <complex>

namespace bmzi {

using Complex = std::complex<double>;

// Centralized tolerances. Constructors gate at kConstructTol; stored values
// then satisfy their invariants at kAssertTol or better.
inline constexpr double kConstructTol = 1e-9;
inline constexpr double kAssertTol = 1e-12;
inline constexpr double kEigClipFloor = -1e-10;

//=========================================================================
// 2x2 complex matrix (row major)
//=========================================================================

struct Mat2 {
  std::array<Complex, 4> e{};

  Complex& operator()(int i, int j) { return e[2 * i + j]; }
  const Complex& operator()(int i, int j) const { return e[2 * i + j]; }

  static Mat2 identity();
  Mat2 adjoint() const;
  Complex trace() const { return e[0] + e[3]; }
  bool is_finite() const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);

//=========================================================================
// Value types
//=========================================================================

// Normalized two-level state over the path basis {|0> = horizontal,
// |1> = vertical}. The constructor requires a near-unit vector and divides
// out the residual norm; global phase is kept as given.
class PureState {
 public:
  PureState(Complex a0, Complex a1);

  static PureState basis0() { return PureState(1.0, 0.0); }
  static PureState basis1() { return PureState(0.0, 1.0); }
  // Scales an arbitrary nonzero vector to unit norm.
  static PureState normalized(Complex a0, Complex a1);

  Complex a0() const { return a0_; }
  Complex a1() const { return a1_; }

 private:
  Complex a0_, a1_;
};

// Unitary 2x2 operator. Construction rejects matrices with
// ||U' U - I||_max > kConstructTol.
class Unitary2 {
 public:
  explicit Unitary2(const Mat2& m);

  static Unitary2 identity() { return Unitary2(Mat2::identity()); }

  const Mat2& matrix() const { return m_; }

 private:
  Mat2 m_;
};

// Hermitian, unit-trace, positive-semidefinite 2x2 matrix. The constructor
// gates at kConstructTol (eigenvalues at kEigClipFloor) and then stores the
// hermitized, trace-normalized matrix so the invariants hold exactly.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat2& m);

  const Mat2& matrix() const { return m_; }
  Complex at(int i, int j) const { return m_(i, j); }

 private:
  Mat2 m_;
};

struct BlochVector {
  double x = 0, y = 0, z = 0;

  double norm() const;
};

//=========================================================================
// Operations
//=========================================================================

PureState apply_unitary(const Unitary2& u, const PureState& psi);

// Outer product |psi><psi|.
DensityMatrix density_of(const PureState& psi);

// U rho U'.
DensityMatrix evolve(const Unitary2& u, const DensityMatrix& rho);

// Zeroes the off-diagonal entries.
DensityMatrix dephase(const DensityMatrix& rho);

// Eigenvalues in descending order, from the closed-form 2x2 quadratic.
std::array<double, 2> eigenvalues(const DensityMatrix& rho);

// Von Neumann entropy in bits, with 0 log 0 := 0. Result clamped to [0, 1].
double vn_entropy(const DensityMatrix& rho);

// Pauli expectations (<X>, <Y>, <Z>).
BlochVector bloch_vector(const DensityMatrix& rho);

// (I + xX + yY + zZ)/2. Requires |r| <= 1 + kConstructTol; a residual
// overshoot is scaled back onto the ball.
DensityMatrix density_from_bloch(const BlochVector& r);

// Uhlmann fidelity, 2x2 closed form: tr(rho sigma) + 2 sqrt(det rho det sigma).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace bmzi

#endif  // BMZI_QSTATE_HPP_
