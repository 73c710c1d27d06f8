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

#include "bmzi/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bmzi {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

//=========================================================================
// Mat2
//=========================================================================

Mat2 Mat2::identity() {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  return m;
}

Mat2 Mat2::adjoint() const {
  Mat2 r;
  r(0, 0) = std::conj((*this)(0, 0));
  r(0, 1) = std::conj((*this)(1, 0));
  r(1, 0) = std::conj((*this)(0, 1));
  r(1, 1) = std::conj((*this)(1, 1));
  return r;
}

bool Mat2::is_finite() const {
  for (const auto& c : e) {
    if (!finite(c)) return false;
  }
  return true;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return r;
}

//=========================================================================
// PureState
//=========================================================================

PureState::PureState(Complex a0, Complex a1) : a0_(a0), a1_(a1) {
  if (!finite(a0) || !finite(a1)) {
    throw std::invalid_argument("PureState: amplitudes must be finite");
  }
  const double n2 = std::norm(a0) + std::norm(a1);
  if (std::abs(n2 - 1.0) > kConstructTol) {
    throw std::invalid_argument("PureState: amplitudes are not normalized");
  }
  const double n = std::sqrt(n2);
  a0_ /= n;
  a1_ /= n;
}

PureState PureState::normalized(Complex a0, Complex a1) {
  if (!finite(a0) || !finite(a1)) {
    throw std::invalid_argument("PureState: amplitudes must be finite");
  }
  const double n = std::sqrt(std::norm(a0) + std::norm(a1));
  if (n < 1e-300) {
    throw std::invalid_argument("PureState: cannot normalize the zero vector");
  }
  return PureState(a0 / n, a1 / n);
}

//=========================================================================
// Unitary2
//=========================================================================

Unitary2::Unitary2(const Mat2& m) : m_(m) {
  if (!m.is_finite()) {
    throw std::invalid_argument("Unitary2: entries must be finite");
  }
  const Mat2 g = m.adjoint() * m;
  double dev = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex want = (i == j) ? Complex(1.0) : Complex(0.0);
      dev = std::max(dev, std::abs(g(i, j) - want));
    }
  }
  if (dev > kConstructTol) {
    throw std::invalid_argument("Unitary2: matrix is not unitary");
  }
}

//=========================================================================
// DensityMatrix
//=========================================================================

DensityMatrix::DensityMatrix(const Mat2& m) : m_(m) {
  if (!m.is_finite()) {
    throw std::invalid_argument("DensityMatrix: entries must be finite");
  }
  if (std::abs(m(0, 1) - std::conj(m(1, 0))) > kConstructTol ||
      std::abs(m(0, 0).imag()) > kConstructTol ||
      std::abs(m(1, 1).imag()) > kConstructTol) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0)) > kConstructTol) {
    throw std::invalid_argument("DensityMatrix: trace must be 1");
  }
  // Hermitize, then divide out the residual trace.
  Mat2 h;
  h(0, 0) = Complex(m(0, 0).real(), 0.0);
  h(1, 1) = Complex(m(1, 1).real(), 0.0);
  h(0, 1) = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  h(1, 0) = std::conj(h(0, 1));
  const double tr = h(0, 0).real() + h(1, 1).real();
  for (auto& c : h.e) c /= tr;

  const double mean = 0.5;
  const double d = h(0, 0).real() - h(1, 1).real();
  const double radius = std::sqrt(0.25 * d * d + std::norm(h(0, 1)));
  if (mean - radius < kEigClipFloor) {
    throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue");
  }
  m_ = h;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

//=========================================================================
// Operations
//=========================================================================

PureState apply_unitary(const Unitary2& u, const PureState& psi) {
  const Mat2& m = u.matrix();
  return PureState(m(0, 0) * psi.a0() + m(0, 1) * psi.a1(),
                   m(1, 0) * psi.a0() + m(1, 1) * psi.a1());
}

DensityMatrix density_of(const PureState& psi) {
  Mat2 m;
  m(0, 0) = psi.a0() * std::conj(psi.a0());
  m(0, 1) = psi.a0() * std::conj(psi.a1());
  m(1, 0) = psi.a1() * std::conj(psi.a0());
  m(1, 1) = psi.a1() * std::conj(psi.a1());
  return DensityMatrix(m);
}

DensityMatrix evolve(const Unitary2& u, const DensityMatrix& rho) {
  return DensityMatrix(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

DensityMatrix dephase(const DensityMatrix& rho) {
  Mat2 m;
  m(0, 0) = rho.at(0, 0);
  m(1, 1) = rho.at(1, 1);
  return DensityMatrix(m);
}

std::array<double, 2> eigenvalues(const DensityMatrix& rho) {
  // lambda = 1/2 +- sqrt(d^2/4 + |rho01|^2) with d the population imbalance;
  // this form has no cancellation.
  const double d = rho.at(0, 0).real() - rho.at(1, 1).real();
  const double radius = std::sqrt(0.25 * d * d + std::norm(rho.at(0, 1)));
  return {0.5 + radius, 0.5 - radius};
}

double vn_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : eigenvalues(rho)) {
    if (lambda <= 0.0) continue;  // 0 log 0 := 0; clipped negatives likewise
    s -= lambda * std::log2(lambda);
  }
  return std::clamp(s, 0.0, 1.0);
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  BlochVector r;
  r.x = 2.0 * rho.at(0, 1).real();
  r.y = -2.0 * rho.at(0, 1).imag();
  r.z = rho.at(0, 0).real() - rho.at(1, 1).real();
  return r;
}

DensityMatrix density_from_bloch(const BlochVector& r) {
  if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z)) {
    throw std::invalid_argument("density_from_bloch: components must be finite");
  }
  double x = r.x, y = r.y, z = r.z;
  const double n = r.norm();
  if (n > 1.0 + kConstructTol) {
    throw std::invalid_argument("density_from_bloch: vector lies outside the Bloch ball");
  }
  if (n > 1.0) {
    x /= n;
    y /= n;
    z /= n;
  }
  Mat2 m;
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = 0.5 * Complex(x, -y);
  m(1, 0) = 0.5 * Complex(x, y);
  return DensityMatrix(m);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const Mat2 p = rho.matrix() * sigma.matrix();
  const double tr = p.trace().real();
  const auto det = [](const DensityMatrix& a) {
    const double d =
        a.at(0, 0).real() * a.at(1, 1).real() - std::norm(a.at(0, 1));
    return std::max(d, 0.0);
  };
  const double f = tr + 2.0 * std::sqrt(det(rho) * det(sigma));
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace bmzi
