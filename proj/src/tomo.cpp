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

#include "bmzi/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace bmzi {

namespace {

constexpr double kSingularDetTol = 1e-9;

void validate_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

void validate(const NoiseModel& noise) {
  validate_probability(noise.readout_e0, "NoiseModel::readout_e0");
  validate_probability(noise.readout_e1, "NoiseModel::readout_e1");
  validate_probability(noise.depolarizing_p, "NoiseModel::depolarizing_p");
}

// Born probability of outcome 0 in the rotated frame, with the per-gate
// depolarizing applied to the rotation (one gate for X/Y, none for Z).
double true_p0(const DensityMatrix& rho, Basis basis, const NoiseModel& noise) {
  DensityMatrix rotated =
      basis == Basis::Z ? rho : evolve(basis_rotation(basis), rho);
  if (basis != Basis::Z && noise.depolarizing_p > 0.0) {
    rotated = depolarize(rotated, noise.depolarizing_p, 1);
  }
  return std::clamp(rotated.at(0, 0).real(), 0.0, 1.0);
}

std::uint64_t draw_binomial(std::mt19937_64& rng, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

std::pair<double, double> frequencies(const Counts& c) {
  const double shots = static_cast<double>(c.shots);
  return {static_cast<double>(c.n0) / shots, static_cast<double>(c.n1) / shots};
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(const std::array<std::array<double, 2>, 2>& m)
    : m_(m) {
  for (int j = 0; j < 2; ++j) {
    validate_probability(m[0][j], "ConfusionMatrix entry");
    validate_probability(m[1][j], "ConfusionMatrix entry");
    if (std::abs(m[0][j] + m[1][j] - 1.0) > kAssertTol) {
      throw std::invalid_argument("ConfusionMatrix: columns must sum to 1");
    }
  }
}

ConfusionMatrix ConfusionMatrix::identity() {
  return ConfusionMatrix({{{1.0, 0.0}, {0.0, 1.0}}});
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

DensityMatrix depolarize(const DensityMatrix& rho, double p, int gate_count) {
  validate_probability(p, "depolarizing rate");
  if (gate_count < 0) {
    throw std::invalid_argument("depolarize: gate_count must be nonnegative");
  }
  const double w = std::pow(1.0 - p, gate_count);
  Mat2 m = rho.matrix();
  for (auto& c : m.e) c *= w;
  m(0, 0) += 0.5 * (1.0 - w);
  m(1, 1) += 0.5 * (1.0 - w);
  return DensityMatrix(m);
}

Unitary2 basis_rotation(Basis basis) {
  const double s = 1.0 / std::sqrt(2.0);
  Mat2 m;
  switch (basis) {
    case Basis::X:  // Hadamard
      m(0, 0) = s;
      m(0, 1) = s;
      m(1, 0) = s;
      m(1, 1) = -s;
      break;
    case Basis::Y:  // Hadamard after the adjoint phase gate
      m(0, 0) = s;
      m(0, 1) = Complex(0.0, -s);
      m(1, 0) = s;
      m(1, 1) = Complex(0.0, s);
      break;
    case Basis::Z:
      return Unitary2::identity();
  }
  return Unitary2(m);
}

std::pair<double, double> measurement_probabilities(const DensityMatrix& rho,
                                                    Basis basis,
                                                    const NoiseModel& noise) {
  validate(noise);
  const double p0 = true_p0(rho, basis, noise);
  const double p1 = 1.0 - p0;
  const double o0 = p0 * (1.0 - noise.readout_e0) + p1 * noise.readout_e1;
  return {o0, 1.0 - o0};
}

Counts sample_counts(const DensityMatrix& rho, Basis basis, std::uint64_t shots,
                     const NoiseModel& noise, std::uint64_t seed) {
  validate(noise);
  if (shots < 1) {
    throw std::invalid_argument("sample_counts: shots must be >= 1");
  }
  std::mt19937_64 rng(seed);
  const double p0 = true_p0(rho, basis, noise);
  const std::uint64_t true1 = draw_binomial(rng, shots, 1.0 - p0);
  const std::uint64_t true0 = shots - true1;
  // Independent readout flips, aggregated binomially per true outcome.
  const std::uint64_t flip0 = draw_binomial(rng, true0, noise.readout_e0);
  const std::uint64_t flip1 = draw_binomial(rng, true1, noise.readout_e1);
  const std::uint64_t n1 = true1 - flip1 + flip0;
  return Counts{shots - n1, n1, basis, shots};
}

ConfusionMatrix calibrate_confusion(const NoiseModel& noise, std::uint64_t shots,
                                    std::uint64_t seed) {
  Mat2 zero, one;
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  const Counts c0 = sample_counts(DensityMatrix(zero), Basis::Z, shots, noise,
                                  derive_seed(seed, 0));
  const Counts c1 = sample_counts(DensityMatrix(one), Basis::Z, shots, noise,
                                  derive_seed(seed, 1));
  const auto [f00, f10] = frequencies(c0);
  const auto [f01, f11] = frequencies(c1);
  return ConfusionMatrix({{{f00, f01}, {f10, f11}}});
}

ConfusionMatrix exact_confusion(const NoiseModel& noise) {
  validate(noise);
  return ConfusionMatrix({{{1.0 - noise.readout_e0, noise.readout_e1},
                           {noise.readout_e0, 1.0 - noise.readout_e1}}});
}

std::pair<double, double> mitigate_probabilities(double p0, double p1,
                                                 const ConfusionMatrix& cm) {
  validate_probability(p0, "observed p0");
  validate_probability(p1, "observed p1");
  const double det = cm.determinant();
  if (std::abs(det) <= kSingularDetTol) {
    throw SingularConfusionMatrix("confusion matrix is singular; cannot mitigate");
  }
  double q0 = (cm.at(1, 1) * p0 - cm.at(0, 1) * p1) / det;
  double q1 = (cm.at(0, 0) * p1 - cm.at(1, 0) * p0) / det;
  q0 = std::clamp(q0, 0.0, 1.0);
  q1 = std::clamp(q1, 0.0, 1.0);
  const double sum = q0 + q1;
  return {q0 / sum, q1 / sum};
}

std::pair<double, double> mitigate(const Counts& counts, const ConfusionMatrix& cm) {
  if (counts.shots < 1 || counts.n0 + counts.n1 != counts.shots) {
    throw std::invalid_argument("mitigate: malformed counts");
  }
  const auto [f0, f1] = frequencies(counts);
  return mitigate_probabilities(f0, f1, cm);
}

TomographyResult reconstruct_from_probabilities(
    std::pair<double, double> px, std::pair<double, double> py,
    std::pair<double, double> pz, const std::optional<ConfusionMatrix>& cm) {
  const auto expectation = [&](std::pair<double, double> p) {
    if (cm) p = mitigate_probabilities(p.first, p.second, *cm);
    return p.first - p.second;
  };
  BlochVector raw{expectation(px), expectation(py), expectation(pz)};
  BlochVector r = raw;
  bool projected = false;
  const double n = raw.norm();
  if (n > 1.0) {
    r.x /= n;
    r.y /= n;
    r.z /= n;
    projected = true;
  }
  return TomographyResult{density_from_bloch(r), raw, projected};
}

TomographyResult reconstruct(const Counts& counts_x, const Counts& counts_y,
                             const Counts& counts_z,
                             const std::optional<ConfusionMatrix>& cm) {
  if (counts_x.basis != Basis::X || counts_y.basis != Basis::Y ||
      counts_z.basis != Basis::Z) {
    throw std::invalid_argument("reconstruct: counts bases must be X, Y, Z");
  }
  for (const Counts* c : {&counts_x, &counts_y, &counts_z}) {
    if (c->shots < 1 || c->n0 + c->n1 != c->shots) {
      throw std::invalid_argument("reconstruct: malformed counts");
    }
  }
  return reconstruct_from_probabilities(frequencies(counts_x),
                                        frequencies(counts_y),
                                        frequencies(counts_z), cm);
}

}  // namespace bmzi
