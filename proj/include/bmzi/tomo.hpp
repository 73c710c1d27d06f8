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

#ifndef BMZI_TOMO_HPP_
#define BMZI_TOMO_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "bmzi/qstate.hpp"

namespace bmzi {

// Calibration of the single-qubit chip the readout defaults emulate.
// Only the readout error feeds the noise model; the rest is metadata.
namespace armonk {
inline constexpr double kFrequencyGhz = 4.797;
inline constexpr double kT1Us = 272.47;
inline constexpr double kT2Us = 276.02;
inline constexpr double kGateError = 0.156;
inline constexpr double kReadoutError = 0.0406;
}  // namespace armonk

// Readout flips are applied independently per shot: a true 0 reads as 1 with
// probability readout_e0, a true 1 reads as 0 with probability readout_e1.
// depolarizing_p is a per-gate depolarizing rate consumed by depolarize();
// it defaults to 0.
struct NoiseModel {
  double readout_e0 = armonk::kReadoutError;
  double readout_e1 = armonk::kReadoutError;
  double depolarizing_p = 0.0;

  static NoiseModel noiseless() { return NoiseModel{0.0, 0.0, 0.0}; }
};

enum class Basis { X, Y, Z };

// Shot record of a measurement in one Pauli basis.
struct Counts {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  Basis basis = Basis::Z;
  std::uint64_t shots = 0;  // == n0 + n1
};

// Column-stochastic 2x2 readout map: column j holds P(read i | true j).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(const std::array<std::array<double, 2>, 2>& m);

  static ConfusionMatrix identity();

  double at(int read, int truth) const { return m_[read][truth]; }
  double determinant() const { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }

 private:
  std::array<std::array<double, 2>, 2> m_;
};

class SingularConfusionMatrix : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct TomographyResult {
  DensityMatrix rho;
  BlochVector raw_bloch;  // linear-inversion vector before any projection
  bool projected = false; // true if the vector was scaled back onto the ball
};

// Deterministic per-task seed derived from a master seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Depolarizing channel accumulated over gate_count gates:
// rho -> w rho + (1 - w) I/2 with w = (1 - p)^gate_count.
DensityMatrix depolarize(const DensityMatrix& rho, double p, int gate_count);

// Pre-measurement rotation mapping the requested Pauli basis onto Z.
Unitary2 basis_rotation(Basis basis);

// Exact-mode (infinite shots) observed outcome probabilities: Born rule in
// the rotated basis composed with the readout flip model.
std::pair<double, double> measurement_probabilities(const DensityMatrix& rho,
                                                    Basis basis,
                                                    const NoiseModel& noise);

// Finite-shot emulation of a basis measurement; deterministic given seed.
Counts sample_counts(const DensityMatrix& rho, Basis basis, std::uint64_t shots,
                     const NoiseModel& noise, std::uint64_t seed);

// Readout frequencies from prepared |0> and |1> states, shots each.
ConfusionMatrix calibrate_confusion(const NoiseModel& noise, std::uint64_t shots,
                                    std::uint64_t seed);

// Exact-mode calibration: [[1-e0, e1], [e0, 1-e1]].
ConfusionMatrix exact_confusion(const NoiseModel& noise);

// Solves cm * p_true = p_observed, clips to [0, 1] and renormalizes.
// Throws SingularConfusionMatrix when |det| <= 1e-9.
std::pair<double, double> mitigate_probabilities(double p0, double p1,
                                                 const ConfusionMatrix& cm);
std::pair<double, double> mitigate(const Counts& counts, const ConfusionMatrix& cm);

// Linear-inversion tomography from three basis measurements. Mitigation is
// applied per basis when cm is supplied. A Bloch vector of norm > 1 is
// radially scaled back to the sphere and flagged.
TomographyResult reconstruct(const Counts& counts_x, const Counts& counts_y,
                             const Counts& counts_z,
                             const std::optional<ConfusionMatrix>& cm = std::nullopt);

// Exact-probability variant of reconstruct; each pair is (p0, p1) observed
// in that basis.
TomographyResult reconstruct_from_probabilities(
    std::pair<double, double> px, std::pair<double, double> py,
    std::pair<double, double> pz,
    const std::optional<ConfusionMatrix>& cm = std::nullopt);

}  // namespace bmzi

#endif  // BMZI_TOMO_HPP_
