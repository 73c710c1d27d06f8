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

#include "bmzi/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bmzi {

BeamSplitter::BeamSplitter(double theta) : theta_(theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi / 2.0) {
    throw std::domain_error("BeamSplitter: theta must lie in [0, pi/2]");
  }
}

BeamSplitter BeamSplitter::from_coefficients(double transmission, double reflection) {
  if (!std::isfinite(transmission) || !std::isfinite(reflection) ||
      transmission < 0.0 || reflection < 0.0) {
    throw std::invalid_argument("BeamSplitter: coefficients must be nonnegative");
  }
  if (transmission == 0.0 && reflection == 0.0) {
    throw std::invalid_argument("BeamSplitter: coefficients cannot both be zero");
  }
  return BeamSplitter(std::atan2(reflection, transmission));
}

BeamSplitter BeamSplitter::balanced() { return BeamSplitter(std::numbers::pi / 4.0); }

Unitary2 beam_splitter_unitary(const BeamSplitter& bs) {
  const double c = bs.transmission();
  const double s = bs.reflection();
  Mat2 m;
  m(0, 0) = c;
  m(0, 1) = Complex(0.0, s);
  m(1, 0) = Complex(0.0, s);
  m(1, 1) = c;
  return Unitary2(m);
}

Unitary2 mirror_unitary() {
  Mat2 m;
  m(0, 1) = Complex(0.0, 1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return Unitary2(m);
}

Unitary2 phase_unitary(double phi) {
  if (!std::isfinite(phi)) {
    throw std::invalid_argument("phase_unitary: phi must be finite");
  }
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, phi);
  return Unitary2(m);
}

StageStates run_stages(const MziConfig& cfg) {
  const PureState psi0 = cfg.input;
  const PureState psi1 = apply_unitary(beam_splitter_unitary(cfg.bs1), psi0);
  const PureState psi2 =
      apply_unitary(phase_unitary(cfg.phi), apply_unitary(mirror_unitary(), psi1));
  const PureState psi3 = apply_unitary(beam_splitter_unitary(cfg.bs2), psi2);
  return StageStates{psi0, psi1, psi2, psi3};
}

DetectionProbabilities detection_probabilities(const MziConfig& cfg) {
  const PureState psi3 = run_stages(cfg).psi3;
  return DetectionProbabilities{std::norm(psi3.a0()), std::norm(psi3.a1())};
}

double detection_probability_general(const MziConfig& cfg) {
  return detection_probabilities(cfg).p0;
}

PureState prepare_via_double_bmzi(const MziConfig& prep) {
  return run_stages(prep).psi3;
}

}  // namespace bmzi
