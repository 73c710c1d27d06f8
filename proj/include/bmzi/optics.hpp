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

#ifndef BMZI_OPTICS_HPP_
#define BMZI_OPTICS_HPP_

#include <cmath>

#include "bmzi/qstate.hpp"

namespace bmzi {

// Biased beam splitter with transmission T = cos(theta) and reflection
// R = sin(theta). The angle is the single stored parameter, so T^2 + R^2 = 1
// by construction.
class BeamSplitter {
 public:
  explicit BeamSplitter(double theta);

  // Converts a (T, R) pair through theta = atan2(R, T). Both coefficients
  // must be nonnegative and not both zero.
  static BeamSplitter from_coefficients(double transmission, double reflection);

  static BeamSplitter balanced();

  double theta() const { return theta_; }
  double transmission() const { return std::cos(theta_); }
  double reflection() const { return std::sin(theta_); }

 private:
  double theta_;
};

// One interferometer: input state, both beam splitters, and the
// phase-shifter setting on the |1> arm. phi is stored unreduced.
struct MziConfig {
  BeamSplitter bs1 = BeamSplitter::balanced();
  BeamSplitter bs2 = BeamSplitter::balanced();
  double phi = 0.0;
  PureState input = PureState::basis0();
};

// The state at each stage: psi0 input, psi1 after BBS1, psi2 after mirrors
// and phase-shifter, psi3 after BBS2.
struct StageStates {
  PureState psi0, psi1, psi2, psi3;
};

struct DetectionProbabilities {
  double p0 = 0, p1 = 0;
};

// [[cos(theta), i sin(theta)], [i sin(theta), cos(theta)]], i.e. R_X(-2 theta).
Unitary2 beam_splitter_unitary(const BeamSplitter& bs);

// Combined mirror action YZ = [[0, i], [i, 0]]: paths switch and pick up a
// pi/2 phase.
Unitary2 mirror_unitary();

// diag(1, e^{i phi}).
Unitary2 phase_unitary(double phi);

StageStates run_stages(const MziConfig& cfg);

// Born-rule probabilities |<j|psi3>|^2 for detectors D0 and D1. Valid for
// arbitrary normalized input.
DetectionProbabilities detection_probabilities(const MziConfig& cfg);

// Pr(D0) for an arbitrary input state alpha|0> + beta|1>.
double detection_probability_general(const MziConfig& cfg);

// Output state of a preparation interferometer, to be fed into the main one
// as its input.
PureState prepare_via_double_bmzi(const MziConfig& prep);

}  // namespace bmzi

#endif  // BMZI_OPTICS_HPP_
