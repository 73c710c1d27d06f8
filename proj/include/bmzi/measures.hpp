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

#ifndef BMZI_MEASURES_HPP_
#define BMZI_MEASURES_HPP_

#include <stdexcept>

#include "bmzi/optics.hpp"
#include "bmzi/qstate.hpp"

namespace bmzi {

enum class DetectorChoice { D0, D1 };

// Raised where a fringe visibility has no value: the detector's probability
// is identically zero over phi, so there is no interference pattern.
class UndefinedVisibility : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by the numeric visibility when max + min of the scanned signal is
// below measurement resolution.
class DegenerateSignal : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The three entropic quantities of a state and the deviation of their sum
// from 1 bit (log2 of the dimension).
struct ComplementarityReport {
  double coherence = 0;       // C_re, bits
  double predictability = 0;  // P_vn, bits
  double entropy = 0;         // S_vn, bits
  double residual = 0;        // coherence + predictability + entropy - 1
};

// l1-norm coherence 2|rho01|.
double l1_coherence(const DensityMatrix& rho);

// Relative entropy of coherence S(rho_diag) - S(rho), in bits.
double re_coherence(const DensityMatrix& rho);

// 1 - S(rho_diag), in bits.
double vn_predictability(const DensityMatrix& rho);

// |T^2 - R^2| of the first beam splitter.
double gy_predictability(const BeamSplitter& bs1);

// Fringe visibility (max - min)/(max + min) of Pr(D_j) over phi, in closed
// form for input |0>:
//   V0 = 2 T1 R1 T2 R2 / (T1^2 R2^2 + R1^2 T2^2)
//   V1 = 2 T1 R1 T2 R2 / (T1^2 T2^2 + R1^2 R2^2)
// Throws UndefinedVisibility when the denominator vanishes.
double visibility_analytic(const MziConfig& cfg, DetectorChoice det);

// Predictability companion of the visibility above; satisfies P^2 + V^2 = 1
// wherever both are defined. For D0:
//   P0 = |R1^2 T2^2 - R2^2 T1^2| / (R1^2 T2^2 + R2^2 T1^2)
double biased_predictability(const MziConfig& cfg, DetectorChoice det);

// Visibility weighted by the phi-maximum of Pr(D_j).
double weighted_visibility(const MziConfig& cfg, DetectorChoice det);

// (max - min)/(max + min) of Pr(D_j) over a uniform closed phi grid on
// [0, 2 pi). Works for arbitrary input states; cfg.phi is ignored.
double visibility_numeric(const MziConfig& cfg, DetectorChoice det, int grid_points);

// C_re, P_vn and S_vn of rho together with the deviation of their sum from 1.
ComplementarityReport ccr_report(const DensityMatrix& rho);

}  // namespace bmzi

#endif  // BMZI_MEASURES_HPP_
