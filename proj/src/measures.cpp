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

#include "bmzi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bmzi {

namespace {

// A visibility denominator is a sum of squared amplitude products. Values
// below this floor only occur where a T or R coefficient is zero up to the
// rounding of cos(pi/2), i.e. at the undefined corners.
constexpr double kDenominatorFloor = 1e-24;

struct Coefficients {
  double t1, r1, t2, r2;
};

Coefficients coefficients(const MziConfig& cfg) {
  return {cfg.bs1.transmission(), cfg.bs1.reflection(), cfg.bs2.transmission(),
          cfg.bs2.reflection()};
}

void require_basis0_input(const MziConfig& cfg, const char* what) {
  if (std::abs(cfg.input.a1()) > kConstructTol) {
    throw std::domain_error(std::string(what) +
                            ": closed form requires the |0> input state");
  }
}

double detector_denominator(const Coefficients& c, DetectorChoice det) {
  return det == DetectorChoice::D0
             ? c.t1 * c.t1 * c.r2 * c.r2 + c.r1 * c.r1 * c.t2 * c.t2
             : c.t1 * c.t1 * c.t2 * c.t2 + c.r1 * c.r1 * c.r2 * c.r2;
}

}  // namespace

double l1_coherence(const DensityMatrix& rho) {
  return std::clamp(2.0 * std::abs(rho.at(0, 1)), 0.0, 1.0);
}

double re_coherence(const DensityMatrix& rho) {
  return std::clamp(vn_entropy(dephase(rho)) - vn_entropy(rho), 0.0, 1.0);
}

double vn_predictability(const DensityMatrix& rho) {
  return std::clamp(1.0 - vn_entropy(dephase(rho)), 0.0, 1.0);
}

double gy_predictability(const BeamSplitter& bs1) {
  const double t = bs1.transmission();
  const double r = bs1.reflection();
  return std::clamp(std::abs(t * t - r * r), 0.0, 1.0);
}

double visibility_analytic(const MziConfig& cfg, DetectorChoice det) {
  require_basis0_input(cfg, "visibility_analytic");
  const Coefficients c = coefficients(cfg);
  const double den = detector_denominator(c, det);
  if (den < kDenominatorFloor) {
    throw UndefinedVisibility("visibility is not defined: Pr(D_j) has no fringe");
  }
  return std::clamp(2.0 * c.t1 * c.r1 * c.t2 * c.r2 / den, 0.0, 1.0);
}

double biased_predictability(const MziConfig& cfg, DetectorChoice det) {
  require_basis0_input(cfg, "biased_predictability");
  const Coefficients c = coefficients(cfg);
  const double den = detector_denominator(c, det);
  if (den < kDenominatorFloor) {
    throw UndefinedVisibility("predictability companion is not defined here");
  }
  const double num = det == DetectorChoice::D0
                         ? std::abs(c.r1 * c.r1 * c.t2 * c.t2 - c.r2 * c.r2 * c.t1 * c.t1)
                         : std::abs(c.t1 * c.t1 * c.t2 * c.t2 - c.r1 * c.r1 * c.r2 * c.r2);
  return std::clamp(num / den, 0.0, 1.0);
}

double weighted_visibility(const MziConfig& cfg, DetectorChoice det) {
  const Coefficients c = coefficients(cfg);
  const double cross = 2.0 * c.t1 * c.r1 * c.t2 * c.r2;
  // Pr(D0) peaks at cos(phi) = 1, Pr(D1) at cos(phi) = -1.
  const double p_max = detector_denominator(c, det) + cross;
  return visibility_analytic(cfg, det) * p_max;
}

double visibility_numeric(const MziConfig& cfg, DetectorChoice det, int grid_points) {
  if (grid_points < 8) {
    throw std::invalid_argument("visibility_numeric: need at least 8 grid points");
  }
  double lo = 1.0, hi = 0.0;
  MziConfig scan = cfg;
  for (int k = 0; k < grid_points; ++k) {
    scan.phi = 2.0 * std::numbers::pi * k / grid_points;
    const DetectionProbabilities p = detection_probabilities(scan);
    const double v = det == DetectorChoice::D0 ? p.p0 : p.p1;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi + lo < 1e-15) {
    throw DegenerateSignal("visibility_numeric: signal is zero over the phase scan");
  }
  return (hi - lo) / (hi + lo);
}

ComplementarityReport ccr_report(const DensityMatrix& rho) {
  ComplementarityReport rep;
  rep.coherence = re_coherence(rho);
  rep.predictability = vn_predictability(rho);
  rep.entropy = vn_entropy(rho);
  rep.residual = rep.coherence + rep.predictability + rep.entropy - 1.0;
  return rep;
}

}  // namespace bmzi
