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

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oracle.hpp"

using namespace bmzi;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

MziConfig config(double theta1, double theta2, double phi = 0.0) {
  MziConfig cfg;
  cfg.bs1 = BeamSplitter(theta1);
  cfg.bs2 = BeamSplitter(theta2);
  cfg.phi = phi;
  return cfg;
}

DensityMatrix rho2_of(const MziConfig& cfg) {
  return density_of(run_stages(cfg).psi2);
}

MziConfig from_t_squared(double t1_sq, double t2_sq, double phi = 0.0) {
  return config(std::acos(std::sqrt(t1_sq)), std::acos(std::sqrt(t2_sq)), phi);
}

// The prepared uniform-superposition input of the two-interferometer setup:
// a balanced preparation stage with phi = pi/2 outputs equal amplitudes.
PureState prepared_uniform_input() {
  return prepare_via_double_bmzi(config(kPi / 4.0, kPi / 4.0, kPi / 2.0));
}

}  // namespace

TEST_CASE("l1_coherence") {
  CHECK(l1_coherence(density_of(PureState::basis0())) < kAssertTol);
  CHECK(l1_coherence(rho2_of(config(kPi / 4.0, 0.3))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l1_coherence(rho2_of(from_t_squared(0.8, 0.5))) ==
        doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("re_coherence and vn_predictability against the closed forms") {
  SUBCASE("landmark points") {
    CHECK(re_coherence(rho2_of(config(kPi / 4.0, 0.8))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(re_coherence(rho2_of(config(0.0, 0.8))) < kAssertTol);
    CHECK(re_coherence(rho2_of(from_t_squared(0.8, 0.5))) ==
          doctest::Approx(0.7219280948873623).epsilon(1e-12));

    CHECK(vn_predictability(rho2_of(config(kPi / 4.0, 0.8))) < kAssertTol);
    CHECK(vn_predictability(rho2_of(config(0.0, 0.8))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vn_predictability(rho2_of(from_t_squared(0.8, 0.5))) ==
          doctest::Approx(0.2780719051126377).epsilon(1e-12));
  }

  SUBCASE("closed forms hold across theta1") {
    const int n = 101;
    for (int i = 0; i < n; ++i) {
      const double th1 = kPi / 2.0 * i / (n - 1);
      const DensityMatrix rho = rho2_of(config(th1, 0.7, 1.3));
      const double t1 = std::cos(th1), r1 = std::sin(th1);
      CHECK(std::abs(re_coherence(rho) - oracle::cre_closed(t1, r1)) < kAssertTol);
      CHECK(std::abs(vn_predictability(rho) - oracle::pvn_closed(t1, r1)) < kAssertTol);
    }
  }
}

TEST_CASE("gy_predictability") {
  CHECK(gy_predictability(BeamSplitter::balanced()) < kAssertTol);
  CHECK(gy_predictability(BeamSplitter(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gy_predictability(BeamSplitter(std::acos(std::sqrt(0.8)))) ==
        doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("visibility_analytic") {
  SUBCASE("equal splitters give V0 = 1") {
    for (double th : {0.05, 0.4, kPi / 4.0, 1.3}) {
      CHECK(visibility_analytic(config(th, th), DetectorChoice::D0) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("balanced first splitter gives V0 = V1 = 2 T2 R2") {
    const double t2 = std::sqrt(3.0) / 2.0;
    const MziConfig cfg = config(kPi / 4.0, std::acos(t2));
    const double want = std::sqrt(3.0) / 2.0;
    CHECK(visibility_analytic(cfg, DetectorChoice::D0) ==
          doctest::Approx(want).epsilon(1e-12));
    CHECK(visibility_analytic(cfg, DetectorChoice::D1) ==
          doctest::Approx(want).epsilon(1e-12));

    // The whole T2 profile follows 2 T2 R2.
    const int n = 21;
    for (int i = 0; i < n; ++i) {
      const double trans2 = static_cast<double>(i) / (n - 1);
      const MziConfig row = config(kPi / 4.0, std::acos(trans2));
      const double profile = 2.0 * trans2 * std::sqrt(1.0 - trans2 * trans2);
      try {
        CHECK(std::abs(visibility_analytic(row, DetectorChoice::D0) - profile) <
              kAssertTol);
        CHECK(std::abs(visibility_analytic(row, DetectorChoice::D1) - profile) <
              kAssertTol);
      } catch (const UndefinedVisibility&) {
        CHECK(false);  // a balanced splitter leaves both defined everywhere
      }
    }
  }

  SUBCASE("biased example T1^2 = 0.8, T2^2 = 0.5") {
    CHECK(visibility_analytic(from_t_squared(0.8, 0.5), DetectorChoice::D0) ==
          doctest::Approx(0.8).epsilon(1e-12));
  }

  SUBCASE("undefined corners raise") {
    CHECK_THROWS_AS(visibility_analytic(config(0.0, 0.0), DetectorChoice::D0),
                    UndefinedVisibility);
    CHECK_THROWS_AS(visibility_analytic(config(kPi / 2.0, kPi / 2.0), DetectorChoice::D0),
                    UndefinedVisibility);
    CHECK_THROWS_AS(visibility_analytic(config(0.0, kPi / 2.0), DetectorChoice::D1),
                    UndefinedVisibility);
    CHECK_THROWS_AS(visibility_analytic(config(kPi / 2.0, 0.0), DetectorChoice::D1),
                    UndefinedVisibility);
    // The D0 corner is fine for D1 and vice versa.
    CHECK_NOTHROW(visibility_analytic(config(0.0, 0.0), DetectorChoice::D1));
  }

  SUBCASE("closed form requires the |0> input") {
    MziConfig cfg = config(0.4, 0.9);
    cfg.input = PureState(kInvSqrt2, kInvSqrt2);
    CHECK_THROWS_AS(visibility_analytic(cfg, DetectorChoice::D0), std::domain_error);
  }
}

TEST_CASE("biased_predictability") {
  SUBCASE("equal splitters give P0 = 0") {
    for (double th : {0.05, 0.4, 1.3}) {
      CHECK(biased_predictability(config(th, th), DetectorChoice::D0) < kAssertTol);
    }
  }

  SUBCASE("balanced second splitter reduces to the population imbalance") {
    const int n = 64;
    for (int i = 1; i < n; ++i) {
      const double th1 = kPi / 2.0 * i / n;
      const MziConfig cfg = config(th1, kPi / 4.0);
      CHECK(std::abs(biased_predictability(cfg, DetectorChoice::D0) -
                     gy_predictability(cfg.bs1)) < kAssertTol);
    }
  }

  SUBCASE("biased example with the complementarity identity") {
    const MziConfig cfg = from_t_squared(0.8, 0.5);
    const double p0 = biased_predictability(cfg, DetectorChoice::D0);
    const double v0 = visibility_analytic(cfg, DetectorChoice::D0);
    CHECK(p0 == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p0 * p0 + v0 * v0 == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("P^2 + V^2 = 1 on a dense grid for both detectors") {
    const int n = 49;
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const MziConfig cfg = config(kPi / 2.0 * a / n, kPi / 2.0 * b / n);
        for (DetectorChoice det : {DetectorChoice::D0, DetectorChoice::D1}) {
          try {
            const double v = visibility_analytic(cfg, det);
            const double p = biased_predictability(cfg, det);
            CHECK(std::abs(p * p + v * v - 1.0) < kAssertTol);
          } catch (const UndefinedVisibility&) {
            // corner rows carry no identity
          }
        }
      }
    }
  }
}

TEST_CASE("V0 = V1 exactly when a splitter is balanced") {
  SUBCASE("balanced first or second splitter forces equality") {
    for (double other : {0.2, 0.9, 1.4}) {
      const MziConfig a = config(kPi / 4.0, other);
      CHECK(std::abs(visibility_analytic(a, DetectorChoice::D0) -
                     visibility_analytic(a, DetectorChoice::D1)) < kAssertTol);
      const MziConfig b = config(other, kPi / 4.0);
      CHECK(std::abs(visibility_analytic(b, DetectorChoice::D0) -
                     visibility_analytic(b, DetectorChoice::D1)) < kAssertTol);
    }
  }

  SUBCASE("randomized counterexample search away from balance") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, kPi / 2.0);
    int checked = 0;
    while (checked < 2000) {
      const double th1 = angle(rng), th2 = angle(rng);
      const double imbalance1 = std::abs(std::cos(th1) - std::sin(th1));
      const double imbalance2 = std::abs(std::cos(th2) - std::sin(th2));
      if (imbalance1 < 1e-3 || imbalance2 < 1e-3) continue;
      const MziConfig cfg = config(th1, th2);
      try {
        const double v0 = visibility_analytic(cfg, DetectorChoice::D0);
        const double v1 = visibility_analytic(cfg, DetectorChoice::D1);
        CHECK(std::abs(v0 - v1) > kAssertTol);
        ++checked;
      } catch (const UndefinedVisibility&) {
      }
    }
  }
}

TEST_CASE("balanced second splitter bridges visibility and l1 coherence") {
  const int n = 80;
  for (int i = 1; i < n; ++i) {
    const double th1 = kPi / 2.0 * i / n;
    const MziConfig cfg = config(th1, kPi / 4.0, 0.6);
    CHECK(std::abs(visibility_analytic(cfg, DetectorChoice::D0) -
                   l1_coherence(rho2_of(cfg))) < kAssertTol);
  }
}

TEST_CASE("coherence depends only on the state inside the interferometer") {
  SUBCASE("re_coherence and vn_predictability are invariant in theta2") {
    for (double th1 : {0.3, kPi / 4.0, 1.2}) {
      const double base_c = re_coherence(rho2_of(config(th1, 0.1, 0.9)));
      const double base_p = vn_predictability(rho2_of(config(th1, 0.1, 0.9)));
      for (double th2 : {0.0, 0.5, 1.0, kPi / 2.0}) {
        const MziConfig cfg = config(th1, th2, 0.9);
        CHECK(std::abs(re_coherence(rho2_of(cfg)) - base_c) < kAssertTol);
        CHECK(std::abs(vn_predictability(rho2_of(cfg)) - base_p) < kAssertTol);
      }
    }
  }

  SUBCASE("the visibility is not: a theta2 change moves V0 by more than 0.1") {
    const MziConfig near = config(kPi / 4.0, kPi / 4.0);
    const MziConfig far = config(kPi / 4.0, 0.2);
    const double v_near = visibility_analytic(near, DetectorChoice::D0);
    const double v_far = visibility_analytic(far, DetectorChoice::D0);
    CHECK(std::abs(v_near - v_far) > 0.1);
    CHECK(std::abs(re_coherence(rho2_of(near)) - re_coherence(rho2_of(far))) < kAssertTol);
  }
}

TEST_CASE("prepared uniform input: coherence fixed, visibility follows BBS2") {
  const PureState input = prepared_uniform_input();
  for (double th2 : {0.2, 0.7, kPi / 4.0, 1.3}) {
    MziConfig cfg = config(kPi / 4.0, th2);
    cfg.input = input;
    const DensityMatrix rho2 = rho2_of(cfg);
    CHECK(re_coherence(rho2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vn_predictability(rho2) < kAssertTol);

    const double want = 2.0 * std::cos(th2) * std::sin(th2);
    CHECK(std::abs(visibility_numeric(cfg, DetectorChoice::D0, 720) - want) < 1e-6);
    CHECK(std::abs(visibility_numeric(cfg, DetectorChoice::D1, 720) - want) < 1e-6);
  }
}

TEST_CASE("weighted_visibility") {
  CHECK(weighted_visibility(config(kPi / 4.0, kPi / 4.0), DetectorChoice::D0) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const double theta = std::acos(std::sqrt(0.9));
  CHECK(weighted_visibility(config(theta, theta), DetectorChoice::D0) ==
        doctest::Approx(0.36).epsilon(1e-12));

  CHECK(weighted_visibility(config(0.0, 1.0), DetectorChoice::D0) < kAssertTol);
}

TEST_CASE("visibility_numeric") {
  SUBCASE("balanced interferometer sweeps the full fringe") {
    CHECK(std::abs(visibility_numeric(config(kPi / 4.0, kPi / 4.0), DetectorChoice::D0, 360) -
                   1.0) < 1e-10);
  }

  SUBCASE("no interference term when the first splitter passes everything") {
    CHECK(visibility_numeric(config(0.0, 0.8), DetectorChoice::D0, 64) < 1e-12);
  }

  SUBCASE("grid bounds and degenerate signal") {
    CHECK_THROWS_AS(visibility_numeric(config(0.4, 0.4), DetectorChoice::D0, 7),
                    std::invalid_argument);
    CHECK_THROWS_AS(visibility_numeric(config(0.0, 0.0), DetectorChoice::D0, 64),
                    DegenerateSignal);
  }

  SUBCASE("agrees with the closed form at 720 points") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> angle(0.0, kPi / 2.0);
    for (int i = 0; i < 200; ++i) {
      const MziConfig cfg = config(angle(rng), angle(rng));
      for (DetectorChoice det : {DetectorChoice::D0, DetectorChoice::D1}) {
        try {
          const double analytic = visibility_analytic(cfg, det);
          CHECK(std::abs(visibility_numeric(cfg, det, 720) - analytic) < 1e-4);
        } catch (const UndefinedVisibility&) {
        }
      }
    }
  }
}

TEST_CASE("ccr_report") {
  SUBCASE("pure states saturate the complementarity identity") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 300; ++i) {
      const auto amps = oracle::random_pure_amplitudes(rng);
      const ComplementarityReport rep =
          ccr_report(density_of(PureState(amps[0], amps[1])));
      CHECK(std::abs(rep.residual) < 1e-10);
      CHECK(rep.entropy < 1e-10);
      CHECK(rep.coherence >= 0.0);
      CHECK(rep.coherence <= 1.0);
      CHECK(rep.predictability >= 0.0);
      CHECK(rep.predictability <= 1.0);
    }
  }

  SUBCASE("maximally mixed state") {
    Mat2 m;
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    const ComplementarityReport rep = ccr_report(DensityMatrix(m));
    CHECK(rep.coherence < kAssertTol);
    CHECK(rep.predictability < kAssertTol);
    CHECK(rep.entropy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.residual) < 1e-10);
  }

  SUBCASE("mixed state off the sphere") {
    const ComplementarityReport rep = ccr_report(density_from_bloch({0.3, 0.0, 0.4}));
    // Populations (0.7, 0.3); spectrum (0.75, 0.25).
    const double s_diag = oracle::h2(0.7);
    const double s_rho = oracle::h2(0.75);
    CHECK(rep.coherence == doctest::Approx(s_diag - s_rho).epsilon(1e-12));
    CHECK(rep.predictability == doctest::Approx(1.0 - s_diag).epsilon(1e-12));
    CHECK(rep.entropy == doctest::Approx(s_rho).epsilon(1e-12));
    // The three-term sum is the exact identity; the two-term relation is
    // strictly below saturation for mixed states.
    CHECK(std::abs(rep.residual) < 1e-10);
    CHECK(rep.coherence + rep.predictability < 1.0 - 1e-3);
  }
}
