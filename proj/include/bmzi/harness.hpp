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

#ifndef BMZI_HARNESS_HPP_
#define BMZI_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bmzi/measures.hpp"
#include "bmzi/optics.hpp"
#include "bmzi/tomo.hpp"

namespace bmzi {

// Gate counts of the simulated circuit (RX, Z, Y, P, then the second RX);
// the per-gate depolarizing channel accumulates over these.
inline constexpr int kGateCountToPsi2 = 4;
inline constexpr int kGateCountToPsi3 = 5;

enum class SweepVariable { Theta1, Theta2, Phi, AlphaAngle };

// Coupled parameters used by the paper-style sweeps: BBS2 follows BBS1
// either identically or with the complementary angle (T1 = R2 case).
enum class Coupling { None, Theta2EqualsTheta1, Theta2ComplementsTheta1 };

struct SweepSpec {
  SweepVariable variable = SweepVariable::Theta1;
  double start = 0.0;
  double stop = std::numbers::pi / 2.0;
  int steps = 33;
  MziConfig fixed;
  Coupling couple = Coupling::None;

  // Stochastic columns are produced iff shots is set.
  std::optional<std::uint64_t> shots;
  NoiseModel noise;
  std::uint64_t seed = 0;

  // The confusion matrix is estimated once per sweep. Readout mitigation
  // needs a calibration far tighter than the per-point statistics, so the
  // default is much larger than typical experiment shots.
  std::uint64_t calibration_shots = 1 << 20;

  int phi_scan_points = 96;  // phase grid for the simulated visibility scan
  int numeric_grid = 720;    // fallback visibility grid for non-|0> inputs
};

struct Series {
  std::string name;
  std::vector<std::optional<double>> values;
};

// Rectangular table of named columns; empty cells are explicit nulls.
class SweepTable {
 public:
  SweepTable() = default;
  explicit SweepTable(std::vector<Series> columns);

  std::size_t row_count() const;
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<Series>& columns() const { return columns_; }
  bool has_column(std::string_view name) const;
  const Series& column(std::string_view name) const;

 private:
  std::vector<Series> columns_;
};

enum class TableFormat { Csv, Json };

// Shortest 17-significant-digit representation; round-trips bit exactly.
std::string format_double(double v);

SweepTable run_sweep(const SweepSpec& spec);

// V0 and V1 tables over a (T1, T2) grid on [0,1]^2. Undefined corners are
// nulls: (0,0) and (1,1) for V0, (0,1) and (1,0) for V1.
std::pair<SweepTable, SweepTable> figure_fig2(int grid_n);

// theta1 = theta2 = theta sweep over [0, pi/2] with input |0>: theoretical
// C_re, P_vn, V0 plus simulated-experiment columns (tomography of the
// in-interferometer state for coherence/predictability, a mitigated phase
// scan of detection frequencies for visibility) and raw counterparts.
SweepTable figure_fig4(int steps, std::uint64_t shots, std::uint64_t seed);
SweepTable figure_fig4(int steps, std::uint64_t shots, std::uint64_t seed,
                       const NoiseModel& noise);

void emit(const SweepTable& table, TableFormat format, std::ostream& out);
void emit(const SweepTable& table, TableFormat format,
          const std::filesystem::path& path);

}  // namespace bmzi

#endif  // BMZI_HARNESS_HPP_
