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

#include "bmzi/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace bmzi {

namespace {

using Cell = std::optional<double>;

// The depolarizing channel commutes with the circuit unitaries, so it is
// applied once with the accumulated gate count.
constexpr int kGatesToPsi2 = kGateCountToPsi2;
constexpr int kGatesToPsi3 = kGateCountToPsi3;

double grid_value(double start, double stop, int steps, int i) {
  return start + (stop - start) * static_cast<double>(i) / (steps - 1);
}

MziConfig config_for(const SweepSpec& spec, double v) {
  MziConfig cfg = spec.fixed;
  switch (spec.variable) {
    case SweepVariable::Theta1:
      cfg.bs1 = BeamSplitter(v);
      break;
    case SweepVariable::Theta2:
      cfg.bs2 = BeamSplitter(v);
      break;
    case SweepVariable::Phi:
      cfg.phi = v;
      break;
    case SweepVariable::AlphaAngle:
      cfg.input = PureState(std::cos(v), std::sin(v));
      break;
  }
  switch (spec.couple) {
    case Coupling::None:
      break;
    case Coupling::Theta2EqualsTheta1:
      cfg.bs2 = cfg.bs1;
      break;
    case Coupling::Theta2ComplementsTheta1:
      cfg.bs2 = BeamSplitter(std::numbers::pi / 2.0 - cfg.bs1.theta());
      break;
  }
  return cfg;
}

bool has_basis0_input(const MziConfig& cfg) {
  return std::abs(cfg.input.a1()) <= kConstructTol;
}

Cell analytic_visibility_cell(const MziConfig& cfg, DetectorChoice det) {
  try {
    return visibility_analytic(cfg, det);
  } catch (const UndefinedVisibility&) {
    return std::nullopt;
  }
}

Cell numeric_visibility_cell(const MziConfig& cfg, DetectorChoice det, int grid) {
  try {
    return visibility_numeric(cfg, det, grid);
  } catch (const DegenerateSignal&) {
    return std::nullopt;
  }
}

Cell predictability_cell(const MziConfig& cfg, DetectorChoice det) {
  if (!has_basis0_input(cfg)) return std::nullopt;
  try {
    return biased_predictability(cfg, det);
  } catch (const UndefinedVisibility&) {
    return std::nullopt;
  }
}

// Fringe accumulator. The detector probability is a + b cos(phi) + c sin(phi),
// so a uniform full-period scan gives the least-squares coefficients directly
// and the fitted fringe extrema are a +- sqrt(b^2 + c^2).
struct Fringe {
  double sum = 0, sum_cos = 0, sum_sin = 0;
  int n = 0;

  void add(double phi, double v) {
    sum += v;
    sum_cos += v * std::cos(phi);
    sum_sin += v * std::sin(phi);
    ++n;
  }
  Cell visibility() const {
    const double mid = sum / n;
    const double amp = 2.0 * std::hypot(sum_cos, sum_sin) / n;
    if (mid + amp < 1e-15) return std::nullopt;
    return std::clamp(amp / mid, 0.0, 1.0);
  }
};

struct VisibilityScan {
  Cell v0_mit, v1_mit, v0_raw, v1_raw;
};

// Phase scan of detection frequencies for the simulated visibility; the
// same counts feed the mitigated and the raw estimates.
VisibilityScan scan_visibility(MziConfig cfg, int points, std::uint64_t shots,
                               const NoiseModel& noise, std::uint64_t seed,
                               const ConfusionMatrix& cm) {
  Fringe m0, m1, r0, r1;
  for (int k = 0; k < points; ++k) {
    cfg.phi = 2.0 * std::numbers::pi * k / points;
    const DensityMatrix rho3 = depolarize(density_of(run_stages(cfg).psi3),
                                          noise.depolarizing_p, kGatesToPsi3);
    const Counts c = sample_counts(rho3, Basis::Z, shots, noise, derive_seed(seed, k));
    const double f0 = static_cast<double>(c.n0) / static_cast<double>(c.shots);
    r0.add(cfg.phi, f0);
    r1.add(cfg.phi, 1.0 - f0);
    const auto [q0, q1] = mitigate(c, cm);
    m0.add(cfg.phi, q0);
    m1.add(cfg.phi, q1);
  }
  return VisibilityScan{m0.visibility(), m1.visibility(), r0.visibility(),
                        r1.visibility()};
}

struct TomoPair {
  TomographyResult mitigated;
  TomographyResult raw;
};

TomoPair simulate_tomography(const DensityMatrix& truth, std::uint64_t shots,
                             const NoiseModel& noise, std::uint64_t seed,
                             const ConfusionMatrix& cm) {
  const Counts cx = sample_counts(truth, Basis::X, shots, noise, derive_seed(seed, 0));
  const Counts cy = sample_counts(truth, Basis::Y, shots, noise, derive_seed(seed, 1));
  const Counts cz = sample_counts(truth, Basis::Z, shots, noise, derive_seed(seed, 2));
  return TomoPair{reconstruct(cx, cy, cz, cm), reconstruct(cx, cy, cz)};
}

double bloch_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const BlochVector u = bloch_vector(a);
  const BlochVector v = bloch_vector(b);
  return BlochVector{u.x - v.x, u.y - v.y, u.z - v.z}.norm();
}

void validate_common(int steps, const char* what) {
  if (steps < 2) {
    throw std::invalid_argument(std::string(what) + ": steps must be >= 2");
  }
}

}  // namespace

//=========================================================================
// SweepTable
//=========================================================================

SweepTable::SweepTable(std::vector<Series> columns) : columns_(std::move(columns)) {
  for (const Series& s : columns_) {
    if (s.values.size() != columns_.front().values.size()) {
      throw std::invalid_argument("SweepTable: columns must have equal length");
    }
  }
}

std::size_t SweepTable::row_count() const {
  return columns_.empty() ? 0 : columns_.front().values.size();
}

bool SweepTable::has_column(std::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Series& s) { return s.name == name; });
}

const Series& SweepTable::column(std::string_view name) const {
  for (const Series& s : columns_) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("SweepTable: no column named " + std::string(name));
}

//=========================================================================
// Sweeps
//=========================================================================

SweepTable run_sweep(const SweepSpec& spec) {
  validate_common(spec.steps, "run_sweep");
  if (!(spec.start < spec.stop)) {
    throw std::invalid_argument("run_sweep: start must be less than stop");
  }
  if (spec.couple != Coupling::None && spec.variable == SweepVariable::Theta2) {
    throw std::invalid_argument("run_sweep: theta2 sweep conflicts with coupling");
  }
  if (spec.shots && *spec.shots < 1) {
    throw std::invalid_argument("run_sweep: shots must be >= 1");
  }
  if (spec.shots && (spec.phi_scan_points < 8 || spec.calibration_shots < 1)) {
    throw std::invalid_argument(
        "run_sweep: need phi_scan_points >= 8 and calibration_shots >= 1");
  }

  const bool stochastic = spec.shots.has_value();
  std::vector<std::string> names;
  if (spec.variable == SweepVariable::AlphaAngle) names.push_back("alpha_angle");
  for (const char* n : {"theta1", "theta2", "phi", "p0", "p1", "V0", "V1", "P0",
                        "P_gy", "C_l1", "C_re", "P_vn", "S_vn", "ccr_residual"}) {
    names.push_back(n);
  }
  if (stochastic) {
    for (const char* n : {"p0_sim", "p1_sim", "V0_sim", "V1_sim", "C_l1_sim",
                          "C_re_sim", "P_vn_sim", "S_vn_sim", "ccr_residual_sim"}) {
      names.push_back(n);
    }
  }

  std::vector<Series> cols;
  cols.reserve(names.size());
  for (auto& n : names) {
    cols.push_back(Series{n, {}});
    cols.back().values.reserve(spec.steps);
  }

  std::optional<ConfusionMatrix> cm;
  if (stochastic) {
    cm = calibrate_confusion(spec.noise, spec.calibration_shots,
                             derive_seed(spec.seed, 0));
  }

  for (int i = 0; i < spec.steps; ++i) {
    const double v = grid_value(spec.start, spec.stop, spec.steps, i);
    const MziConfig cfg = config_for(spec, v);
    const StageStates st = run_stages(cfg);
    const DensityMatrix rho2 = density_of(st.psi2);
    const ComplementarityReport rep = ccr_report(rho2);

    std::vector<Cell> row;
    if (spec.variable == SweepVariable::AlphaAngle) row.push_back(v);
    row.push_back(cfg.bs1.theta());
    row.push_back(cfg.bs2.theta());
    row.push_back(cfg.phi);
    row.push_back(std::norm(st.psi3.a0()));
    row.push_back(std::norm(st.psi3.a1()));
    if (has_basis0_input(cfg)) {
      row.push_back(analytic_visibility_cell(cfg, DetectorChoice::D0));
      row.push_back(analytic_visibility_cell(cfg, DetectorChoice::D1));
    } else {
      row.push_back(numeric_visibility_cell(cfg, DetectorChoice::D0, spec.numeric_grid));
      row.push_back(numeric_visibility_cell(cfg, DetectorChoice::D1, spec.numeric_grid));
    }
    row.push_back(predictability_cell(cfg, DetectorChoice::D0));
    row.push_back(gy_predictability(cfg.bs1));
    row.push_back(l1_coherence(rho2));
    row.push_back(rep.coherence);
    row.push_back(rep.predictability);
    row.push_back(rep.entropy);
    row.push_back(rep.residual);

    if (stochastic) {
      const std::uint64_t row_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i) + 1);
      const DensityMatrix rho2_noisy =
          depolarize(rho2, spec.noise.depolarizing_p, kGatesToPsi2);
      const TomoPair tomo =
          simulate_tomography(rho2_noisy, *spec.shots, spec.noise, row_seed, *cm);
      const DensityMatrix rho3_noisy = depolarize(
          density_of(st.psi3), spec.noise.depolarizing_p, kGatesToPsi3);
      const Counts cdet = sample_counts(rho3_noisy, Basis::Z, *spec.shots,
                                        spec.noise, derive_seed(row_seed, 3));
      const auto [p0s, p1s] = mitigate(cdet, *cm);
      const VisibilityScan scan =
          scan_visibility(cfg, spec.phi_scan_points, *spec.shots, spec.noise,
                          derive_seed(row_seed, 4), *cm);
      const ComplementarityReport sim_rep = ccr_report(tomo.mitigated.rho);
      row.push_back(p0s);
      row.push_back(p1s);
      row.push_back(scan.v0_mit);
      row.push_back(scan.v1_mit);
      row.push_back(l1_coherence(tomo.mitigated.rho));
      row.push_back(sim_rep.coherence);
      row.push_back(sim_rep.predictability);
      row.push_back(sim_rep.entropy);
      row.push_back(sim_rep.residual);
    }

    for (std::size_t c = 0; c < row.size(); ++c) cols[c].values.push_back(row[c]);
  }
  return SweepTable(std::move(cols));
}

std::pair<SweepTable, SweepTable> figure_fig2(int grid_n) {
  validate_common(grid_n, "figure_fig2");
  Series t1{"T1", {}}, t2{"T2", {}};
  Series v0{"V0", {}}, v1{"V1", {}};
  for (int i = 0; i < grid_n; ++i) {
    const double trans1 = grid_value(0.0, 1.0, grid_n, i);
    for (int j = 0; j < grid_n; ++j) {
      const double trans2 = grid_value(0.0, 1.0, grid_n, j);
      MziConfig cfg;
      cfg.bs1 = BeamSplitter(std::acos(trans1));
      cfg.bs2 = BeamSplitter(std::acos(trans2));
      t1.values.push_back(trans1);
      t2.values.push_back(trans2);
      v0.values.push_back(analytic_visibility_cell(cfg, DetectorChoice::D0));
      v1.values.push_back(analytic_visibility_cell(cfg, DetectorChoice::D1));
    }
  }
  return {SweepTable({t1, t2, v0}), SweepTable({t1, t2, v1})};
}

SweepTable figure_fig4(int steps, std::uint64_t shots, std::uint64_t seed) {
  return figure_fig4(steps, shots, seed, NoiseModel{});
}

SweepTable figure_fig4(int steps, std::uint64_t shots, std::uint64_t seed,
                       const NoiseModel& noise) {
  validate_common(steps, "figure_fig4");
  if (shots < 1) {
    throw std::invalid_argument("figure_fig4: shots must be >= 1");
  }
  std::vector<Series> cols;
  for (const char* n :
       {"theta", "C_re", "P_vn", "V0", "C_re_sim", "P_vn_sim", "V0_sim",
        "C_re_raw", "P_vn_raw", "V0_raw", "bloch_err_sim", "bloch_err_raw"}) {
    cols.push_back(Series{n, {}});
    cols.back().values.reserve(steps);
  }

  const ConfusionMatrix cm =
      calibrate_confusion(noise, std::uint64_t{1} << 20, derive_seed(seed, 0));
  constexpr int kScanPoints = 96;

  // The experimental evaluation treats the in-interferometer state as pure:
  // coherence and predictability are read off the tomographic populations,
  // so the simulated points use S(rho_diag) and 1 - S(rho_diag).
  const auto population_coherence = [](const DensityMatrix& rho) {
    return vn_entropy(dephase(rho));
  };

  for (int i = 0; i < steps; ++i) {
    const double theta = grid_value(0.0, std::numbers::pi / 2.0, steps, i);
    MziConfig cfg;
    cfg.bs1 = BeamSplitter(theta);
    cfg.bs2 = cfg.bs1;
    cfg.phi = 0.0;

    const DensityMatrix rho2 = density_of(run_stages(cfg).psi2);
    const std::uint64_t row_seed = derive_seed(seed, static_cast<std::uint64_t>(i) + 1);
    const DensityMatrix rho2_noisy =
        depolarize(rho2, noise.depolarizing_p, kGatesToPsi2);
    const TomoPair tomo = simulate_tomography(rho2_noisy, shots, noise, row_seed, cm);
    const VisibilityScan scan = scan_visibility(cfg, kScanPoints, shots, noise,
                                                derive_seed(row_seed, 4), cm);

    std::size_t c = 0;
    cols[c++].values.push_back(theta);
    cols[c++].values.push_back(re_coherence(rho2));
    cols[c++].values.push_back(vn_predictability(rho2));
    cols[c++].values.push_back(analytic_visibility_cell(cfg, DetectorChoice::D0));
    cols[c++].values.push_back(population_coherence(tomo.mitigated.rho));
    cols[c++].values.push_back(vn_predictability(tomo.mitigated.rho));
    cols[c++].values.push_back(scan.v0_mit);
    cols[c++].values.push_back(population_coherence(tomo.raw.rho));
    cols[c++].values.push_back(vn_predictability(tomo.raw.rho));
    cols[c++].values.push_back(scan.v0_raw);
    cols[c++].values.push_back(bloch_distance(tomo.mitigated.rho, rho2));
    cols[c++].values.push_back(bloch_distance(tomo.raw.rho, rho2));
  }
  return SweepTable(std::move(cols));
}

//=========================================================================
// Emission
//=========================================================================

std::string format_double(double v) {
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void emit(const SweepTable& table, TableFormat format, std::ostream& out) {
  if (format == TableFormat::Csv) {
    const auto& cols = table.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      out << cols[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out << ',';
        if (cols[c].values[r]) out << format_double(*cols[c].values[r]);
      }
      out << '\n';
    }
  } else {
    nlohmann::ordered_json columns = nlohmann::ordered_json::object();
    for (const Series& s : table.columns()) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& v : s.values) {
        if (v) {
          arr.push_back(*v);
        } else {
          arr.push_back(nullptr);
        }
      }
      columns[s.name] = std::move(arr);
    }
    nlohmann::ordered_json root;
    root["columns"] = std::move(columns);
    out << root.dump(2) << '\n';
  }
  if (!out) {
    throw std::runtime_error("emit: stream write failed");
  }
}

void emit(const SweepTable& table, TableFormat format,
          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("emit: cannot open " + path.string() + " for writing");
  }
  try {
    emit(table, format, out);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("emit: write to " + path.string() + " failed");
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("emit: write to " + path.string() + " failed");
  }
}

}  // namespace bmzi
