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
//
// Command-line front end. All angles are radians. Values shared by several
// runs can be placed in a JSON config file (--config); explicit flags win.
// Exit codes: 0 success, 2 invalid arguments, 3 I/O failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmzi/harness.hpp"
#include "bmzi/measures.hpp"
#include "bmzi/optics.hpp"
#include "bmzi/qstate.hpp"
#include "bmzi/tomo.hpp"

namespace {

using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

struct ConfigFlags {
  double theta1 = kPi / 4.0;
  double theta2 = kPi / 4.0;
  double phi = 0.0;
  std::optional<double> alpha_angle;
  std::string input_amplitudes;  // "a0re,a0im,a1re,a1im"
  std::optional<double> prep_theta1, prep_theta2, prep_phi;
};

struct NoiseFlags {
  std::vector<double> readout;  // {e0, e1}
  double depolarizing = 0.0;
};

struct OutputFlags {
  std::string format;
  std::string path;
};

struct ConfigOptions {
  CLI::Option* theta1 = nullptr;
  CLI::Option* theta2 = nullptr;
  CLI::Option* phi = nullptr;
  CLI::Option* alpha_angle = nullptr;
  CLI::Option* input = nullptr;
  CLI::Option* prep_theta1 = nullptr;
  CLI::Option* prep_theta2 = nullptr;
  CLI::Option* prep_phi = nullptr;
};

ConfigOptions add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  ConfigOptions opts;
  opts.theta1 = cmd->add_option("--theta1", f.theta1, "BBS1 angle in [0, pi/2]");
  opts.theta2 = cmd->add_option("--theta2", f.theta2, "BBS2 angle in [0, pi/2]");
  opts.phi = cmd->add_option("--phi", f.phi, "phase-shifter setting");
  opts.alpha_angle = cmd->add_option("--alpha-angle", f.alpha_angle,
                                     "input cos(a)|0> + sin(a)|1>");
  opts.input = cmd->add_option("--input", f.input_amplitudes,
                               "input amplitudes a0re,a0im,a1re,a1im (normalized)");
  opts.prep_theta1 =
      cmd->add_option("--prep-theta1", f.prep_theta1, "preparation BBS1 angle");
  opts.prep_theta2 =
      cmd->add_option("--prep-theta2", f.prep_theta2, "preparation BBS2 angle");
  opts.prep_phi = cmd->add_option("--prep-phi", f.prep_phi, "preparation phase");
  return opts;
}

std::vector<double> parse_doubles(const std::string& text, std::size_t want,
                                  const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.size() != want) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(want) + " comma-separated values");
  }
  return out;
}

// Input precedence: --input, then --alpha-angle, then a preparation
// interferometer, then |0>.
bmzi::MziConfig build_config(const ConfigFlags& f) {
  bmzi::MziConfig cfg;
  cfg.bs1 = bmzi::BeamSplitter(f.theta1);
  cfg.bs2 = bmzi::BeamSplitter(f.theta2);
  cfg.phi = f.phi;
  if (!f.input_amplitudes.empty()) {
    const auto v = parse_doubles(f.input_amplitudes, 4, "--input");
    cfg.input = bmzi::PureState::normalized({v[0], v[1]}, {v[2], v[3]});
  } else if (f.alpha_angle) {
    cfg.input = bmzi::PureState(std::cos(*f.alpha_angle), std::sin(*f.alpha_angle));
  } else if (f.prep_theta1 || f.prep_theta2 || f.prep_phi) {
    bmzi::MziConfig prep;
    prep.bs1 = bmzi::BeamSplitter(f.prep_theta1.value_or(kPi / 4.0));
    prep.bs2 = bmzi::BeamSplitter(f.prep_theta2.value_or(kPi / 4.0));
    prep.phi = f.prep_phi.value_or(0.0);
    cfg.input = bmzi::prepare_via_double_bmzi(prep);
  }
  return cfg;
}

bmzi::NoiseModel build_noise(const NoiseFlags& f) {
  bmzi::NoiseModel noise;
  if (!f.readout.empty()) {
    if (f.readout.size() != 2) {
      throw std::invalid_argument("--noise-readout expects E0,E1");
    }
    noise.readout_e0 = f.readout[0];
    noise.readout_e1 = f.readout[1];
  }
  noise.depolarizing_p = f.depolarizing;
  return noise;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw std::runtime_error("cannot write " + path);
  }
}

bmzi::TableFormat table_format(const std::string& format) {
  if (format.empty() || format == "csv") return bmzi::TableFormat::Csv;
  if (format == "json") return bmzi::TableFormat::Json;
  throw std::invalid_argument("--format must be csv or json");
}

void emit_table(const bmzi::SweepTable& table, const OutputFlags& out) {
  if (out.path.empty()) {
    bmzi::emit(table, table_format(out.format), std::cout);
  } else {
    bmzi::emit(table, table_format(out.format), std::filesystem::path(out.path));
  }
}

// Scalar results as "name = value" lines or one JSON object.
class Report {
 public:
  void add(const std::string& name, std::optional<double> value) {
    items_.emplace_back(name, value);
  }
  void add(const std::string& name, double value) { add(name, std::optional(value)); }

  std::string render(const std::string& format) const {
    if (format == "json") {
      ordered_json j;
      for (const auto& [name, value] : items_) {
        if (value) {
          j[name] = *value;
        } else {
          j[name] = nullptr;
        }
      }
      return j.dump(2) + "\n";
    }
    if (!format.empty() && format != "text") {
      throw std::invalid_argument("--format must be text or json");
    }
    std::string out;
    for (const auto& [name, value] : items_) {
      out += name + " = " + (value ? bmzi::format_double(*value) : "undefined") + "\n";
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::optional<double>>> items_;
};

void add_state(Report& rep, const std::string& name, const bmzi::PureState& psi) {
  rep.add(name + "_a0_re", psi.a0().real());
  rep.add(name + "_a0_im", psi.a0().imag());
  rep.add(name + "_a1_re", psi.a1().real());
  rep.add(name + "_a1_im", psi.a1().imag());
  rep.add(name + "_p0", std::norm(psi.a0()));
  rep.add(name + "_p1", std::norm(psi.a1()));
}

std::optional<double> try_visibility(const bmzi::MziConfig& cfg,
                                     bmzi::DetectorChoice det, int numeric_grid) {
  const bool basis0 = std::abs(cfg.input.a1()) <= bmzi::kConstructTol;
  try {
    if (basis0) return bmzi::visibility_analytic(cfg, det);
    return bmzi::visibility_numeric(cfg, det, numeric_grid);
  } catch (const bmzi::UndefinedVisibility&) {
    return std::nullopt;
  } catch (const bmzi::DegenerateSignal&) {
    return std::nullopt;
  }
}

std::optional<double> try_measure(double (*f)(const bmzi::MziConfig&,
                                              bmzi::DetectorChoice),
                                  const bmzi::MziConfig& cfg,
                                  bmzi::DetectorChoice det) {
  try {
    return f(cfg, det);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path);
  }
  nlohmann::json j;
  in >> j;
  if (!j.is_object()) {
    throw std::invalid_argument("config file must hold a JSON object");
  }
  return j;
}

template <typename T>
void apply_default(const CLI::Option* opt, T& var, const nlohmann::json& cfg,
                   const char* key) {
  if (opt != nullptr && opt->count() == 0 && cfg.contains(key)) {
    var = cfg.at(key).get<T>();
  }
}

template <typename T>
void apply_default(const CLI::Option* opt, std::optional<T>& var,
                   const nlohmann::json& cfg, const char* key) {
  if (opt != nullptr && opt->count() == 0 && cfg.contains(key)) {
    var = cfg.at(key).get<T>();
  }
}

void apply_config_defaults(const nlohmann::json& cfg, const ConfigOptions& opts,
                           ConfigFlags& f) {
  apply_default(opts.theta1, f.theta1, cfg, "theta1");
  apply_default(opts.theta2, f.theta2, cfg, "theta2");
  apply_default(opts.phi, f.phi, cfg, "phi");
  apply_default(opts.alpha_angle, f.alpha_angle, cfg, "alpha_angle");
  apply_default(opts.input, f.input_amplitudes, cfg, "input");
  apply_default(opts.prep_theta1, f.prep_theta1, cfg, "prep_theta1");
  apply_default(opts.prep_theta2, f.prep_theta2, cfg, "prep_theta2");
  apply_default(opts.prep_phi, f.prep_phi, cfg, "prep_phi");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biased Mach-Zehnder interferometer simulator"};
  app.require_subcommand(1);

  // ---- stages / probs / visibility / measures ---------------------------
  ConfigFlags scalar_flags;
  OutputFlags scalar_out;
  std::string scalar_config_path;
  ConfigOptions scalar_opts;
  int numeric_grid = 720;

  const auto add_scalar_common = [&](CLI::App* cmd) {
    scalar_opts = add_config_flags(cmd, scalar_flags);
    cmd->add_option("--format", scalar_out.format, "text or json");
    cmd->add_option("--out", scalar_out.path, "write to file instead of stdout");
    cmd->add_option("--config", scalar_config_path, "JSON file with defaults");
  };

  CLI::App* stages_cmd = app.add_subcommand("stages", "states at every stage");
  add_scalar_common(stages_cmd);

  CLI::App* probs_cmd = app.add_subcommand("probs", "detection probabilities");
  add_scalar_common(probs_cmd);

  CLI::App* vis_cmd = app.add_subcommand("visibility", "fringe visibilities");
  add_scalar_common(vis_cmd);
  vis_cmd->add_option("--grid", numeric_grid, "phase grid for the numeric scan");

  CLI::App* meas_cmd =
      app.add_subcommand("measures", "wave/particle quantifiers of the inside state");
  add_scalar_common(meas_cmd);

  // ---- sweep -------------------------------------------------------------
  ConfigFlags sweep_fixed;
  OutputFlags sweep_out;
  std::string sweep_config_path;
  std::string sweep_variable = "theta1";
  std::string sweep_couple = "none";
  double sweep_start = 0.0, sweep_stop = kPi / 2.0;
  int sweep_steps = 33;
  std::optional<std::uint64_t> sweep_shots;
  std::uint64_t sweep_seed = 0;
  std::uint64_t sweep_calibration = std::uint64_t{1} << 20;
  int sweep_scan_points = 96;
  int sweep_numeric_grid = 720;
  NoiseFlags sweep_noise;

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "tabulate quantities over a grid");
  ConfigOptions sweep_opts = add_config_flags(sweep_cmd, sweep_fixed);
  CLI::Option* sweep_var_opt = sweep_cmd->add_option(
      "--variable", sweep_variable, "theta1, theta2, phi or alpha_angle");
  CLI::Option* sweep_start_opt = sweep_cmd->add_option("--start", sweep_start, "grid start");
  CLI::Option* sweep_stop_opt = sweep_cmd->add_option("--stop", sweep_stop, "grid stop");
  CLI::Option* sweep_steps_opt = sweep_cmd->add_option("--steps", sweep_steps, "grid points");
  CLI::Option* sweep_couple_opt = sweep_cmd->add_option(
      "--couple", sweep_couple, "none, theta2=theta1 or theta2=pi2-theta1");
  CLI::Option* sweep_shots_opt =
      sweep_cmd->add_option("--shots", sweep_shots, "enable simulated columns");
  CLI::Option* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "master seed");
  CLI::Option* sweep_cal_opt = sweep_cmd->add_option(
      "--calibration-shots", sweep_calibration, "confusion-matrix calibration shots");
  CLI::Option* sweep_scan_opt = sweep_cmd->add_option(
      "--scan-points", sweep_scan_points, "phase points for the simulated visibility");
  CLI::Option* sweep_grid_opt = sweep_cmd->add_option(
      "--numeric-grid", sweep_numeric_grid, "phase grid for non-|0> visibility");
  CLI::Option* sweep_noise_opt =
      sweep_cmd
          ->add_option("--noise-readout", sweep_noise.readout,
                       "readout flip probabilities E0,E1")
          ->delimiter(',');
  CLI::Option* sweep_depol_opt = sweep_cmd->add_option(
      "--depolarizing", sweep_noise.depolarizing, "per-gate depolarizing rate");
  sweep_cmd->add_option("--format", sweep_out.format, "csv or json");
  sweep_cmd->add_option("--out", sweep_out.path, "output path (stdout if omitted)");
  sweep_cmd->add_option("--config", sweep_config_path, "JSON file with defaults");

  // ---- fig2 --------------------------------------------------------------
  int fig2_grid = 33;
  std::string fig2_out_v0, fig2_out_v1, fig2_format;
  CLI::App* fig2_cmd =
      app.add_subcommand("fig2", "V0 and V1 over the (T1, T2) unit square");
  fig2_cmd->add_option("--grid-n", fig2_grid, "grid points per axis");
  fig2_cmd->add_option("--out-v0", fig2_out_v0, "output path for the V0 table");
  fig2_cmd->add_option("--out-v1", fig2_out_v1, "output path for the V1 table");
  fig2_cmd->add_option("--format", fig2_format, "csv or json");

  // ---- fig4 --------------------------------------------------------------
  int fig4_steps = 33;
  std::uint64_t fig4_shots = 8192;
  std::uint64_t fig4_seed = 0;
  NoiseFlags fig4_noise;
  OutputFlags fig4_out;
  CLI::App* fig4_cmd =
      app.add_subcommand("fig4", "equal-splitter sweep with a simulated experiment");
  fig4_cmd->add_option("--steps", fig4_steps, "theta grid points");
  fig4_cmd->add_option("--shots", fig4_shots, "shots per measurement");
  fig4_cmd->add_option("--seed", fig4_seed, "master seed");
  fig4_cmd
      ->add_option("--noise-readout", fig4_noise.readout,
                   "readout flip probabilities E0,E1")
      ->delimiter(',');
  fig4_cmd->add_option("--depolarizing", fig4_noise.depolarizing,
                       "per-gate depolarizing rate");
  fig4_cmd->add_option("--format", fig4_out.format, "csv or json");
  fig4_cmd->add_option("--out", fig4_out.path, "output path (stdout if omitted)");

  // ---- tomo --------------------------------------------------------------
  ConfigFlags tomo_flags;
  OutputFlags tomo_out;
  std::string tomo_config_path;
  std::uint64_t tomo_shots = 8192;
  std::uint64_t tomo_seed = 0;
  std::uint64_t tomo_calibration = std::uint64_t{1} << 20;
  int tomo_stage = 2;
  bool tomo_no_mitigate = false;
  NoiseFlags tomo_noise;
  CLI::App* tomo_cmd =
      app.add_subcommand("tomo", "simulated tomography of a stage state");
  ConfigOptions tomo_opts = add_config_flags(tomo_cmd, tomo_flags);
  CLI::Option* tomo_shots_opt =
      tomo_cmd->add_option("--shots", tomo_shots, "shots per basis");
  CLI::Option* tomo_seed_opt = tomo_cmd->add_option("--seed", tomo_seed, "seed");
  CLI::Option* tomo_cal_opt = tomo_cmd->add_option(
      "--calibration-shots", tomo_calibration, "confusion-matrix calibration shots");
  tomo_cmd->add_option("--stage", tomo_stage, "tomographed stage: 2 or 3")
      ->check(CLI::Range(2, 3));
  tomo_cmd->add_flag("--no-mitigate", tomo_no_mitigate, "skip readout mitigation");
  CLI::Option* tomo_noise_opt =
      tomo_cmd
          ->add_option("--noise-readout", tomo_noise.readout,
                       "readout flip probabilities E0,E1")
          ->delimiter(',');
  CLI::Option* tomo_depol_opt = tomo_cmd->add_option(
      "--depolarizing", tomo_noise.depolarizing, "per-gate depolarizing rate");
  tomo_cmd->add_option("--format", tomo_out.format, "text or json");
  tomo_cmd->add_option("--out", tomo_out.path, "write to file instead of stdout");
  tomo_cmd->add_option("--config", tomo_config_path, "JSON file with defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*stages_cmd || *probs_cmd || *vis_cmd || *meas_cmd) {
      if (!scalar_config_path.empty()) {
        apply_config_defaults(load_json_file(scalar_config_path), scalar_opts,
                              scalar_flags);
      }
      const bmzi::MziConfig cfg = build_config(scalar_flags);
      Report rep;
      if (*stages_cmd) {
        const bmzi::StageStates st = bmzi::run_stages(cfg);
        add_state(rep, "psi0", st.psi0);
        add_state(rep, "psi1", st.psi1);
        add_state(rep, "psi2", st.psi2);
        add_state(rep, "psi3", st.psi3);
      } else if (*probs_cmd) {
        const bmzi::DetectionProbabilities p = bmzi::detection_probabilities(cfg);
        rep.add("p0", p.p0);
        rep.add("p1", p.p1);
      } else if (*vis_cmd) {
        rep.add("V0", try_visibility(cfg, bmzi::DetectorChoice::D0, numeric_grid));
        rep.add("V1", try_visibility(cfg, bmzi::DetectorChoice::D1, numeric_grid));
      } else {
        const bmzi::DensityMatrix rho2 = bmzi::density_of(bmzi::run_stages(cfg).psi2);
        const bmzi::ComplementarityReport ccr = bmzi::ccr_report(rho2);
        rep.add("C_l1", bmzi::l1_coherence(rho2));
        rep.add("C_re", ccr.coherence);
        rep.add("P_vn", ccr.predictability);
        rep.add("S_vn", ccr.entropy);
        rep.add("ccr_residual", ccr.residual);
        rep.add("P_gy", bmzi::gy_predictability(cfg.bs1));
        rep.add("V0",
                try_measure(bmzi::visibility_analytic, cfg, bmzi::DetectorChoice::D0));
        rep.add("V1",
                try_measure(bmzi::visibility_analytic, cfg, bmzi::DetectorChoice::D1));
        rep.add("P0", try_measure(bmzi::biased_predictability, cfg,
                                  bmzi::DetectorChoice::D0));
        rep.add("P1", try_measure(bmzi::biased_predictability, cfg,
                                  bmzi::DetectorChoice::D1));
        rep.add("V0_weighted", try_measure(bmzi::weighted_visibility, cfg,
                                           bmzi::DetectorChoice::D0));
        rep.add("V1_weighted", try_measure(bmzi::weighted_visibility, cfg,
                                           bmzi::DetectorChoice::D1));
      }
      write_text(rep.render(scalar_out.format), scalar_out.path);
    } else if (*sweep_cmd) {
      if (!sweep_config_path.empty()) {
        const nlohmann::json cfg = load_json_file(sweep_config_path);
        apply_config_defaults(cfg, sweep_opts, sweep_fixed);
        apply_default(sweep_var_opt, sweep_variable, cfg, "variable");
        apply_default(sweep_start_opt, sweep_start, cfg, "start");
        apply_default(sweep_stop_opt, sweep_stop, cfg, "stop");
        apply_default(sweep_steps_opt, sweep_steps, cfg, "steps");
        apply_default(sweep_couple_opt, sweep_couple, cfg, "couple");
        apply_default(sweep_shots_opt, sweep_shots, cfg, "shots");
        apply_default(sweep_seed_opt, sweep_seed, cfg, "seed");
        apply_default(sweep_cal_opt, sweep_calibration, cfg, "calibration_shots");
        apply_default(sweep_scan_opt, sweep_scan_points, cfg, "scan_points");
        apply_default(sweep_grid_opt, sweep_numeric_grid, cfg, "numeric_grid");
        apply_default(sweep_noise_opt, sweep_noise.readout, cfg, "noise_readout");
        apply_default(sweep_depol_opt, sweep_noise.depolarizing, cfg, "depolarizing");
      }
      bmzi::SweepSpec spec;
      if (sweep_variable == "theta1") {
        spec.variable = bmzi::SweepVariable::Theta1;
      } else if (sweep_variable == "theta2") {
        spec.variable = bmzi::SweepVariable::Theta2;
      } else if (sweep_variable == "phi") {
        spec.variable = bmzi::SweepVariable::Phi;
      } else if (sweep_variable == "alpha_angle") {
        spec.variable = bmzi::SweepVariable::AlphaAngle;
      } else {
        throw std::invalid_argument("unknown sweep variable " + sweep_variable);
      }
      if (sweep_couple == "none") {
        spec.couple = bmzi::Coupling::None;
      } else if (sweep_couple == "theta2=theta1") {
        spec.couple = bmzi::Coupling::Theta2EqualsTheta1;
      } else if (sweep_couple == "theta2=pi2-theta1") {
        spec.couple = bmzi::Coupling::Theta2ComplementsTheta1;
      } else {
        throw std::invalid_argument("unknown coupling " + sweep_couple);
      }
      spec.start = sweep_start;
      spec.stop = sweep_stop;
      spec.steps = sweep_steps;
      spec.fixed = build_config(sweep_fixed);
      spec.shots = sweep_shots;
      spec.noise = build_noise(sweep_noise);
      spec.seed = sweep_seed;
      spec.calibration_shots = sweep_calibration;
      spec.phi_scan_points = sweep_scan_points;
      spec.numeric_grid = sweep_numeric_grid;
      emit_table(bmzi::run_sweep(spec), sweep_out);
    } else if (*fig2_cmd) {
      const auto [v0, v1] = bmzi::figure_fig2(fig2_grid);
      emit_table(v0, OutputFlags{fig2_format, fig2_out_v0});
      emit_table(v1, OutputFlags{fig2_format, fig2_out_v1});
    } else if (*fig4_cmd) {
      const bmzi::SweepTable t =
          bmzi::figure_fig4(fig4_steps, fig4_shots, fig4_seed, build_noise(fig4_noise));
      emit_table(t, fig4_out);
    } else if (*tomo_cmd) {
      if (!tomo_config_path.empty()) {
        const nlohmann::json cfg = load_json_file(tomo_config_path);
        apply_config_defaults(cfg, tomo_opts, tomo_flags);
        apply_default(tomo_shots_opt, tomo_shots, cfg, "shots");
        apply_default(tomo_seed_opt, tomo_seed, cfg, "seed");
        apply_default(tomo_cal_opt, tomo_calibration, cfg, "calibration_shots");
        apply_default(tomo_noise_opt, tomo_noise.readout, cfg, "noise_readout");
        apply_default(tomo_depol_opt, tomo_noise.depolarizing, cfg, "depolarizing");
      }
      const bmzi::MziConfig cfg = build_config(tomo_flags);
      const bmzi::NoiseModel noise = build_noise(tomo_noise);
      const bmzi::StageStates st = bmzi::run_stages(cfg);
      const bmzi::DensityMatrix ideal =
          bmzi::density_of(tomo_stage == 2 ? st.psi2 : st.psi3);
      const bmzi::DensityMatrix truth = bmzi::depolarize(
          ideal, noise.depolarizing_p,
          tomo_stage == 2 ? bmzi::kGateCountToPsi2 : bmzi::kGateCountToPsi3);

      const bmzi::Counts cx = bmzi::sample_counts(
          truth, bmzi::Basis::X, tomo_shots, noise, bmzi::derive_seed(tomo_seed, 0));
      const bmzi::Counts cy = bmzi::sample_counts(
          truth, bmzi::Basis::Y, tomo_shots, noise, bmzi::derive_seed(tomo_seed, 1));
      const bmzi::Counts cz = bmzi::sample_counts(
          truth, bmzi::Basis::Z, tomo_shots, noise, bmzi::derive_seed(tomo_seed, 2));
      std::optional<bmzi::ConfusionMatrix> cm;
      if (!tomo_no_mitigate) {
        cm = bmzi::calibrate_confusion(noise, tomo_calibration,
                                       bmzi::derive_seed(tomo_seed, 3));
      }
      const bmzi::TomographyResult rec = bmzi::reconstruct(cx, cy, cz, cm);

      Report rep;
      const bmzi::BlochVector want = bmzi::bloch_vector(ideal);
      const bmzi::BlochVector got = bmzi::bloch_vector(rec.rho);
      rep.add("true_x", want.x);
      rep.add("true_y", want.y);
      rep.add("true_z", want.z);
      rep.add("raw_x", rec.raw_bloch.x);
      rep.add("raw_y", rec.raw_bloch.y);
      rep.add("raw_z", rec.raw_bloch.z);
      rep.add("reconstructed_x", got.x);
      rep.add("reconstructed_y", got.y);
      rep.add("reconstructed_z", got.z);
      rep.add("projected", rec.projected ? 1.0 : 0.0);
      rep.add("fidelity", bmzi::fidelity(rec.rho, ideal));
      rep.add("C_l1", bmzi::l1_coherence(rec.rho));
      rep.add("C_re", bmzi::re_coherence(rec.rho));
      rep.add("P_vn", bmzi::vn_predictability(rec.rho));
      rep.add("S_vn", bmzi::vn_entropy(rec.rho));
      write_text(rep.render(tomo_out.format), tomo_out.path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
