#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffwave/asymptotics.hpp"
#include "diffwave/solver.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

struct ExperimentConfig {
  // model
  double alpha = 1.0;
  double lambda = 0.0;
  double gamma = 1.4;
  double v_plus = 1.0;
  double u_plus = 0.0;
  // boundary
  Boundary boundary = Boundary::dirichlet;
  std::optional<double> v0_at_0;  // neumann; absent means v0(0) = v+
  std::optional<double> u0_at_0;  // neumann; absent means u0(0) = u+
  double amplitude = 0.01;
  // grid; length empty means automatic sizing
  std::optional<double> length;
  std::size_t cells = 8000;
  // time
  double t_end = 2000.0;
  double cfl = 0.5;
  std::size_t samples = 64;
  bool log_spaced = true;
  // fit window as fractions of t_end
  double fit_lo = 0.1;
  double fit_hi = 1.0;
  double v_tolerance = 0.2;
  double u_tolerance = 0.25;
  double epsilon = 0.05;
  std::optional<double> b;
  // scheme
  FluxKind flux = FluxKind::llf;
  Reconstruction reconstruction = Reconstruction::muscl_minmod;
  // output
  std::string output_dir = "diffwave_out";
  bool snapshots = false;

  /// Neumann with v0(0) = v+ is the constant-state wave.
  DecayRegime decay_regime() const;
  /// Automatic or explicit domain length.
  double resolved_length() const;
  std::vector<double> sample_times() const;
  nlohmann::json to_json() const;
  /// FNV-1a 64 of the resolved JSON text, as 16 hex digits.
  std::string hash() const;
  void validate() const;
};

/// Parses and validates; unknown keys and bad values raise ConfigError naming the key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Output root: $DIFFWAVE_OUT when set, else the current directory.
std::filesystem::path output_root();

struct SeriesRow {
  double t = 0.0;
  double v_wave_Linf_err = 0.0;
  double u_wave_Linf_err = 0.0;
  double omega_L2 = 0.0, omega_x_L2 = 0.0, omega_xx_L2 = 0.0, omega_xxx_L2 = 0.0;
  double z_L2 = 0.0, z_x_L2 = 0.0, z_xx_L2 = 0.0;
  double mass_drift = 0.0;  // int (v - vbar - vhat) / ||v0 - v+||_L1
  double min_v = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::filesystem::path directory;
  std::vector<SeriesRow> series;
  std::vector<NormRecord> norms;
  DecayReport report;
  double initial_excess_L1 = 0.0;
  std::size_t steps = 0;
  double max_courant = 0.0;
};

/// Wave construction, solver run, perturbation norms, fits and functionals.
/// Writes resolved_config.json, series.csv, report.json, plots.gp (and snapshots)
/// into `directory`. A numerical failure leaves the partial series plus an ABORTED
/// marker and rethrows.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& directory);

struct SweepEntry {
  double lambda = 0.0;
  bool ok = false;
  std::string error;
  std::optional<ExperimentResult> result;
};

/// One experiment per lambda in `directory`/lambda_<value>, `jobs` at a time; writes
/// sweep.csv and sweep.gp. Failures are recorded and do not stop the sweep.
std::vector<SweepEntry> sweep(const ExperimentConfig& base, std::vector<double> lambdas,
                              unsigned jobs, const std::filesystem::path& directory);

/// The diffusion wave the experiment compares against, sampled at its sample times.
WaveProfile build_wave(const ExperimentConfig& config);

std::string series_csv(const std::vector<SeriesRow>& rows);
std::string sweep_csv(const std::vector<SweepEntry>& entries);

}  // namespace diffwave
