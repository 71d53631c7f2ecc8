#pragma once

// Deterministic phase-diagram sweeps over (J0t2, epsilon, disorder instance)
// and their on-disk result store.
//
// Instance k of a sweep always uses the seed derive_seed(master_seed, k), so
// the same disorder realizations are shared by every (J0t2, epsilon) cell and
// any record can be regenerated in isolation from its manifest entry.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dtc/floquet_model.hpp"
#include "dtc/spectral_analysis.hpp"

namespace dtc::sweep {

inline constexpr const char* kVersion = "0.1.0";

/// 16 log-spaced points from 0.005 to 0.15.
std::vector<double> default_epsilon_grid();
/// { 0.006, 0.012, 0.024, 0.036 } rad.
std::vector<double> default_j0t2_ladder();
std::vector<double> log_grid(double lo, double hi, int points);

struct BootstrapSettings {
  int pool_size = 100;
  int sample_size = 10;
  int repetitions = 10000;
  std::uint64_t seed = 1;
  bool with_replacement = false;
};

struct SweepConfig {
  floquet::FloquetConfig base;  // epsilon and the power-law J0t2 are overridden per cell
  double alpha = 1.51;
  std::vector<double> epsilons = default_epsilon_grid();
  std::vector<double> j0t2_values = default_j0t2_ladder();
  int instances = 10;
  std::uint64_t master_seed = 2024;
  int threads = 1;
  std::filesystem::path output_dir;
  bool save_trajectories = true;
  bool fit_curves = true;
  spectral::FitOptions fit;
  std::optional<BootstrapSettings> bootstrap;

  void validate() const;
  floquet::FloquetConfig cell_config(double j0t2, double epsilon) const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SweepConfig& config);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct TrajectoryRecord {
  std::size_t j_index = 0;
  std::size_t eps_index = 0;
  double j0t2 = 0.0;
  double epsilon = 0.0;
  std::uint64_t instance_index = 0;
  std::uint64_t instance_seed = 0;
  spectral::PeakStats peak;
  std::vector<int> peak_bins;  // spectral maximum per site
  std::string error;           // empty on success
  std::optional<floquet::Trajectory> trajectory;
  std::optional<spectral::Spectrum> spectrum;

  bool ok() const noexcept { return error.empty(); }
};

struct CurveRecord {
  spectral::VarianceCurve curve;
  bool interior_maximum = false;
  std::optional<spectral::FitResult> fit;
  std::string error;
};

struct BootstrapRecord {
  double j0t2 = 0.0;
  BootstrapSettings settings;
  spectral::BootstrapResult result;
  std::string error;
};

struct ResultStore {
  nlohmann::json manifest;
  std::vector<TrajectoryRecord> records;  // ordered by (j, eps, instance)
  std::vector<CurveRecord> curves;        // one per J0t2
  std::vector<BootstrapRecord> bootstraps;

  const TrajectoryRecord& record(std::size_t j, std::size_t e, std::size_t m) const;
};

/// Runs every cell; writes the store to config.output_dir when it is set.
ResultStore run_sweep(const SweepConfig& config);

/// One record's trajectory recomputed from the sweep configuration alone.
floquet::Trajectory regenerate_trajectory(const SweepConfig& config, double j0t2, double epsilon,
                                          std::uint64_t instance_index);

/// Site-variance curves of `instances` disorder instances at one J0t2.
spectral::InstancePool build_instance_pool(const SweepConfig& config, double j0t2, int instances);

/// Fits every curve; records per-curve failures instead of throwing.
void fit_curves(std::vector<CurveRecord>& curves, const spectral::FitOptions& options);

void write_store(const ResultStore& store, const SweepConfig& config,
                 const std::filesystem::path& dir);
void write_trajectory_csv(const floquet::Trajectory& t, const std::filesystem::path& path);
void write_spectrum_csv(const spectral::Spectrum& s, double period_seconds,
                        const std::filesystem::path& path);
void write_variance_curves_csv(const std::vector<CurveRecord>& curves,
                               const std::filesystem::path& path);
void write_fits_csv(const std::vector<CurveRecord>& curves, const std::filesystem::path& dir);
void write_bootstrap_csv(const std::vector<BootstrapRecord>& boots,
                         const std::filesystem::path& dir);

/// Reads variance_curves.csv back into one CurveRecord per J0t2.
std::vector<CurveRecord> load_variance_curves(const std::filesystem::path& path);

/// Record file stem, e.g. "j0_e3_m7".
std::string record_stem(std::size_t j, std::size_t e, std::uint64_t m);

}  // namespace dtc::sweep
