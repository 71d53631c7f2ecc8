#pragma once

// Spectra of stroboscopic correlators, sub-harmonic peak statistics,
// variance-of-peak curves, the log-Lorentzian cross-over fit and the
// finite-instance bootstrap.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dtc/floquet_model.hpp"

namespace dtc::spectral {

struct Spectrum {
  int sites = 0;
  int samples = 0;                // N; frequencies are k / N cycles per period
  std::vector<double> amplitudes;  // row-major sites x N

  double frequency(int k) const noexcept { return static_cast<double>(k) / samples; }
  double at(int site, int k) const {
    return amplitudes[static_cast<std::size_t>(site) * samples + k];
  }
  std::span<const double> site_amplitudes(int site) const {
    return std::span<const double>(amplitudes).subspan(static_cast<std::size_t>(site) * samples,
                                                       samples);
  }
  /// Index of the largest bin of one site (lowest index on ties).
  int peak_bin(int site) const;
};

/// |(1/N) sum_n x_n exp(-2 pi i k n / N)| for k = 0 .. N-1.
std::vector<double> dft_amplitudes(std::span<const double> series);

Spectrum dft_spectrum(const floquet::Trajectory& trajectory);

struct PeakStats {
  std::vector<double> amplitudes;  // |S_i(0.5)| per site
  double mean = 0.0;
  double variance = 0.0;  // population variance over sites
};

PeakStats central_peak(const Spectrum& spectrum);

/// Mean and population variance of arbitrary per-site amplitudes.
PeakStats peak_stats_from_amplitudes(std::vector<double> amplitudes);

struct VarianceCurve {
  double j0t2 = 0.0;
  std::vector<double> epsilons;
  std::vector<double> mean;  // mean over instances of the site variance
  std::vector<double> sem;   // sample std over instances / sqrt(count)
  int instances = 0;
};

/// `by_point[g]` holds the PeakStats of every instance at epsilons[g].
VarianceCurve variance_curve(double j0t2, std::span<const double> epsilons,
                             std::span<const std::vector<PeakStats>> by_point);

/// `site_variances[m][g]`: site variance of instance m at epsilons[g].
VarianceCurve variance_curve_from_instances(double j0t2, std::span<const double> epsilons,
                                            std::span<const std::vector<double>> site_variances);

/// True when some strictly interior grid point exceeds both curve ends.
bool has_interior_maximum(const VarianceCurve& curve);

/// A / (1 + (log10(eps / eps_p) / gamma)^2) + B.
struct Lineshape {
  double amplitude = 0.0;
  double offset = 0.0;
  double gamma = 1.0;
  double center = 0.0;

  double operator()(double epsilon) const noexcept;
};

struct FitOptions {
  double sem_floor = 1e-6;
  double diameter_tolerance = 1e-10;
  int max_evaluations = 10000;  // per Nelder-Mead run
  int refinement_restarts = 3;
  std::vector<double> extra_gamma_starts;
};

struct FitResult {
  Lineshape shape;
  double objective = 0.0;
  bool converged = false;
  bool degenerate = false;  // amplitude negligible; center unconstrained
  int iterations = 0;
  int evaluations = 0;
};

FitResult fit_variance_curve(const VarianceCurve& curve, const FitOptions& options = {});

/// Per-instance site-variance curves on a common epsilon grid.
struct InstancePool {
  double j0t2 = 0.0;
  std::vector<double> epsilons;
  std::vector<std::vector<double>> site_variances;  // [instance][grid point]
};

struct BootstrapOptions {
  int sample_size = 10;
  int repetitions = 10000;
  std::uint64_t seed = 0;
  bool with_replacement = false;
  int threads = 1;
  double max_failure_fraction = 0.2;
  FitOptions fit;
};

struct BootstrapResult {
  double mean_center = 0.0;
  double stddev_center = 0.0;
  int repetitions = 0;
  int sample_size = 0;
  int failures = 0;
  bool degenerate = false;  // fewer than two successful fits
  std::vector<double> centers;  // successful fits, in repetition order
};

/// Instances drawn for one repetition; a pure function of (seed, repetition).
std::vector<std::size_t> bootstrap_sample(std::size_t pool_size, int sample_size,
                                          std::uint64_t seed, std::uint64_t repetition,
                                          bool with_replacement);

BootstrapResult bootstrap_boundary(const InstancePool& pool, const BootstrapOptions& options);

}  // namespace dtc::spectral
