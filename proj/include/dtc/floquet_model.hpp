#pragma once

// Three-step Floquet drive of a disordered long-range Ising chain:
//   U(T) = exp(-i H3 t3) exp(-i H2 t2) exp(-i H1 t1)
// parameterized entirely by dimensionless phases: the flip angle pi(1-eps),
// pair phases J_ij t2 and disorder phases D_i t3.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dtc/pulse_control.hpp"
#include "dtc/quantum_kernel.hpp"

namespace dtc::floquet {

using kernel::PairMatrix;
using kernel::StateVector;

struct PowerLawCouplings {
  double j0t2 = 0.0;   // nearest-neighbour phase, radians
  double alpha = 1.51;
};

enum class PulseModel { Ideal, BB1 };

std::string to_string(PulseModel model);
PulseModel pulse_model_from_string(const std::string& name);

/// Interaction phases above this value lie outside the experimental regime.
inline constexpr double kRegimeJ0t2 = 0.04;

struct FloquetConfig {
  int sites = 10;
  int periods = 100;
  double epsilon = 0.0;
  std::variant<PowerLawCouplings, PairMatrix> couplings = PowerLawCouplings{};
  double disorder_scale = 3.141592653589793;  // W t3, radians
  PulseModel pulse_model = PulseModel::Ideal;
  pulse::RabiErrorModel rabi_error;
  double period_seconds = 75e-6;  // axis labels only

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
  /// Non-empty when the interaction phase exceeds the experimental regime.
  std::optional<std::string> regime_warning() const;
  /// Largest nearest-neighbour phase of the configured couplings.
  double nearest_neighbour_phase() const;
  PairMatrix coupling_phases() const;
};

/// phi_ij = j0t2 / |i - j|^alpha.
PairMatrix build_power_law_couplings(int sites, double j0t2, double alpha);

struct DisorderInstance {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::vector<double> phases;  // D_i t3, each in [0, W t3]
};

/// d_i i.i.d. uniform on [0, wt3], a pure function of `seed`.
DisorderInstance sample_disorder(int sites, double wt3, std::uint64_t seed,
                                 std::uint64_t index = 0);

/// Instance `index` of a sweep keyed by `master_seed`.
DisorderInstance disorder_for_instance(int sites, double wt3, std::uint64_t master_seed,
                                       std::uint64_t index);

/// Precomputed single Floquet period for one (config, instance) pair.
class FloquetPeriod {
 public:
  FloquetPeriod(const FloquetConfig& config, const DisorderInstance& instance);

  /// `period` selects the Rabi-noise draw when the BB1 model carries noise.
  void apply(StateVector& state, std::uint64_t period = 0) const;

  int sites() const noexcept { return sites_; }

 private:
  int sites_;
  PulseModel model_;
  pulse::RabiErrorModel rabi_error_;
  std::vector<pulse::Pulse> pulses_;
  std::vector<kernel::SingleQubitUnitary> drive_;  // one per site when noise-free
  bool uniform_drive_ = true;
  kernel::DiagonalPhaseTable phases_;
};

void apply_floquet_period(StateVector& state, const FloquetConfig& config,
                          const DisorderInstance& instance);

/// Stroboscopic correlator C_i(n) = -<sigma_i^x(nT)>, n = 0 .. N-1.
struct Trajectory {
  int sites = 0;
  int periods = 0;
  double epsilon = 0.0;
  double nearest_neighbour_phase = 0.0;
  double disorder_scale = 0.0;
  double period_seconds = 0.0;
  std::uint64_t instance_index = 0;
  std::uint64_t instance_seed = 0;
  std::vector<double> series;  // row-major: site i occupies [i*N, (i+1)*N)

  double at(int site, int n) const {
    return series[static_cast<std::size_t>(site) * periods + n];
  }
  std::span<const double> site_series(int site) const {
    return std::span<const double>(series).subspan(static_cast<std::size_t>(site) * periods,
                                                   periods);
  }
};

Trajectory run_trajectory(const FloquetConfig& config, const DisorderInstance& instance);

}  // namespace dtc::floquet
