#include "dtc/floquet_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dtc/rng.hpp"

namespace dtc::floquet {

using std::numbers::pi;

std::string to_string(PulseModel model) {
  return model == PulseModel::BB1 ? "bb1" : "ideal";
}

PulseModel pulse_model_from_string(const std::string& name) {
  if (name == "ideal" || name == "Ideal") return PulseModel::Ideal;
  if (name == "bb1" || name == "BB1") return PulseModel::BB1;
  throw std::invalid_argument("unknown pulse model '" + name + "' (expected ideal or bb1)");
}

void FloquetConfig::validate() const {
  if (sites < 1 || sites > kernel::kMaxSites) {
    throw std::invalid_argument("sites must lie in [1, " + std::to_string(kernel::kMaxSites) + "]");
  }
  if (periods < 1) throw std::invalid_argument("periods must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in [0, 0.5)");
  if (!(disorder_scale >= 0.0) || !std::isfinite(disorder_scale)) {
    throw std::invalid_argument("disorder scale Wt3 must be finite and >= 0");
  }
  if (!(period_seconds > 0.0)) throw std::invalid_argument("period duration must be positive");
  if (const auto* p = std::get_if<PowerLawCouplings>(&couplings)) {
    if (!(p->j0t2 >= 0.0) || !std::isfinite(p->j0t2)) {
      throw std::invalid_argument("J0t2 must be finite and >= 0");
    }
    if (!(p->alpha > 0.0 && p->alpha <= 3.0)) throw std::invalid_argument("alpha must lie in (0, 3]");
  } else if (std::get<PairMatrix>(couplings).sites() != sites) {
    throw std::invalid_argument("explicit coupling matrix does not match site count");
  }
  rabi_error.validate();
}

double FloquetConfig::nearest_neighbour_phase() const {
  if (const auto* p = std::get_if<PowerLawCouplings>(&couplings)) return p->j0t2;
  const auto& m = std::get<PairMatrix>(couplings);
  double best = 0.0;
  for (int i = 0; i + 1 < m.sites(); ++i) best = std::max(best, std::abs(m(i, i + 1)));
  return best;
}

std::optional<std::string> FloquetConfig::regime_warning() const {
  const double j = nearest_neighbour_phase();
  if (j > kRegimeJ0t2) {
    std::ostringstream os;
    os << "J0t2 = " << j << " rad exceeds the experimental regime (< " << kRegimeJ0t2 << " rad)";
    return os.str();
  }
  return std::nullopt;
}

PairMatrix FloquetConfig::coupling_phases() const {
  if (const auto* p = std::get_if<PowerLawCouplings>(&couplings)) {
    return build_power_law_couplings(sites, p->j0t2, p->alpha);
  }
  return std::get<PairMatrix>(couplings);
}

PairMatrix build_power_law_couplings(int sites, double j0t2, double alpha) {
  if (!(j0t2 >= 0.0)) throw std::invalid_argument("J0t2 must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  PairMatrix m(sites);
  for (int i = 0; i < sites; ++i) {
    for (int j = i + 1; j < sites; ++j) {
      m.set(i, j, j0t2 / std::pow(static_cast<double>(j - i), alpha));
    }
  }
  return m;
}

DisorderInstance sample_disorder(int sites, double wt3, std::uint64_t seed, std::uint64_t index) {
  if (!(wt3 >= 0.0)) throw std::invalid_argument("Wt3 must be >= 0");
  if (sites < 0) throw std::invalid_argument("negative site count");
  DisorderInstance out{index, seed, {}};
  out.phases.reserve(static_cast<std::size_t>(sites));
  CounterRng rng(seed);
  for (int i = 0; i < sites; ++i) out.phases.push_back(wt3 * rng.uniform());
  return out;
}

DisorderInstance disorder_for_instance(int sites, double wt3, std::uint64_t master_seed,
                                       std::uint64_t index) {
  return sample_disorder(sites, wt3, derive_seed(master_seed, index), index);
}

namespace {

kernel::DiagonalPhaseSpec period_phases(const FloquetConfig& config,
                                        const DisorderInstance& instance) {
  config.validate();
  if (instance.phases.size() != static_cast<std::size_t>(config.sites)) {
    throw std::invalid_argument("disorder instance has " + std::to_string(instance.phases.size()) +
                                " phases for " + std::to_string(config.sites) + " sites");
  }
  return {config.coupling_phases(), instance.phases};
}

}  // namespace

FloquetPeriod::FloquetPeriod(const FloquetConfig& config, const DisorderInstance& instance)
    : sites_(config.sites),
      model_(config.pulse_model),
      rabi_error_(config.rabi_error),
      phases_(period_phases(config, instance)) {
  if (model_ == PulseModel::Ideal) {
    drive_.assign(1, kernel::SingleQubitUnitary::y_rotation(pi * (1.0 - config.epsilon)));
    return;
  }
  pulses_ = pulse::bb1_sequence(config.epsilon);
  if (rabi_error_.noise_rms > 0.0) {
    uniform_drive_ = false;
    return;  // composed per period
  }
  drive_.reserve(static_cast<std::size_t>(sites_));
  for (int i = 0; i < sites_; ++i) drive_.push_back(pulse::compose_pulses(pulses_, rabi_error_, i));
  uniform_drive_ = false;
}

void FloquetPeriod::apply(StateVector& state, std::uint64_t period) const {
  if (state.sites() != sites_) {
    throw std::invalid_argument("Floquet period for " + std::to_string(sites_) +
                                " sites applied to state of " + std::to_string(state.sites()));
  }
  if (uniform_drive_) {
    kernel::apply_uniform_single_qubit(state, drive_.front());
  } else if (!drive_.empty()) {
    for (int i = 0; i < sites_; ++i) kernel::apply_single_qubit(state, i, drive_[i]);
  } else {
    for (int i = 0; i < sites_; ++i) {
      kernel::apply_single_qubit(state, i, pulse::compose_pulses(pulses_, rabi_error_, i, period));
    }
  }
  // Ising and disorder factors are both diagonal here, so one combined table
  // applies exp(-i H3 t3) exp(-i H2 t2) at once.
  phases_.apply(state);
}

void apply_floquet_period(StateVector& state, const FloquetConfig& config,
                          const DisorderInstance& instance) {
  FloquetPeriod(config, instance).apply(state);
}

Trajectory run_trajectory(const FloquetConfig& config, const DisorderInstance& instance) {
  const FloquetPeriod period(config, instance);
  Trajectory out;
  out.sites = config.sites;
  out.periods = config.periods;
  out.epsilon = config.epsilon;
  out.nearest_neighbour_phase = config.nearest_neighbour_phase();
  out.disorder_scale = config.disorder_scale;
  out.period_seconds = config.period_seconds;
  out.instance_index = instance.index;
  out.instance_seed = instance.seed;
  out.series.assign(static_cast<std::size_t>(config.sites) * config.periods, 0.0);

  StateVector state = kernel::init_product_state(config.sites);
  for (int n = 0; n < config.periods; ++n) {
    if (n > 0) period.apply(state, static_cast<std::uint64_t>(n - 1));
    const auto sx = kernel::measure_sigma_x(state);
    // <sigma_i^x(0)> = -1 for the initial state.
    for (int i = 0; i < config.sites; ++i) {
      out.series[static_cast<std::size_t>(i) * config.periods + n] = -sx[i];
    }
  }
  return out;
}

}  // namespace dtc::floquet
