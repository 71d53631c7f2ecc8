#include "dtc/pulse_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dtc/rng.hpp"

namespace dtc::pulse {

using std::numbers::pi;

Pulse Pulse::make(double axis, double angle) {
  if (!std::isfinite(axis) || !std::isfinite(angle)) {
    throw std::invalid_argument("pulse angles must be finite");
  }
  double a = std::fmod(axis, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  if (a >= 2.0 * pi) a = 0.0;
  return {a, angle};
}

RabiErrorModel RabiErrorModel::uniform_static(int sites, double offset) {
  RabiErrorModel model;
  model.static_offset.assign(static_cast<std::size_t>(std::max(sites, 0)), offset);
  return model;
}

double RabiErrorModel::offset_for(int site) const noexcept {
  if (site < 0 || static_cast<std::size_t>(site) >= static_offset.size()) return 0.0;
  return static_offset[static_cast<std::size_t>(site)];
}

bool RabiErrorModel::is_ideal() const noexcept {
  return noise_rms == 0.0 &&
         std::all_of(static_offset.begin(), static_offset.end(), [](double d) { return d == 0.0; });
}

void RabiErrorModel::validate() const {
  for (double d : static_offset) {
    if (!(std::abs(d) < 0.2)) throw std::invalid_argument("static Rabi offset must satisfy |d| < 0.2");
  }
  if (!(noise_rms >= 0.0)) throw std::invalid_argument("Rabi noise rms must be non-negative");
}

double bb1_axis() noexcept { return std::acos(-0.25); }

std::vector<Pulse> bb1_sequence(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must lie in [0, 0.5)");
  }
  // correction phases are measured from the axis of the drive pulse
  const double drive = 0.5 * pi;
  const double theta = bb1_axis();
  return {Pulse::make(drive, pi * (1.0 - epsilon)), Pulse::make(drive + theta, pi),
          Pulse::make(drive + 3.0 * theta, 2.0 * pi), Pulse::make(drive + theta, pi)};
}

SingleQubitUnitary compose_pulses(std::span<const Pulse> pulses, const RabiErrorModel& error,
                                  int site, std::uint64_t draw) {
  const double offset = error.offset_for(site);
  CounterRng noise(derive_seed(error.noise_seed, static_cast<std::uint64_t>(site), draw));
  SingleQubitUnitary total = SingleQubitUnitary::identity();
  for (const Pulse& p : pulses) {
    double scale = 1.0 + offset;
    if (error.noise_rms > 0.0) scale += error.noise_rms * noise.normal();
    total = SingleQubitUnitary::rotation(p.axis, p.angle * scale) * total;
  }
  return total;
}

double rotation_infidelity(const SingleQubitUnitary& u, const SingleQubitUnitary& v) {
  // For unitary w, 1 - |tr w|/2 = s/(1 + |tr w|/2) with s = |w - (tr w / 2) I|_F^2 / 2;
  // this form keeps full relative precision when w is close to the identity.
  const SingleQubitUnitary w = u.adjoint() * v;
  const kernel::Complex half_trace = 0.5 * w.trace();
  const double s = 0.5 * (std::norm(w.m[0] - half_trace) + std::norm(w.m[1]) +
                          std::norm(w.m[2]) + std::norm(w.m[3] - half_trace));
  const double overlap = std::min(1.0, std::abs(half_trace));
  return std::clamp(s / (1.0 + overlap), 0.0, 1.0);
}

double composite_u3_check(double d) {
  const auto sandwich = SingleQubitUnitary::y_rotation(0.5 * pi) *
                        SingleQubitUnitary::z_rotation(2.0 * d) *
                        SingleQubitUnitary::y_rotation(-0.5 * pi);
  return kernel::max_deviation(sandwich, SingleQubitUnitary::x_rotation(2.0 * d));
}

double composite_u3_reversed_deviation(double d) {
  const auto sandwich = SingleQubitUnitary::y_rotation(-0.5 * pi) *
                        SingleQubitUnitary::z_rotation(2.0 * d) *
                        SingleQubitUnitary::y_rotation(0.5 * pi);
  return kernel::max_deviation(sandwich, SingleQubitUnitary::x_rotation(2.0 * d));
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log-log slope needs matching series of length >= 2");
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

SuppressionReport bb1_suppression(std::span<const double> deltas, double epsilon,
                                  double noise_rms, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const auto ideal = SingleQubitUnitary::y_rotation(pi * (1.0 - epsilon));
  const auto composite = bb1_sequence(epsilon);
  const std::vector<Pulse> plain{composite.front()};

  SuppressionReport report;
  report.epsilon = epsilon;
  report.noise_rms = noise_rms;
  std::vector<double> xs, plain_ys, bb1_ys;
  for (double delta : deltas) {
    RabiErrorModel model;
    model.static_offset = {delta};
    model.noise_rms = noise_rms;
    model.noise_seed = seed;
    model.validate();
    SuppressionRow row{delta, 0.0, 0.0};
    for (int t = 0; t < trials; ++t) {
      const auto draw = static_cast<std::uint64_t>(t);
      row.plain_infidelity += rotation_infidelity(ideal, compose_pulses(plain, model, 0, draw));
      row.bb1_infidelity += rotation_infidelity(ideal, compose_pulses(composite, model, 0, draw));
    }
    row.plain_infidelity /= trials;
    row.bb1_infidelity /= trials;
    report.rows.push_back(row);
    if (delta > 0.0 && row.plain_infidelity > 0.0 && row.bb1_infidelity > 0.0) {
      xs.push_back(delta);
      plain_ys.push_back(row.plain_infidelity);
      bb1_ys.push_back(row.bb1_infidelity);
    }
  }
  if (xs.size() >= 2) {
    report.plain_slope = log_log_slope(xs, plain_ys);
    report.bb1_slope = log_log_slope(xs, bb1_ys);
  }
  return report;
}

}  // namespace dtc::pulse
