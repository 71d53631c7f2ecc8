#pragma once

// Composite single-spin pulse sequences and Rabi-amplitude error models.

#include <cstdint>
#include <span>
#include <vector>

#include "dtc/quantum_kernel.hpp"

namespace dtc::pulse {

using kernel::SingleQubitUnitary;

/// Rotation by `angle` about an axis in the x-y plane at `axis` from x.
struct Pulse {
  double axis = 0.0;
  double angle = 0.0;

  /// Normalizes the axis angle onto [0, 2 pi).
  static Pulse make(double axis, double angle);
};

/// Fractional Rabi-amplitude errors: every pulse angle is scaled by
/// (1 + static_offset[site] + noise_rms * gaussian draw).
struct RabiErrorModel {
  std::vector<double> static_offset;  // per site; empty or short means 0
  double noise_rms = 0.0;
  std::uint64_t noise_seed = 0;

  static RabiErrorModel uniform_static(int sites, double offset);

  double offset_for(int site) const noexcept;
  bool is_ideal() const noexcept;
  void validate() const;
};

/// BB1 axis arccos(-1/4).
double bb1_axis() noexcept;

/// Application order: pi(1-eps) about y, pi about theta, 2 pi about 3 theta,
/// pi about theta.
std::vector<Pulse> bb1_sequence(double epsilon);

/// Product of the pulse rotations in application order. `draw` selects an
/// independent noise realization (the chain simulation passes the period).
SingleQubitUnitary compose_pulses(std::span<const Pulse> pulses, const RabiErrorModel& error,
                                  int site, std::uint64_t draw = 0);

/// 1 - |tr(u^dagger v)| / 2; insensitive to global phase.
double rotation_infidelity(const SingleQubitUnitary& u, const SingleQubitUnitary& v);

/// Max entrywise deviation between the sandwich
/// e^{-i pi/4 sigma^y} e^{-i d sigma^z} e^{+i pi/4 sigma^y} and e^{-i d sigma^x}.
double composite_u3_check(double d);

/// Same deviation for the opposite sandwich ordering
/// e^{+i pi/4 sigma^y} e^{-i d sigma^z} e^{-i pi/4 sigma^y}, which maps onto
/// e^{+i d sigma^x} instead.
double composite_u3_reversed_deviation(double d);

struct SuppressionRow {
  double delta = 0.0;
  double plain_infidelity = 0.0;
  double bb1_infidelity = 0.0;
};

struct SuppressionReport {
  double epsilon = 0.0;
  double noise_rms = 0.0;
  std::vector<SuppressionRow> rows;
  double plain_slope = 0.0;  // log-log slope of infidelity vs delta
  double bb1_slope = 0.0;
};

/// Plain pulse vs BB1 against the ideal pi(1-eps) y rotation for each static
/// offset. With noise, infidelities are averaged over `trials` draws.
SuppressionReport bb1_suppression(std::span<const double> deltas, double epsilon = 0.0,
                                  double noise_rms = 0.0, int trials = 1,
                                  std::uint64_t seed = 0);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace dtc::pulse
