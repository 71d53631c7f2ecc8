#include <cmath>
#include <numbers>

#include "doctest.h"

#include "dtc/pulse_control.hpp"
#include "dtc/rng.hpp"

using namespace dtc::pulse;
constexpr double pi = std::numbers::pi;

TEST_CASE("BB1 sequence layout") {
  CHECK(bb1_axis() == doctest::Approx(1.823477).epsilon(1e-6));
  CHECK(std::cos(bb1_axis()) == doctest::Approx(-0.25).epsilon(1e-15));
  const auto seq = bb1_sequence(0.07);
  REQUIRE(seq.size() == 4);
  CHECK(seq[0].angle == doctest::Approx(pi * 0.93));
  CHECK(seq[1].angle == pi);
  CHECK(seq[2].angle == 2 * pi);
  CHECK(seq[3].angle == pi);
  CHECK(seq[0].axis == doctest::Approx(pi / 2));
  CHECK(seq[1].axis == seq[3].axis);
  CHECK(bb1_sequence(0.0)[0].angle == pi);
  CHECK_THROWS_AS(bb1_sequence(0.5), std::invalid_argument);
  CHECK(Pulse::make(-0.5, 1.0).axis == doctest::Approx(2 * pi - 0.5));
}

TEST_CASE("composition") {
  const std::vector<Pulse> none;
  CHECK(max_deviation(compose_pulses(none, {}, 0), SingleQubitUnitary::identity()) == 0.0);
  const std::vector<Pulse> two{Pulse::make(pi / 2, 0.3), Pulse::make(pi / 2, 0.5)};
  CHECK(max_deviation(compose_pulses(two, {}, 0), SingleQubitUnitary::y_rotation(0.8)) < 1e-15);
  RabiErrorModel err;
  err.static_offset = {0.0, 0.1};
  const std::vector<Pulse> one{Pulse::make(pi / 2, 1.0)};
  CHECK(max_deviation(compose_pulses(one, err, 1), SingleQubitUnitary::y_rotation(1.1)) < 1e-15);
  CHECK(max_deviation(compose_pulses(one, err, 5), SingleQubitUnitary::y_rotation(1.0)) < 1e-15);
}

TEST_CASE("BB1 is exact at zero amplitude error") {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double eps = 0.49 * k / 99.0;
    const auto u = compose_pulses(bb1_sequence(eps), {}, 0);
    worst = std::max(worst, rotation_infidelity(u, SingleQubitUnitary::y_rotation(pi * (1 - eps))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("trace infidelity") {
  const auto y = SingleQubitUnitary::y_rotation(0.77);
  CHECK(rotation_infidelity(y, y) == 0.0);
  CHECK(rotation_infidelity(SingleQubitUnitary::identity(), SingleQubitUnitary::y_rotation(pi)) ==
        doctest::Approx(1.0));
  const double got = rotation_infidelity(SingleQubitUnitary::y_rotation(pi),
                                         SingleQubitUnitary::y_rotation(pi * 1.01));
  CHECK(got == doctest::Approx(1.0 - std::abs(std::cos(0.005 * pi))).epsilon(1e-10));
  // insensitive to global phase
  auto phased = y;
  for (auto& m : phased.m) m *= std::polar(1.0, 0.4);
  CHECK(rotation_infidelity(y, phased) < 1e-15);
}

TEST_CASE("U3 composite identity") {
  CHECK(composite_u3_check(0.0) < 1e-15);
  CHECK(composite_u3_check(pi / 2) < 1e-12);
  dtc::CounterRng rng(2718);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) worst = std::max(worst, composite_u3_check(pi * rng.uniform()));
  CHECK(worst < 1e-12);
  // the opposite sandwich ordering produces the inverse rotation
  CHECK(composite_u3_reversed_deviation(0.4) > 0.1);
}

TEST_CASE("BB1 suppression at a 5% static error") {
  const std::vector<double> d{0.05};
  const auto rep = bb1_suppression(d);
  const double ratio = rep.rows[0].plain_infidelity / rep.rows[0].bb1_infidelity;
  MESSAGE("plain/BB1 infidelity ratio at delta=0.05: " << ratio);
  CHECK(ratio >= 50.0);
}

TEST_CASE("infidelity scaling") {
  const std::vector<double> d{0.002, 0.004, 0.008, 0.016};
  const auto rep = bb1_suppression(d);
  CHECK(rep.plain_slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.bb1_slope >= 2.5);
  for (const auto& r : rep.rows) CHECK(r.bb1_infidelity * 50 <= rep.rows.back().plain_infidelity);
}

TEST_CASE("noise model") {
  RabiErrorModel bad;
  bad.static_offset = {0.3};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RabiErrorModel noisy;
  noisy.noise_rms = 0.01;
  noisy.noise_seed = 5;
  CHECK_FALSE(noisy.is_ideal());
  const auto seq = bb1_sequence(0.0);
  const auto a = compose_pulses(seq, noisy, 2, 7);
  const auto b = compose_pulses(seq, noisy, 2, 7);
  const auto c = compose_pulses(seq, noisy, 2, 8);
  CHECK(max_deviation(a, b) == 0.0);
  CHECK(max_deviation(a, c) > 0.0);
  // uncorrelated pulse-to-pulse noise is not compensated, so BB1 only wins
  // while the static error dominates
  const std::vector<double> d{0.03};
  const auto rep = bb1_suppression(d, 0.0, 0.002, 200, 3);
  CHECK(rep.rows[0].bb1_infidelity * 10 < rep.rows[0].plain_infidelity);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{1, 2, 4, 8};
  const std::vector<double> y{3, 24, 192, 1536};
  CHECK(log_log_slope(x, y) == doctest::Approx(3.0));
}
