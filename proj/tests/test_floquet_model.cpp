#include <cmath>
#include <numbers>

#include "doctest.h"

#include "dtc/dense_oracle.hpp"
#include "dtc/floquet_model.hpp"
#include "dtc/spectral_analysis.hpp"

using namespace dtc::floquet;
constexpr double pi = std::numbers::pi;

TEST_CASE("power-law couplings") {
  CHECK(build_power_law_couplings(2, 0.036, 0.7)(0, 1) == 0.036);
  const auto p = build_power_law_couplings(3, 0.036, 1.51);
  CHECK(p(0, 2) == doctest::Approx(0.036 / std::pow(2.0, 1.51)).epsilon(1e-15));
  CHECK(p(2, 0) == p(0, 2));
  CHECK(p(1, 1) == 0.0);
  const auto z = build_power_law_couplings(5, 0.0, 1.51);
  for (double v : z.row_major()) CHECK(v == 0.0);
}

TEST_CASE("config validation") {
  FloquetConfig c;
  CHECK_NOTHROW(c.validate());
  c.epsilon = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.epsilon = -0.01;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.epsilon = 0.1;
  c.couplings = PowerLawCouplings{0.01, 3.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.couplings = PowerLawCouplings{-0.01, 1.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.couplings = PowerLawCouplings{0.036, 1.51};
  c.disorder_scale = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.disorder_scale = pi;
  c.periods = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.periods = 100;
  c.couplings = PairMatrix(4);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  FloquetConfig w;
  CHECK_FALSE(w.regime_warning().has_value());
  w.couplings = PowerLawCouplings{0.05, 1.51};
  CHECK(w.regime_warning().has_value());
  CHECK(pulse_model_from_string("bb1") == PulseModel::BB1);
  CHECK_THROWS_AS(pulse_model_from_string("gauss"), std::invalid_argument);
}

TEST_CASE("disorder sampling") {
  const auto zero = sample_disorder(10, 0.0, 5);
  for (double d : zero.phases) CHECK(d == 0.0);

  const auto a = sample_disorder(10, pi, 77);
  const auto b = sample_disorder(10, pi, 77);
  CHECK(a.phases == b.phases);
  for (double d : a.phases) CHECK((d >= 0.0 && d <= pi));
  CHECK(disorder_for_instance(10, pi, 2024, 3).phases ==
        disorder_for_instance(10, pi, 2024, 3).phases);
  CHECK(disorder_for_instance(10, pi, 2024, 3).phases !=
        disorder_for_instance(10, pi, 2024, 4).phases);

  double sum = 0.0;
  const int draws = 1000;
  for (int k = 0; k < draws; ++k) {
    for (double d : disorder_for_instance(10, pi, 31, k).phases) sum += d;
  }
  const double n = 10.0 * draws;
  const double se = pi / std::sqrt(12.0) / std::sqrt(n);
  CHECK(std::abs(sum / n - pi / 2) < 3 * se);
}

TEST_CASE("perfect flip negates every basis state") {
  FloquetConfig c;
  c.sites = 6;
  c.epsilon = 0.0;
  c.couplings = PowerLawCouplings{0.3, 1.1};
  const auto inst = sample_disorder(6, pi, 8);
  for (std::size_t b : {std::size_t{0}, std::size_t{5}, std::size_t{42}, std::size_t{63}}) {
    std::vector<dtc::kernel::Complex> amps(64);
    amps[b] = 1.0;
    dtc::kernel::StateVector s(6, amps);
    const auto before = dtc::kernel::measure_sigma_x(s);
    apply_floquet_period(s, c, inst);
    const auto after = dtc::kernel::measure_sigma_x(s);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(after[i] + before[i]) < 1e-12);
  }
}

TEST_CASE("rigidity at epsilon = 0") {
  FloquetConfig c;
  c.epsilon = 0.0;
  c.couplings = PowerLawCouplings{0.036, 1.51};
  const auto t = run_trajectory(c, disorder_for_instance(10, pi, 1, 0));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int n = 0; n < 100; ++n) worst = std::max(worst, std::abs(t.at(i, n) - (n % 2 ? -1.0 : 1.0)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("non-interacting closed form") {
  for (int sites : {1, 4}) {
    FloquetConfig c;
    c.sites = sites;
    c.epsilon = 0.03;
    c.disorder_scale = 0.0;
    const auto t = run_trajectory(c, sample_disorder(sites, 0.0, 0));
    double worst = 0.0;
    for (int i = 0; i < sites; ++i) {
      for (int n = 0; n < c.periods; ++n) {
        const double ref = (n % 2 ? -1.0 : 1.0) * std::cos(n * pi * 0.03);
        worst = std::max(worst, std::abs(t.at(i, n) - ref));
      }
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("two-site clean chain stays symmetric") {
  FloquetConfig c;
  c.sites = 2;
  c.epsilon = 0.07;
  c.couplings = PowerLawCouplings{0.036, 1.51};
  c.disorder_scale = 0.0;
  const auto t = run_trajectory(c, sample_disorder(2, 0.0, 0));
  for (int n = 0; n < c.periods; ++n) CHECK(std::abs(t.at(0, n) - t.at(1, n)) < 1e-13);
}

TEST_CASE("trajectory determinism and metadata") {
  FloquetConfig c;
  c.epsilon = 0.05;
  c.couplings = PowerLawCouplings{0.024, 1.51};
  const auto inst = disorder_for_instance(10, pi, 9, 2);
  const auto a = run_trajectory(c, inst);
  const auto b = run_trajectory(c, inst);
  CHECK(a.series == b.series);
  CHECK(a.instance_index == 2);
  CHECK(a.instance_seed == inst.seed);
  CHECK(a.series.size() == 1000);
  CHECK(a.nearest_neighbour_phase == 0.024);
  CHECK(a.at(0, 0) == 1.0);
}

TEST_CASE("locking at the sub-harmonic") {
  FloquetConfig c;
  c.epsilon = 0.03;
  c.couplings = PowerLawCouplings{0.036, 1.51};
  const auto t = run_trajectory(c, disorder_for_instance(10, pi, 2024, 0));
  const auto s = dtc::spectral::dft_spectrum(t);
  for (int i = 0; i < 10; ++i) CHECK(s.peak_bin(i) == 50);
}

TEST_CASE("explicit coupling matrix matches the power law it encodes") {
  FloquetConfig a;
  a.sites = 6;
  a.epsilon = 0.04;
  a.couplings = PowerLawCouplings{0.03, 1.51};
  FloquetConfig b = a;
  b.couplings = build_power_law_couplings(6, 0.03, 1.51);
  const auto inst = sample_disorder(6, pi, 4);
  CHECK(run_trajectory(a, inst).series == run_trajectory(b, inst).series);
}

TEST_CASE("BB1 drive with perfect amplitude matches the ideal drive") {
  FloquetConfig a;
  a.sites = 6;
  a.epsilon = 0.04;
  a.couplings = PowerLawCouplings{0.03, 1.51};
  FloquetConfig b = a;
  b.pulse_model = PulseModel::BB1;
  const auto inst = sample_disorder(6, pi, 4);
  const auto ta = run_trajectory(a, inst);
  const auto tb = run_trajectory(b, inst);
  double worst = 0.0;
  for (std::size_t k = 0; k < ta.series.size(); ++k) {
    worst = std::max(worst, std::abs(ta.series[k] - tb.series[k]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("BB1 drive tolerates static Rabi errors better than the plain drive") {
  // the ideal model ignores amplitude errors; a plain pulse short by 3% is the
  // ideal drive at epsilon = 0.03
  FloquetConfig ref;
  ref.sites = 6;
  ref.epsilon = 0.0;
  ref.couplings = PowerLawCouplings{0.02, 1.51};
  FloquetConfig plain = ref;
  plain.epsilon = 0.03;
  FloquetConfig bb1 = ref;
  bb1.pulse_model = PulseModel::BB1;
  bb1.rabi_error = dtc::pulse::RabiErrorModel::uniform_static(6, -0.03);
  const auto inst = sample_disorder(6, pi, 12);
  const auto tr = run_trajectory(ref, inst);
  const auto tp = run_trajectory(plain, inst);
  const auto tb = run_trajectory(bb1, inst);
  double dp = 0.0, db = 0.0;
  for (std::size_t k = 0; k < tr.series.size(); ++k) {
    dp = std::max(dp, std::abs(tp.series[k] - tr.series[k]));
    db = std::max(db, std::abs(tb.series[k] - tr.series[k]));
  }
  MESSAGE("plain deviation " << dp << ", BB1 deviation " << db);
  CHECK(db < 0.01 * dp);
}

TEST_CASE("noisy BB1 drive is reproducible") {
  FloquetConfig c;
  c.sites = 5;
  c.epsilon = 0.03;
  c.pulse_model = PulseModel::BB1;
  c.rabi_error.noise_rms = 0.01;
  c.rabi_error.noise_seed = 3;
  const auto inst = sample_disorder(5, pi, 1);
  CHECK(run_trajectory(c, inst).series == run_trajectory(c, inst).series);
}

TEST_CASE("composite disorder step agrees with the diagonal form") {
  const auto pair = build_power_law_couplings(3, 0.2, 1.51);
  const std::vector<double> d{0.3, 1.1, 2.9};
  const auto a = dtc::kernel::oracle::floquet_period(3, 0.05, pair, d);
  const auto b = dtc::kernel::oracle::floquet_period_composite_disorder(3, 0.05, pair, d);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}
