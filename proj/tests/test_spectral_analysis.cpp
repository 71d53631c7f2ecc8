#include <cmath>
#include <numbers>

#include "doctest.h"

#include "dtc/errors.hpp"
#include "dtc/rng.hpp"
#include "dtc/spectral_analysis.hpp"

using namespace dtc::spectral;
constexpr double pi = std::numbers::pi;

namespace {

dtc::floquet::Trajectory make_trajectory(int sites, int periods, auto fn) {
  dtc::floquet::Trajectory t;
  t.sites = sites;
  t.periods = periods;
  t.series.resize(static_cast<std::size_t>(sites) * periods);
  for (int i = 0; i < sites; ++i) {
    for (int n = 0; n < periods; ++n) t.series[i * periods + n] = fn(i, n);
  }
  return t;
}

VarianceCurve synthetic_curve(const Lineshape& f, int points, double lo = 0.005, double hi = 0.15) {
  VarianceCurve c;
  c.instances = 10;
  for (int g = 0; g < points; ++g) {
    const double e = lo * std::pow(hi / lo, static_cast<double>(g) / (points - 1));
    c.epsilons.push_back(e);
    c.mean.push_back(f(e));
    c.sem.push_back(0.01);
  }
  return c;
}

}  // namespace

TEST_CASE("DFT amplitudes") {
  std::vector<double> alt(100), ones(100, 1.0);
  for (int n = 0; n < 100; ++n) alt[n] = n % 2 ? -1.0 : 1.0;
  const auto a = dft_amplitudes(alt);
  CHECK(a[50] == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k < 100; ++k) {
    if (k != 50) CHECK(a[k] < 1e-13);
  }
  const auto o = dft_amplitudes(ones);
  CHECK(o[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 1; k < 100; ++k) CHECK(o[k] < 1e-13);
  CHECK_THROWS_AS(dft_amplitudes({}), std::invalid_argument);
}

TEST_CASE("beating signal splits the sub-harmonic peak") {
  auto t = make_trajectory(1, 100, [](int, int n) {
    return (n % 2 ? -1.0 : 1.0) * std::cos(n * pi * 0.03);
  });
  const auto s = dft_spectrum(t);
  const int peak = s.peak_bin(0);
  CHECK((peak == 48 || peak == 52));
  CHECK(s.at(0, 48) == doctest::Approx(s.at(0, 52)).epsilon(1e-12));
  CHECK(s.at(0, 50) < 1.0);
  CHECK(s.at(0, 50) < s.at(0, 48));
  CHECK(s.frequency(50) == 0.5);
}

TEST_CASE("Parseval and sign-flip invariance") {
  dtc::CounterRng rng(6);
  std::vector<double> x(64);
  for (auto& v : x) v = rng.normal();
  const auto a = dft_amplitudes(x);
  double lhs = 0.0, rhs = 0.0;
  for (double v : a) lhs += v * v;
  for (double v : x) rhs += v * v;
  CHECK(std::abs(lhs - rhs / 64) < 1e-9);

  auto t = make_trajectory(3, 64, [&](int i, int n) { return x[(n + 7 * i) % 64]; });
  auto flipped = t;
  for (auto& v : flipped.series) v = -v;
  const auto p = central_peak(dft_spectrum(t));
  const auto q = central_peak(dft_spectrum(flipped));
  CHECK(p.amplitudes == q.amplitudes);
}

TEST_CASE("central peak statistics") {
  const auto rigid = central_peak(dft_spectrum(make_trajectory(4, 100, [](int, int n) {
    return n % 2 ? -1.0 : 1.0;
  })));
  for (double a : rigid.amplitudes) CHECK(a == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rigid.variance < 1e-20);

  const auto flat = central_peak(dft_spectrum(make_trajectory(4, 100, [](int, int) { return 0.3; })));
  for (double a : flat.amplitudes) CHECK(a < 1e-14);

  const auto two = peak_stats_from_amplitudes({0.2, 0.4});
  CHECK(two.mean == doctest::Approx(0.3));
  CHECK(two.variance == doctest::Approx(0.01));

  CHECK_THROWS_AS(central_peak(dft_spectrum(make_trajectory(1, 99, [](int, int) { return 1.0; }))),
                  std::invalid_argument);
}

TEST_CASE("variance curves") {
  const std::vector<double> eps{0.01, 0.02};
  std::vector<std::vector<double>> two{{0.01, 0.05}, {0.03, 0.05}};
  const auto c = variance_curve_from_instances(0.036, eps, two);
  CHECK(c.mean[0] == doctest::Approx(0.02));
  CHECK(c.sem[0] == doctest::Approx(0.01));
  CHECK(c.sem[1] == 0.0);
  CHECK(c.instances == 2);

  std::vector<std::vector<double>> swapped{two[1], two[0]};
  const auto d = variance_curve_from_instances(0.036, eps, swapped);
  CHECK(d.mean == c.mean);

  std::vector<std::vector<PeakStats>> by_point(2);
  for (double v : {0.01, 0.03}) by_point[0].push_back(PeakStats{{}, 0.0, v});
  by_point[1] = by_point[0];
  const auto e = variance_curve(0.036, eps, by_point);
  CHECK(e.mean[0] == doctest::Approx(0.02));
  by_point[1].pop_back();
  CHECK_THROWS_AS(variance_curve(0.036, eps, by_point), std::invalid_argument);

  VarianceCurve bump{0.0, {1, 2, 3}, {0.1, 0.5, 0.2}, {0, 0, 0}, 2};
  CHECK(has_interior_maximum(bump));
  VarianceCurve rising{0.0, {1, 2, 3}, {0.1, 0.2, 0.3}, {0, 0, 0}, 2};
  CHECK_FALSE(has_interior_maximum(rising));
}

TEST_CASE("lineshape fit recovers its own model") {
  const Lineshape truth{1.0, 0.1, 0.3, 0.05};
  const auto curve = synthetic_curve(truth, 16);
  const auto fit = fit_variance_curve(curve);
  CHECK(fit.converged);
  CHECK_FALSE(fit.degenerate);
  CHECK(std::abs(fit.shape.amplitude - 1.0) < 1e-6);
  CHECK(std::abs(fit.shape.offset - 0.1) < 1e-6);
  CHECK(std::abs(fit.shape.gamma - 0.3) < 1e-6);
  CHECK(std::abs(fit.shape.center - 0.05) < 1e-6);

  for (double center : {0.01, 0.03, 0.1}) {
    const Lineshape t2{0.02, 0.001, 0.2, center};
    const auto f2 = fit_variance_curve(synthetic_curve(t2, 16));
    CHECK(std::abs(f2.shape.center - center) < 1e-6);
  }
}

TEST_CASE("flat data is flagged as degenerate") {
  VarianceCurve flat{0.0, {0.01, 0.02, 0.04, 0.08, 0.12}, std::vector<double>(5, 0.2),
                     std::vector<double>(5, 0.01), 5};
  const auto fit = fit_variance_curve(flat);
  CHECK(fit.degenerate);
  CHECK_FALSE(fit.converged);
}

TEST_CASE("fit rejects unusable input") {
  VarianceCurve tiny{0.0, {0.01, 0.02, 0.04, 0.08}, {0.1, 0.2, 0.1, 0.1}, std::vector<double>(4, 0.01), 5};
  CHECK_THROWS_AS(fit_variance_curve(tiny), std::invalid_argument);
  VarianceCurve neg{0.0, {0.0, 0.02, 0.04, 0.08, 0.1}, {0.1, 0.2, 0.1, 0.1, 0.1},
                    std::vector<double>(5, 0.01), 5};
  CHECK_THROWS_AS(fit_variance_curve(neg), std::invalid_argument);
}

TEST_CASE("bootstrap resampling") {
  const Lineshape truth{0.02, 0.001, 0.2, 0.04};
  const auto curve = synthetic_curve(truth, 12);
  InstancePool same{0.036, curve.epsilons, {}};
  dtc::CounterRng rng(3);
  for (int m = 0; m < 20; ++m) same.site_variances.push_back(curve.mean);

  BootstrapOptions opts;
  opts.sample_size = 5;
  opts.repetitions = 10;
  opts.seed = 4;
  const auto r = bootstrap_boundary(same, opts);
  CHECK(r.stddev_center < 1e-12);
  VarianceCurve ident = curve;
  for (auto& s : ident.sem) s = 0.0;
  CHECK(std::abs(r.mean_center - fit_variance_curve(ident).shape.center) < 1e-12);

  opts.repetitions = 1;
  const auto one = bootstrap_boundary(same, opts);
  CHECK(one.degenerate);
  CHECK(one.stddev_center == 0.0);
  CHECK(one.centers.size() == 1);
  CHECK(one.mean_center == one.centers[0]);

  InstancePool noisy = same;
  for (auto& row : noisy.site_variances) {
    for (auto& v : row) v *= 1.0 + 0.3 * rng.normal();
  }
  opts.repetitions = 40;
  const auto a = bootstrap_boundary(noisy, opts);
  opts.threads = 3;
  const auto b = bootstrap_boundary(noisy, opts);
  CHECK(a.centers == b.centers);
  CHECK(a.mean_center == b.mean_center);
  CHECK(a.stddev_center == b.stddev_center);
  CHECK(a.stddev_center > 0.0);
}

TEST_CASE("bootstrap sample draws") {
  const auto s = bootstrap_sample(100, 10, 9, 3, false);
  CHECK(s.size() == 10);
  std::vector<std::size_t> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(s == bootstrap_sample(100, 10, 9, 3, false));
  CHECK(s != bootstrap_sample(100, 10, 9, 4, false));
  CHECK_THROWS_AS(bootstrap_sample(5, 6, 0, 0, false), std::invalid_argument);
  CHECK(bootstrap_sample(5, 6, 0, 0, true).size() == 6);
}

TEST_CASE("bootstrap aborts when most fits fail") {
  InstancePool flat{0.0, {0.01, 0.02, 0.04, 0.08, 0.12}, {}};
  for (int m = 0; m < 10; ++m) flat.site_variances.push_back(std::vector<double>(5, 0.2));
  BootstrapOptions opts;
  opts.sample_size = 4;
  opts.repetitions = 10;
  CHECK_THROWS_AS(bootstrap_boundary(flat, opts), dtc::AnalysisFailure);
}
