#include "dtc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dtc::fit {

NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> start,
                             const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0) throw std::invalid_argument("Nelder-Mead needs at least one parameter");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& p) {
    ++result.evaluations;
    const double v = objective(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t k = 0; k < n; ++k) {
    double& c = simplex[k + 1][k];
    c = c != 0.0 ? c * (1.0 + options.initial_step) : options.initial_step;
  }
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) values[k] = eval(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), second(n);
  auto point = [&](double t, const std::vector<double>& worst, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (worst[i] - centroid[i]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s2;
      std::vector<double> v2;
      s2.reserve(n + 1);
      for (auto k : order) {
        s2.push_back(std::move(simplex[k]));
        v2.push_back(values[k]);
      }
      simplex.swap(s2);
      values.swap(v2);
    }

    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = simplex[k][i] - simplex[0][i];
        d2 += d * d;
      }
      diameter = std::max(diameter, std::sqrt(d2));
    }
    if (diameter < options.diameter_tolerance && std::isfinite(values[0])) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto& worst = simplex[n];
    point(-options.reflection, worst, trial);
    const double fr = eval(trial);
    if (fr < values[0]) {
      point(-options.reflection * options.expansion, worst, second);
      const double fe = eval(second);
      if (fe < fr) {
        worst = second;
        values[n] = fe;
      } else {
        worst = trial;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      worst = trial;
      values[n] = fr;
      continue;
    }
    const bool outside = fr < values[n];
    point(outside ? -options.reflection * options.contraction : options.contraction, worst, second);
    const double fc = eval(second);
    if (fc < (outside ? fr : values[n])) {
      worst = second;
      values[n] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        simplex[k][i] = simplex[0][i] + options.shrink * (simplex[k][i] - simplex[0][i]);
      }
      values[k] = eval(simplex[k]);
    }
  }

  result.x = simplex[0];
  result.value = values[0];
  return result;
}

}  // namespace dtc::fit
