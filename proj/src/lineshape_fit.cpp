#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dtc/nelder_mead.hpp"
#include "dtc/spectral_analysis.hpp"

namespace dtc::spectral {

double Lineshape::operator()(double epsilon) const noexcept {
  const double u = std::log10(epsilon / center) / gamma;
  return amplitude / (1.0 + u * u) + offset;
}

namespace {

// Parameters are (A, B, ln gamma, log10 eps_p); the center is confined to the
// grid span by returning +inf outside it.
struct WeightedProblem {
  std::vector<double> log_eps;
  std::vector<double> y;
  std::vector<double> w;
  double lo = 0.0;
  double hi = 0.0;

  double operator()(std::span<const double> p) const {
    if (p[3] < lo || p[3] > hi) return std::numeric_limits<double>::infinity();
    const double inv_gamma = std::exp(-p[2]);
    if (!std::isfinite(inv_gamma) || inv_gamma == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    double total = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double u = (log_eps[j] - p[3]) * inv_gamma;
      const double r = p[0] / (1.0 + u * u) + p[1] - y[j];
      total += w[j] * r * r;
    }
    return total;
  }
};

}  // namespace

FitResult fit_variance_curve(const VarianceCurve& curve, const FitOptions& options) {
  const std::size_t n = curve.epsilons.size();
  if (n < 5) throw std::invalid_argument("lineshape fit needs at least 5 grid points");
  if (curve.mean.size() != n || curve.sem.size() != n) {
    throw std::invalid_argument("variance curve columns have inconsistent lengths");
  }
  WeightedProblem problem;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(curve.epsilons[j] > 0.0)) throw std::invalid_argument("lineshape fit needs epsilon > 0");
    problem.log_eps.push_back(std::log10(curve.epsilons[j]));
    problem.y.push_back(curve.mean[j]);
    const double s = std::max(curve.sem[j], options.sem_floor);
    problem.w.push_back(1.0 / (s * s));
  }
  problem.lo = *std::min_element(problem.log_eps.begin(), problem.log_eps.end());
  problem.hi = *std::max_element(problem.log_eps.begin(), problem.log_eps.end());

  const auto [ymin, ymax] = std::minmax_element(problem.y.begin(), problem.y.end());
  const double a0 = *ymax - *ymin;
  const double b0 = *ymin;
  const double gamma0 = std::max((problem.hi - problem.lo) / 4.0, 1e-3);

  fit::NelderMeadOptions nm;
  nm.diameter_tolerance = options.diameter_tolerance;
  nm.max_evaluations = options.max_evaluations;

  FitResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  std::vector<double> gammas{gamma0};
  for (double g : options.extra_gamma_starts) gammas.push_back(g);
  for (std::size_t start = 0; start < n * gammas.size(); ++start) {
    std::vector<double> x{a0, b0, std::log(gammas[start / n]), problem.log_eps[start % n]};
    fit::NelderMeadResult r = fit::nelder_mead(problem, x, nm);
    int evaluations = r.evaluations;
    int iterations = r.iterations;
    // Restart from the incumbent: a collapsed simplex can stall off-minimum.
    for (int k = 0; k < options.refinement_restarts; ++k) {
      fit::NelderMeadResult again = fit::nelder_mead(problem, r.x, nm);
      evaluations += again.evaluations;
      iterations += again.iterations;
      const bool improved = again.value < r.value;
      if (again.value <= r.value) r = std::move(again);
      if (!improved) break;
    }
    if (r.value < best.objective) {
      best.objective = r.value;
      best.converged = r.converged;
      best_x = r.x;
    }
    best.evaluations += evaluations;
    best.iterations += iterations;
  }

  const double center = std::clamp(std::pow(10.0, best_x[3]), curve.epsilons.front(),
                                   curve.epsilons.back());
  best.shape = {best_x[0], best_x[1], std::exp(best_x[2]), center};
  const double scale = std::max({std::abs(best.shape.offset), a0, 1e-300});
  if (std::abs(best.shape.amplitude) <= 1e-6 * scale) {
    best.degenerate = true;
    best.converged = false;
  }
  return best;
}

}  // namespace dtc::spectral
