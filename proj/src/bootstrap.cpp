#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dtc/errors.hpp"
#include "dtc/parallel.hpp"
#include "dtc/rng.hpp"
#include "dtc/spectral_analysis.hpp"

namespace dtc::spectral {

std::vector<std::size_t> bootstrap_sample(std::size_t pool_size, int sample_size,
                                          std::uint64_t seed, std::uint64_t repetition,
                                          bool with_replacement) {
  if (sample_size < 1) throw std::invalid_argument("sample size must be >= 1");
  const auto k = static_cast<std::size_t>(sample_size);
  if (!with_replacement && k > pool_size) {
    throw std::invalid_argument("sample size exceeds pool size");
  }
  CounterRng rng(derive_seed(seed, repetition));
  std::vector<std::size_t> out;
  out.reserve(k);
  if (with_replacement) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(rng.below(pool_size));
    return out;
  }
  // Partial Fisher-Yates.
  std::vector<std::size_t> idx(pool_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool_size - i);
    std::swap(idx[i], idx[j]);
    out.push_back(idx[i]);
  }
  return out;
}

BootstrapResult bootstrap_boundary(const InstancePool& pool, const BootstrapOptions& options) {
  if (options.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (pool.site_variances.size() < static_cast<std::size_t>(options.sample_size) &&
      !options.with_replacement) {
    throw std::invalid_argument("pool of " + std::to_string(pool.site_variances.size()) +
                                " instances is smaller than sample size " +
                                std::to_string(options.sample_size));
  }
  if (pool.site_variances.empty()) throw std::invalid_argument("empty instance pool");

  const auto reps = static_cast<std::size_t>(options.repetitions);
  std::vector<double> centers(reps, 0.0);
  std::vector<char> ok(reps, 0);
  parallel_for(reps, options.threads, [&](std::size_t rep) {
    const auto picks = bootstrap_sample(pool.site_variances.size(), options.sample_size,
                                        options.seed, rep, options.with_replacement);
    std::vector<std::vector<double>> chosen;
    chosen.reserve(picks.size());
    for (auto m : picks) chosen.push_back(pool.site_variances[m]);
    const VarianceCurve curve = variance_curve_from_instances(pool.j0t2, pool.epsilons, chosen);
    const FitResult fit = fit_variance_curve(curve, options.fit);
    if (fit.converged) {
      centers[rep] = fit.shape.center;
      ok[rep] = 1;
    }
  });

  BootstrapResult result;
  result.repetitions = options.repetitions;
  result.sample_size = options.sample_size;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (ok[rep]) {
      result.centers.push_back(centers[rep]);
    } else {
      ++result.failures;
    }
  }
  const double failure_fraction = static_cast<double>(result.failures) / static_cast<double>(reps);
  if (failure_fraction > options.max_failure_fraction) {
    std::ostringstream os;
    os << result.failures << " of " << reps << " bootstrap fits failed";
    throw AnalysisFailure(os.str());
  }
  const std::size_t good = result.centers.size();
  if (good == 0) throw AnalysisFailure("no bootstrap fit converged");
  result.mean_center =
      std::accumulate(result.centers.begin(), result.centers.end(), 0.0) / static_cast<double>(good);
  if (good < 2) {
    result.degenerate = true;
    result.stddev_center = 0.0;
    return result;
  }
  double ss = 0.0;
  for (double c : result.centers) ss += (c - result.mean_center) * (c - result.mean_center);
  result.stddev_center = std::sqrt(ss / static_cast<double>(good - 1));
  return result;
}

}  // namespace dtc::spectral
