#include "dtc/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dtc::spectral {

int Spectrum::peak_bin(int site) const {
  const auto amps = site_amplitudes(site);
  int best = 0;
  for (int k = 1; k < samples; ++k) {
    if (amps[k] > amps[best]) best = k;
  }
  return best;
}

std::vector<double> dft_amplitudes(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) throw std::invalid_argument("DFT needs at least two samples");
  // Twiddles indexed by (k * t) mod N keep every bin on the same N roots.
  std::vector<std::complex<double>> roots(n);
  for (std::size_t t = 0; t < n; ++t) {
    roots[t] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t) /
                                   static_cast<double>(n));
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0};
    std::size_t phase = 0;
    for (std::size_t t = 0; t < n; ++t) {
      acc += series[t] * roots[phase];
      phase += k;
      if (phase >= n) phase -= n;
    }
    out[k] = std::abs(acc) / static_cast<double>(n);
  }
  return out;
}

Spectrum dft_spectrum(const floquet::Trajectory& trajectory) {
  Spectrum s;
  s.sites = trajectory.sites;
  s.samples = trajectory.periods;
  s.amplitudes.reserve(trajectory.series.size());
  for (int i = 0; i < trajectory.sites; ++i) {
    const auto amps = dft_amplitudes(trajectory.site_series(i));
    s.amplitudes.insert(s.amplitudes.end(), amps.begin(), amps.end());
  }
  return s;
}

PeakStats peak_stats_from_amplitudes(std::vector<double> amplitudes) {
  PeakStats p;
  p.amplitudes = std::move(amplitudes);
  if (p.amplitudes.empty()) return p;
  double sum = 0.0;
  for (double a : p.amplitudes) sum += a;
  p.mean = sum / static_cast<double>(p.amplitudes.size());
  double ss = 0.0;
  for (double a : p.amplitudes) ss += (a - p.mean) * (a - p.mean);
  p.variance = ss / static_cast<double>(p.amplitudes.size());
  return p;
}

PeakStats central_peak(const Spectrum& spectrum) {
  if (spectrum.samples % 2 != 0) {
    throw std::invalid_argument("central peak needs an even sample count (got " +
                                std::to_string(spectrum.samples) + ")");
  }
  const int half = spectrum.samples / 2;
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(spectrum.sites));
  for (int i = 0; i < spectrum.sites; ++i) a.push_back(spectrum.at(i, half));
  return peak_stats_from_amplitudes(std::move(a));
}

namespace {

void check_grid(std::span<const double> epsilons) {
  if (epsilons.empty()) throw std::invalid_argument("empty epsilon grid");
  for (std::size_t g = 1; g < epsilons.size(); ++g) {
    if (!(epsilons[g] > epsilons[g - 1])) {
      throw std::invalid_argument("epsilon grid must be strictly increasing");
    }
  }
}

}  // namespace

VarianceCurve variance_curve(double j0t2, std::span<const double> epsilons,
                             std::span<const std::vector<PeakStats>> by_point) {
  check_grid(epsilons);
  if (by_point.size() != epsilons.size()) {
    throw std::invalid_argument("peak statistics cover " + std::to_string(by_point.size()) +
                                " grid points, grid has " + std::to_string(epsilons.size()));
  }
  VarianceCurve c;
  c.j0t2 = j0t2;
  c.epsilons.assign(epsilons.begin(), epsilons.end());
  c.instances = -1;
  for (std::size_t g = 0; g < epsilons.size(); ++g) {
    const auto& stats = by_point[g];
    if (stats.size() < 2) {
      std::ostringstream os;
      os << "epsilon = " << epsilons[g] << " has " << stats.size()
         << " instances; at least 2 are required";
      throw std::invalid_argument(os.str());
    }
    const double m = static_cast<double>(stats.size());
    double sum = 0.0;
    for (const auto& s : stats) sum += s.variance;
    const double mean = sum / m;
    double ss = 0.0;
    for (const auto& s : stats) ss += (s.variance - mean) * (s.variance - mean);
    c.mean.push_back(mean);
    c.sem.push_back(std::sqrt(ss / (m - 1.0)) / std::sqrt(m));
    c.instances = c.instances < 0 ? static_cast<int>(stats.size())
                                  : std::min(c.instances, static_cast<int>(stats.size()));
  }
  return c;
}

VarianceCurve variance_curve_from_instances(double j0t2, std::span<const double> epsilons,
                                            std::span<const std::vector<double>> site_variances) {
  std::vector<std::vector<PeakStats>> by_point(epsilons.size());
  for (std::size_t m = 0; m < site_variances.size(); ++m) {
    if (site_variances[m].size() != epsilons.size()) {
      throw std::invalid_argument("instance " + std::to_string(m) + " curve has " +
                                  std::to_string(site_variances[m].size()) + " points, grid has " +
                                  std::to_string(epsilons.size()));
    }
    for (std::size_t g = 0; g < epsilons.size(); ++g) {
      PeakStats p;
      p.variance = site_variances[m][g];
      by_point[g].push_back(std::move(p));
    }
  }
  return variance_curve(j0t2, epsilons, by_point);
}

bool has_interior_maximum(const VarianceCurve& curve) {
  const std::size_t n = curve.mean.size();
  if (n < 3) return false;
  std::size_t best = 0;
  for (std::size_t g = 1; g < n; ++g) {
    if (curve.mean[g] > curve.mean[best]) best = g;
  }
  return best > 0 && best + 1 < n;
}

}  // namespace dtc::spectral
