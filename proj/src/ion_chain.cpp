#include "dtc/ion_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dtc/errors.hpp"

namespace dtc::ions {
namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Solves a * x = b in place (row-major a), partial pivoting.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0) throw NumericalFailure("singular Newton Jacobian");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return x;
}

}  // namespace

std::vector<double> axial_forces(std::span<const double> positions) {
  const std::size_t n = positions.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = positions[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = positions[i] - positions[j];
      v -= (d > 0.0 ? 1.0 : -1.0) / (d * d);
    }
    f[i] = v;
  }
  return f;
}

ChainGeometry equilibrium_positions(int ions) {
  if (ions < kMinIons || ions > kMaxIons) {
    throw std::invalid_argument("ion count must lie in [" + std::to_string(kMinIons) + ", " +
                                std::to_string(kMaxIons) + "]");
  }
  constexpr int kMaxIterations = 200;
  constexpr double kTolerance = 1e-10;
  const auto n = static_cast<std::size_t>(ions);

  // Evenly spaced guess using the approximate minimum spacing 2.018 N^-0.559.
  const double spacing = 2.018 / std::pow(static_cast<double>(ions), 0.559);
  ChainGeometry g;
  g.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.positions[i] = (static_cast<double>(i) - 0.5 * (ions - 1)) * spacing;
  }

  std::vector<double> force = axial_forces(g.positions);
  double residual = norm2(force);
  for (int it = 0; it < kMaxIterations; ++it) {
    if (max_abs(force) < kTolerance) break;
    ++g.iterations;
    std::vector<double> jac(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double diag = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double c = 2.0 / std::pow(std::abs(g.positions[i] - g.positions[j]), 3);
        jac[i * n + j] = -c;
        diag += c;
      }
      jac[i * n + i] = diag;
    }
    const std::vector<double> step = solve_dense(jac, force);
    double scale = 1.0;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = g.positions[i] - scale * step[i];
      if (!std::is_sorted(trial.begin(), trial.end()) ||
          std::adjacent_find(trial.begin(), trial.end()) != trial.end()) {
        continue;
      }
      std::vector<double> trial_force = axial_forces(trial);
      const double trial_residual = norm2(trial_force);
      if (trial_residual < residual || halving == 39) {
        g.positions = std::move(trial);
        force = std::move(trial_force);
        residual = trial_residual;
        break;
      }
    }
  }
  g.max_force_residual = max_abs(force);
  if (!(g.max_force_residual < kTolerance)) {
    std::ostringstream os;
    os << "equilibrium solver for " << ions << " ions did not converge (residual "
       << g.max_force_residual << ")";
    throw NumericalFailure(os.str());
  }
  return g;
}

SymmetricEigen jacobi_eigen(std::span<const double> matrix, int n, double tolerance,
                            int max_sweeps) {
  if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("Jacobi input must be n x n");
  }
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v(un * un, 0.0);  // row-major accumulation; columns are vectors
  for (std::size_t i = 0; i < un; ++i) v[i * un + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = 0; j < un; ++j) {
        if (i != j) s += a[i * un + j] * a[i * un + j];
      }
    }
    return std::sqrt(s);
  };

  SymmetricEigen out;
  while (off_norm() >= tolerance) {
    if (out.sweeps >= max_sweeps) throw NumericalFailure("Jacobi eigensolver did not converge");
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < un; ++p) {
      for (std::size_t q = p + 1; q < un; ++q) {
        const double apq = a[p * un + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * un + q] - a[p * un + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < un; ++k) {
          const double akp = a[k * un + p];
          const double akq = a[k * un + q];
          a[k * un + p] = c * akp - s * akq;
          a[k * un + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < un; ++k) {
          const double apk = a[p * un + k];
          const double aqk = a[q * un + k];
          a[p * un + k] = c * apk - s * aqk;
          a[q * un + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < un; ++k) {
          const double vkp = v[k * un + p];
          const double vkq = v[k * un + q];
          v[k * un + p] = c * vkp - s * vkq;
          v[k * un + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  out.values.resize(un);
  out.vectors.resize(un * un);
  for (std::size_t m = 0; m < un; ++m) {
    out.values[m] = a[m * un + m];
    for (std::size_t i = 0; i < un; ++i) out.vectors[m * un + i] = v[i * un + m];
  }
  return out;
}

std::vector<double> transverse_mode_matrix(const ChainGeometry& geometry, double anisotropy) {
  const auto n = static_cast<std::size_t>(geometry.ions());
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = anisotropy * anisotropy;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double c = 1.0 / std::pow(std::abs(geometry.positions[i] - geometry.positions[j]), 3);
      a[i * n + j] = c;
      diag -= c;
    }
    a[i * n + i] = diag;
  }
  return a;
}

ModeData transverse_modes(const ChainGeometry& geometry, double anisotropy) {
  const int n = geometry.ions();
  if (n < 1) throw std::invalid_argument("empty chain");
  if (!(anisotropy > 0.0)) throw std::invalid_argument("anisotropy must be positive");
  const SymmetricEigen eig = jacobi_eigen(transverse_mode_matrix(geometry, anisotropy), n);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return eig.values[a] > eig.values[b]; });

  ModeData modes;
  modes.ions = n;
  const auto un = static_cast<std::size_t>(n);
  for (int m : order) {
    const double lambda = eig.values[m];
    if (!(lambda > 0.0)) {
      std::ostringstream os;
      os << "transverse mode eigenvalue " << lambda << " <= 0 at anisotropy " << anisotropy
         << ": linear chain is unstable";
      throw ChainUnstable(os.str());
    }
    modes.frequencies.push_back(std::sqrt(lambda));
    auto first = eig.vectors.begin() + static_cast<std::ptrdiff_t>(m * un);
    std::vector<double> vec(first, first + static_cast<std::ptrdiff_t>(un));
    // Sign convention: first nonzero component positive.
    const auto lead = std::find_if(vec.begin(), vec.end(), [](double x) { return std::abs(x) > 1e-12; });
    if (lead != vec.end() && *lead < 0.0) {
      for (double& x : vec) x = -x;
    }
    modes.vectors.insert(modes.vectors.end(), vec.begin(), vec.end());
  }
  return modes;
}

std::vector<double> raw_couplings(const ModeData& modes, double mu) {
  const auto n = static_cast<std::size_t>(modes.ions);
  for (double w : modes.frequencies) {
    if (std::abs(mu - w) < 1e-6) {
      std::ostringstream os;
      os << "detuning " << mu << " is resonant with mode frequency " << w;
      throw std::invalid_argument(os.str());
    }
  }
  std::vector<double> j(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double w = modes.frequencies[m];
    const double denom = mu * mu - w * w;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        j[a * n + b] += modes.b(static_cast<int>(a), static_cast<int>(m)) *
                        modes.b(static_cast<int>(b), static_cast<int>(m)) / denom;
      }
    }
  }
  return j;
}

CouplingProfile coupling_from_modes(const ModeData& modes, double mu) {
  const int n = modes.ions;
  const auto un = static_cast<std::size_t>(n);
  const std::vector<double> raw = raw_couplings(modes, mu);

  double diag_scale = 0.0;
  double nearest = 0.0;
  double off_scale = 0.0;
  for (std::size_t i = 0; i < un; ++i) {
    diag_scale = std::max(diag_scale, std::abs(raw[i * un + i]));
    for (std::size_t k = 0; k < un; ++k) {
      if (k != i) off_scale = std::max(off_scale, std::abs(raw[i * un + k]));
    }
    if (i + 1 < un && std::abs(raw[i * un + i + 1]) > std::abs(nearest)) nearest = raw[i * un + i + 1];
  }
  if (n < 2 || off_scale <= 1e-9 * diag_scale || nearest == 0.0) {
    throw std::invalid_argument("coupling profile is degenerate (off-diagonal couplings vanish)");
  }

  CouplingProfile profile;
  profile.couplings = kernel::PairMatrix(n);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      // Symmetrize explicitly so J_ij == J_ji bit for bit.
      const double v = 0.5 * (raw[static_cast<std::size_t>(i) * un + k] +
                              raw[static_cast<std::size_t>(k) * un + i]);
      profile.couplings.set(i, k, v / std::abs(nearest));
    }
  }
  if (n >= 4) profile.fit = fit_power_law(profile.couplings);
  return profile;
}

PowerLawFit fit_power_law(const kernel::PairMatrix& couplings) {
  const int n = couplings.sites();
  if (n < 4) throw std::invalid_argument("power-law fit needs at least 4 sites");
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double v = std::abs(couplings(i, k));
      if (v == 0.0) continue;
      x.push_back(std::log(static_cast<double>(k - i)));
      y.push_back(std::log(v));
    }
  }
  if (x.size() < 2) throw std::invalid_argument("power-law fit needs at least two nonzero couplings");
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("power-law fit needs pairs at more than one distance");
  PowerLawFit fit;
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  fit.alpha = -slope;
  fit.prefactor = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (intercept + slope * x[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  fit.pairs = static_cast<int>(x.size());
  return fit;
}

std::vector<double> mean_coupling_by_distance(const kernel::PairMatrix& couplings) {
  const int n = couplings.sites();
  std::vector<double> mean(static_cast<std::size_t>(std::max(n - 1, 0)), 0.0);
  for (int r = 1; r < n; ++r) {
    double s = 0.0;
    for (int i = 0; i + r < n; ++i) s += std::abs(couplings(i, i + r));
    mean[static_cast<std::size_t>(r - 1)] = s / (n - r);
  }
  return mean;
}

}  // namespace dtc::ions
