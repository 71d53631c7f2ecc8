#include "dtc/quantum_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtc::kernel {
namespace {

void check_sites(int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw std::invalid_argument("site count " + std::to_string(sites) + " outside [1, " +
                                std::to_string(kMaxSites) + "]");
  }
}

void check_site(const StateVector& state, int site) {
  if (site < 0 || site >= state.sites()) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside chain of " +
                                std::to_string(state.sites()));
  }
}

// Direct O(L^2) evaluation of the phase of one basis state.
double direct_phase(const DiagonalPhaseSpec& spec, std::size_t index) {
  const int sites = spec.sites();
  double total = 0.0;
  for (int i = 0; i < sites; ++i) {
    const int si = spin_sign(index, i);
    total += spec.site[i] * si;
    for (int j = i + 1; j < sites; ++j) {
      total += spec.pair(i, j) * si * spin_sign(index, j);
    }
  }
  return total;
}

}  // namespace

StateVector::StateVector(int sites, std::vector<Complex> amplitudes)
    : sites_(sites), amplitudes_(std::move(amplitudes)) {
  check_sites(sites);
  if (amplitudes_.size() != (std::size_t{1} << sites)) {
    throw std::invalid_argument("amplitude count " + std::to_string(amplitudes_.size()) +
                                " is not 2^" + std::to_string(sites));
  }
}

double StateVector::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

StateVector init_product_state(int sites) {
  check_sites(sites);
  const std::size_t dim = std::size_t{1} << sites;
  std::vector<Complex> amps(dim, Complex{0.0});
  amps[dim - 1] = 1.0;
  return StateVector(sites, std::move(amps));
}

SingleQubitUnitary SingleQubitUnitary::rotation(double axis, double angle) noexcept {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const double cx = std::cos(axis);
  const double sy = std::sin(axis);
  // c I - i s (cos(axis) sigma^x + sin(axis) sigma^y), with sigma^y = [[0, i], [-i, 0]].
  return {{Complex{c, -s * cx}, Complex{s * sy, 0.0}, Complex{-s * sy, 0.0},
           Complex{c, s * cx}}};
}

SingleQubitUnitary SingleQubitUnitary::y_rotation(double angle) noexcept {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  return {{Complex{c}, Complex{s}, Complex{-s}, Complex{c}}};
}

SingleQubitUnitary SingleQubitUnitary::z_rotation(double angle) noexcept {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  return {{Complex{c}, Complex{0.0, -s}, Complex{0.0, -s}, Complex{c}}};
}

SingleQubitUnitary SingleQubitUnitary::x_rotation(double angle) noexcept {
  return {{std::polar(1.0, -0.5 * angle), Complex{0.0}, Complex{0.0},
           std::polar(1.0, 0.5 * angle)}};
}

SingleQubitUnitary SingleQubitUnitary::adjoint() const noexcept {
  return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

double SingleQubitUnitary::unitarity_error() const noexcept {
  const SingleQubitUnitary p = adjoint() * *this;
  return max_deviation(p, identity());
}

SingleQubitUnitary operator*(const SingleQubitUnitary& a, const SingleQubitUnitary& b) noexcept {
  SingleQubitUnitary r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return r;
}

double max_deviation(const SingleQubitUnitary& a, const SingleQubitUnitary& b) noexcept {
  double worst = 0.0;
  for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.m[k] - b.m[k]));
  return worst;
}

void apply_single_qubit(StateVector& state, int site, const SingleQubitUnitary& u) {
  check_site(state, site);
  auto amps = state.amplitudes();
  const std::size_t stride = std::size_t{1} << site;
  const std::size_t dim = amps.size();
  const Complex u00 = u.m[0], u01 = u.m[1], u10 = u.m[2], u11 = u.m[3];
  for (std::size_t block = 0; block < dim; block += 2 * stride) {
    for (std::size_t k = block; k < block + stride; ++k) {
      const Complex a0 = amps[k];
      const Complex a1 = amps[k + stride];
      amps[k] = u00 * a0 + u01 * a1;
      amps[k + stride] = u10 * a0 + u11 * a1;
    }
  }
}

void apply_uniform_single_qubit(StateVector& state, const SingleQubitUnitary& u) {
  for (int site = 0; site < state.sites(); ++site) apply_single_qubit(state, site, u);
}

PairMatrix::PairMatrix(int sites)
    : sites_(sites), values_(static_cast<std::size_t>(sites) * sites, 0.0) {
  if (sites < 0) throw std::invalid_argument("negative site count");
}

PairMatrix::PairMatrix(int sites, std::vector<double> row_major)
    : sites_(sites), values_(std::move(row_major)) {
  if (sites < 0 || values_.size() != static_cast<std::size_t>(sites) * sites) {
    throw std::invalid_argument("pair matrix must hold sites*sites entries");
  }
  for (int i = 0; i < sites; ++i) {
    if ((*this)(i, i) != 0.0) {
      throw std::invalid_argument("pair matrix diagonal entry " + std::to_string(i) +
                                  " is nonzero");
    }
    for (int j = i + 1; j < sites; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) {
        throw std::invalid_argument("pair matrix is not symmetric at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
      }
    }
  }
}

void PairMatrix::set(int i, int j, double value) {
  if (i < 0 || j < 0 || i >= sites_ || j >= sites_) {
    throw std::invalid_argument("pair index out of range");
  }
  if (i == j) {
    if (value != 0.0) throw std::invalid_argument("pair matrix diagonal must stay zero");
    return;
  }
  values_[index(i, j)] = value;
  values_[index(j, i)] = value;
}

void DiagonalPhaseSpec::validate() const {
  if (site.size() != static_cast<std::size_t>(pair.sites())) {
    throw std::invalid_argument("site phases (" + std::to_string(site.size()) +
                                ") do not match pair matrix (" + std::to_string(pair.sites()) +
                                ")");
  }
}

DiagonalPhaseTable::DiagonalPhaseTable(const DiagonalPhaseSpec& spec) : sites_(spec.sites()) {
  spec.validate();
  check_sites(sites_);
  const std::size_t dim = std::size_t{1} << sites_;
  phases_.resize(dim);

  // Gray-code walk: flipping site b changes the phase by -2 s_b (d_b + field_b),
  // where field_b = sum_j pair(b, j) s_j is maintained incrementally.
  constexpr std::size_t kResync = 4096;
  std::vector<int> spins(sites_, 1);
  std::vector<double> field(sites_, 0.0);
  auto resync = [&](std::size_t index) {
    for (int i = 0; i < sites_; ++i) spins[i] = spin_sign(index, i);
    for (int i = 0; i < sites_; ++i) {
      double f = 0.0;
      for (int j = 0; j < sites_; ++j) f += spec.pair(i, j) * spins[j];
      field[i] = f;
    }
    return direct_phase(spec, index);
  };

  std::size_t gray = 0;
  double total = resync(gray);
  phases_[gray] = total;
  for (std::size_t step = 1; step < dim; ++step) {
    const int bit = std::countr_zero(step);
    gray ^= std::size_t{1} << bit;
    if (step % kResync == 0) {
      total = resync(gray);
    } else {
      const int old_spin = spins[bit];
      total -= 2.0 * old_spin * (spec.site[bit] + field[bit]);
      spins[bit] = -old_spin;
      for (int j = 0; j < sites_; ++j) field[j] -= 2.0 * old_spin * spec.pair(j, bit);
    }
    phases_[gray] = total;
  }

  factors_.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) factors_[k] = std::polar(1.0, -phases_[k]);
}

void DiagonalPhaseTable::apply(StateVector& state) const {
  if (state.sites() != sites_) {
    throw std::invalid_argument("phase table for " + std::to_string(sites_) +
                                " sites applied to state of " + std::to_string(state.sites()));
  }
  auto amps = state.amplitudes();
  for (std::size_t k = 0; k < amps.size(); ++k) amps[k] *= factors_[k];
}

void apply_diagonal_phase(StateVector& state, const DiagonalPhaseSpec& spec) {
  if (spec.sites() != state.sites()) {
    throw std::invalid_argument("diagonal phase spec for " + std::to_string(spec.sites()) +
                                " sites applied to state of " + std::to_string(state.sites()));
  }
  DiagonalPhaseTable(spec).apply(state);
}

std::vector<double> measure_sigma_x(const StateVector& state) {
  const int sites = state.sites();
  std::vector<double> plus_minus(sites, 0.0);
  const auto amps = state.amplitudes();
  // <sigma_i^x> = 1 - 2 P(bit i set) for a normalized state.
  double total = 0.0;
  for (std::size_t k = 0; k < amps.size(); ++k) {
    const double p = std::norm(amps[k]);
    total += p;
    for (int i = 0; i < sites; ++i) {
      if ((k >> i) & 1U) plus_minus[i] += p;
    }
  }
  for (int i = 0; i < sites; ++i) plus_minus[i] = total - 2.0 * plus_minus[i];
  return plus_minus;
}

}  // namespace dtc::kernel
