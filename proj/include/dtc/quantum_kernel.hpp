#pragma once

// Matrix-free pure-state primitives for spin-1/2 chains.
//
// Basis convention: states are stored in the sigma^x eigenbasis. Bit i of a
// basis index is site i (site 0 is the lowest-order bit); bit = 0 means
// sigma_i^x = +1 and bit = 1 means sigma_i^x = -1. In this basis sigma^x is
// diagonal and a product of x-diagonal operators is a pure phase per basis
// state, so Ising and field terms never require a basis change.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dtc::kernel {

using Complex = std::complex<double>;

inline constexpr int kMaxSites = 24;

class StateVector {
 public:
  /// Takes ownership of explicit amplitudes; size must be 2^sites.
  StateVector(int sites, std::vector<Complex> amplitudes);

  int sites() const noexcept { return sites_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t index) const { return amplitudes_[index]; }

  double norm_squared() const noexcept;

 private:
  int sites_;
  std::vector<Complex> amplitudes_;
};

/// |down>_x on every site: amplitude 1 on the all-ones index.
StateVector init_product_state(int sites);

/// 2x2 matrix in the (sigma^x = +1, sigma^x = -1) ordering, row-major.
struct SingleQubitUnitary {
  std::array<Complex, 4> m{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};

  static SingleQubitUnitary identity() noexcept { return {}; }

  /// exp(-i (angle/2) (cos(axis) sigma^x + sin(axis) sigma^y)).
  static SingleQubitUnitary rotation(double axis, double angle) noexcept;

  /// exp(-i (angle/2) sigma^y); real in this basis.
  static SingleQubitUnitary y_rotation(double angle) noexcept;

  /// exp(-i (angle/2) sigma^z).
  static SingleQubitUnitary z_rotation(double angle) noexcept;

  /// exp(-i (angle/2) sigma^x); diagonal in this basis.
  static SingleQubitUnitary x_rotation(double angle) noexcept;

  const Complex& operator()(int row, int col) const noexcept { return m[2 * row + col]; }
  Complex& operator()(int row, int col) noexcept { return m[2 * row + col]; }

  SingleQubitUnitary adjoint() const noexcept;
  Complex trace() const noexcept { return m[0] + m[3]; }

  /// Largest entrywise deviation of U^dagger U from the identity.
  double unitarity_error() const noexcept;
};

/// Matrix product: (a * b) applies b first.
SingleQubitUnitary operator*(const SingleQubitUnitary& a, const SingleQubitUnitary& b) noexcept;

/// Largest entrywise |a - b|.
double max_deviation(const SingleQubitUnitary& a, const SingleQubitUnitary& b) noexcept;

void apply_single_qubit(StateVector& state, int site, const SingleQubitUnitary& u);

/// Same unitary on every site.
void apply_uniform_single_qubit(StateVector& state, const SingleQubitUnitary& u);

/// Dense symmetric matrix with zero diagonal (pair phases, couplings).
class PairMatrix {
 public:
  PairMatrix() = default;
  explicit PairMatrix(int sites);
  /// Row-major sites x sites; rejects asymmetric input or a nonzero diagonal.
  PairMatrix(int sites, std::vector<double> row_major);

  int sites() const noexcept { return sites_; }
  double operator()(int i, int j) const noexcept { return values_[index(i, j)]; }
  /// Sets both (i, j) and (j, i).
  void set(int i, int j, double value);
  std::span<const double> row_major() const noexcept { return values_; }

  friend bool operator==(const PairMatrix&, const PairMatrix&) = default;

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(sites_) +
           static_cast<std::size_t>(j);
  }

  int sites_ = 0;
  std::vector<double> values_;
};

/// Phases of exp(-i [sum_{i<j} pair(i,j) s_i s_j + sum_i site_i s_i]).
struct DiagonalPhaseSpec {
  PairMatrix pair;
  std::vector<double> site;

  int sites() const noexcept { return pair.sites(); }
  void validate() const;
};

/// Total phase evaluated once per basis state. Values are recomputed from
/// scratch every few thousand Gray-code steps to bound rounding drift.
class DiagonalPhaseTable {
 public:
  explicit DiagonalPhaseTable(const DiagonalPhaseSpec& spec);

  int sites() const noexcept { return sites_; }
  /// Phase (radians) of the given basis index, before the minus sign.
  double phase(std::size_t index) const noexcept { return phases_[index]; }
  void apply(StateVector& state) const;

 private:
  int sites_;
  std::vector<double> phases_;
  std::vector<Complex> factors_;
};

void apply_diagonal_phase(StateVector& state, const DiagonalPhaseSpec& spec);

/// <sigma_i^x> for every site.
std::vector<double> measure_sigma_x(const StateVector& state);

/// sigma^x eigenvalue of site `site` in basis state `index`.
constexpr int spin_sign(std::size_t index, int site) noexcept {
  return ((index >> site) & 1U) != 0 ? -1 : 1;
}

}  // namespace dtc::kernel
