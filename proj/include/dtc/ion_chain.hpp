#pragma once

// Linear Coulomb crystal in a harmonic trap: equilibrium positions,
// transverse normal modes and the phonon-mediated Ising coupling profile.
// Lengths are in units of (e^2 / (4 pi eps0 M omega_z^2))^(1/3) and
// frequencies in units of the axial trap frequency omega_z.

#include <span>
#include <vector>

#include "dtc/quantum_kernel.hpp"

namespace dtc::ions {

inline constexpr int kMinIons = 2;
inline constexpr int kMaxIons = 50;

struct ChainGeometry {
  std::vector<double> positions;  // strictly increasing
  double max_force_residual = 0.0;
  int iterations = 0;

  int ions() const noexcept { return static_cast<int>(positions.size()); }
};

/// Net dimensionless force on every ion at the given positions.
std::vector<double> axial_forces(std::span<const double> positions);

/// Damped Newton iteration from an evenly spaced guess.
ChainGeometry equilibrium_positions(int ions);

struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major: vector m occupies [m*n, (m+1)*n)
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric row-major n x n matrix.
SymmetricEigen jacobi_eigen(std::span<const double> matrix, int n, double tolerance = 1e-12,
                            int max_sweeps = 100);

struct ModeData {
  int ions = 0;
  std::vector<double> frequencies;  // descending
  std::vector<double> vectors;      // b_im at [m * ions + i]

  double b(int ion, int mode) const { return vectors[static_cast<std::size_t>(mode) * ions + ion]; }
};

/// Transverse mode matrix A with A_ii = a^2 - sum_k |u_i - u_k|^-3 and
/// A_ij = |u_i - u_j|^-3, row-major.
std::vector<double> transverse_mode_matrix(const ChainGeometry& geometry, double anisotropy);

ModeData transverse_modes(const ChainGeometry& geometry, double anisotropy);

struct PowerLawFit {
  double alpha = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // rms of log residuals
  int pairs = 0;
};

struct CouplingProfile {
  kernel::PairMatrix couplings;  // normalized: largest |nearest neighbour| = 1
  PowerLawFit fit;               // filled when the chain has >= 4 ions
};

/// sum_m b_im b_jm / (mu^2 - omega_m^2), up to the positive scale Omega^2 omega_R,
/// row-major including the diagonal.
std::vector<double> raw_couplings(const ModeData& modes, double mu);

CouplingProfile coupling_from_modes(const ModeData& modes, double mu);

/// Least-squares fit of log|J_ij| = log j0 - alpha log|i - j| over all pairs
/// with nonzero coupling.
PowerLawFit fit_power_law(const kernel::PairMatrix& couplings);

/// Mean |J_ij| over pairs at each distance 1 .. n-1.
std::vector<double> mean_coupling_by_distance(const kernel::PairMatrix& couplings);

}  // namespace dtc::ions
