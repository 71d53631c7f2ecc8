#pragma once

// Brute-force reference evolution built from explicit Kronecker products and
// dense matrix exponentials. Operators are first assembled in the
// computational (sigma^z) basis with the textbook Pauli matrices and then
// conjugated into the sigma^x eigenbasis by a Hadamard on every site, so the
// oracle shares no basis-specific code with the matrix-free kernel.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dtc/quantum_kernel.hpp"

namespace dtc::kernel::oracle {

using DenseMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxOracleSites = 6;

/// Applies `operators` in order (first element first) to init_product_state.
StateVector dense_oracle(int sites, std::span<const DenseMatrix> operators);

/// Pauli matrix ('x', 'y', 'z') or 'i' in the computational basis.
Eigen::Matrix2cd pauli(char which);

/// One-site operator embedded into the full space (site 0 = lowest bit).
DenseMatrix embed_site(int sites, int site, const Eigen::Matrix2cd& op);

/// Two-site product op_a (site a) op_b (site b).
DenseMatrix embed_pair(int sites, int a, int b, const Eigen::Matrix2cd& op);

/// Converts a computational-basis operator into the sigma^x eigenbasis.
DenseMatrix to_x_basis(const DenseMatrix& computational);

/// Full-space form of a 2x2 unitary already written in the sigma^x eigenbasis.
DenseMatrix embed_x_basis_unitary(int sites, int site, const SingleQubitUnitary& u);

/// exp(-i H) via Eigen's matrix exponential.
DenseMatrix exponentiate(const DenseMatrix& hamiltonian_times_duration);

/// One Floquet period exp(-i H3 t3) exp(-i H2 t2) exp(-i H1 t1) in the
/// sigma^x eigenbasis, with g t1 = pi (1 - epsilon) / 2, pair phases J_ij t2
/// (i < j counted once) and site phases D_i t3.
DenseMatrix floquet_period(int sites, double epsilon, const PairMatrix& pair_phases,
                           std::span<const double> site_phases);

/// Same period with the disorder step built as the composite sandwich
/// e^{-i pi/4 sigma^y} e^{-i d sigma^z} e^{+i pi/4 sigma^y} on each site.
DenseMatrix floquet_period_composite_disorder(int sites, double epsilon,
                                              const PairMatrix& pair_phases,
                                              std::span<const double> site_phases);

}  // namespace dtc::kernel::oracle
