#include "dtc/dense_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace dtc::kernel::oracle {
namespace {

using Complex = std::complex<double>;

void check_oracle_sites(int sites) {
  if (sites < 1 || sites > kMaxOracleSites) {
    throw std::invalid_argument("dense oracle refuses " + std::to_string(sites) +
                                " sites (limit " + std::to_string(kMaxOracleSites) + ")");
  }
}

// Tensor product of one 2x2 factor per site; factors[k] acts on site k.
DenseMatrix tensor_product(int sites, std::span<const Eigen::Matrix2cd> factors) {
  const Eigen::Index dim = Eigen::Index{1} << sites;
  DenseMatrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      Complex v{1.0};
      for (int k = 0; k < sites && v != Complex{0.0}; ++k) {
        v *= factors[k]((r >> k) & 1, (c >> k) & 1);
      }
      out(r, c) = v;
    }
  }
  return out;
}

DenseMatrix hadamard_all(int sites) {
  Eigen::Matrix2cd h;
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  std::vector<Eigen::Matrix2cd> factors(sites, h);
  return tensor_product(sites, factors);
}

}  // namespace

StateVector dense_oracle(int sites, std::span<const DenseMatrix> operators) {
  check_oracle_sites(sites);
  const StateVector initial = init_product_state(sites);
  const Eigen::Index dim = Eigen::Index{1} << sites;
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index k = 0; k < dim; ++k) psi(k) = initial[static_cast<std::size_t>(k)];
  for (const auto& op : operators) {
    if (op.rows() != dim || op.cols() != dim) {
      throw std::invalid_argument("oracle operator has wrong dimension");
    }
    psi = op * psi;
  }
  std::vector<Complex> amps(psi.data(), psi.data() + dim);
  return StateVector(sites, std::move(amps));
}

Eigen::Matrix2cd pauli(char which) {
  Eigen::Matrix2cd p;
  const Complex i{0.0, 1.0};
  switch (which) {
    case 'i': p << 1, 0, 0, 1; break;
    case 'x': p << 0, 1, 1, 0; break;
    case 'y': p << 0, -i, i, 0; break;
    case 'z': p << 1, 0, 0, -1; break;
    default: throw std::invalid_argument(std::string("unknown Pauli '") + which + "'");
  }
  return p;
}

DenseMatrix embed_site(int sites, int site, const Eigen::Matrix2cd& op) {
  check_oracle_sites(sites);
  std::vector<Eigen::Matrix2cd> factors(sites, pauli('i'));
  factors.at(site) = op;
  return tensor_product(sites, factors);
}

DenseMatrix embed_pair(int sites, int a, int b, const Eigen::Matrix2cd& op) {
  check_oracle_sites(sites);
  if (a == b) throw std::invalid_argument("embed_pair needs two distinct sites");
  std::vector<Eigen::Matrix2cd> factors(sites, pauli('i'));
  factors.at(a) = op;
  factors.at(b) = op;
  return tensor_product(sites, factors);
}

DenseMatrix to_x_basis(const DenseMatrix& computational) {
  const int sites = static_cast<int>(std::lround(std::log2(computational.rows())));
  const DenseMatrix h = hadamard_all(sites);
  return h * computational * h;
}

DenseMatrix embed_x_basis_unitary(int sites, int site, const SingleQubitUnitary& u) {
  Eigen::Matrix2cd m;
  m << u(0, 0), u(0, 1), u(1, 0), u(1, 1);
  return embed_site(sites, site, m);
}

DenseMatrix exponentiate(const DenseMatrix& hamiltonian_times_duration) {
  const DenseMatrix generator = Complex{0.0, -1.0} * hamiltonian_times_duration;
  return generator.exp();
}

namespace {

DenseMatrix drive_step(int sites, double epsilon) {
  const Eigen::Index dim = Eigen::Index{1} << sites;
  DenseMatrix h1 = DenseMatrix::Zero(dim, dim);
  for (int i = 0; i < sites; ++i) h1 += embed_site(sites, i, pauli('y'));
  return exponentiate(0.5 * std::numbers::pi * (1.0 - epsilon) * h1);
}

DenseMatrix ising_step(int sites, const PairMatrix& pair_phases) {
  const Eigen::Index dim = Eigen::Index{1} << sites;
  DenseMatrix h2 = DenseMatrix::Zero(dim, dim);
  for (int i = 0; i < sites; ++i) {
    for (int j = i + 1; j < sites; ++j) {
      h2 += pair_phases(i, j) * embed_pair(sites, i, j, pauli('x'));
    }
  }
  return exponentiate(h2);
}

void check_period_inputs(int sites, const PairMatrix& pair_phases,
                         std::span<const double> site_phases) {
  check_oracle_sites(sites);
  if (pair_phases.sites() != sites || site_phases.size() != static_cast<std::size_t>(sites)) {
    throw std::invalid_argument("oracle period inputs do not match site count");
  }
}

}  // namespace

DenseMatrix floquet_period(int sites, double epsilon, const PairMatrix& pair_phases,
                           std::span<const double> site_phases) {
  check_period_inputs(sites, pair_phases, site_phases);
  const Eigen::Index dim = Eigen::Index{1} << sites;
  DenseMatrix h3 = DenseMatrix::Zero(dim, dim);
  for (int i = 0; i < sites; ++i) h3 += site_phases[i] * embed_site(sites, i, pauli('x'));
  const DenseMatrix period = exponentiate(h3) * ising_step(sites, pair_phases) *
                             drive_step(sites, epsilon);
  return to_x_basis(period);
}

DenseMatrix floquet_period_composite_disorder(int sites, double epsilon,
                                              const PairMatrix& pair_phases,
                                              std::span<const double> site_phases) {
  check_period_inputs(sites, pair_phases, site_phases);
  const Eigen::Index dim = Eigen::Index{1} << sites;
  DenseMatrix disorder = DenseMatrix::Identity(dim, dim);
  const double quarter = 0.25 * std::numbers::pi;
  for (int i = 0; i < sites; ++i) {
    const DenseMatrix y = embed_site(sites, i, pauli('y'));
    const DenseMatrix z = embed_site(sites, i, pauli('z'));
    disorder = exponentiate(quarter * y) * exponentiate(site_phases[i] * z) *
               exponentiate(-quarter * y) * disorder;
  }
  const DenseMatrix period = disorder * ising_step(sites, pair_phases) *
                             drive_step(sites, epsilon);
  return to_x_basis(period);
}

}  // namespace dtc::kernel::oracle
