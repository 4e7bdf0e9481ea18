#ifndef CTHERM_STATES_HPP
#define CTHERM_STATES_HPP

#include <vector>

#include "ctherm/linalg.hpp"

namespace ctherm::states {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;

/// Orthonormal measurement eigenstates, stored as the columns of a unitary.
class PointerBasis {
 public:
  explicit PointerBasis(ComplexMatrix columns);

  static PointerBasis computational(int dim);

  int dim() const { return columns_.dim(); }
  const ComplexMatrix& matrix() const { return columns_; }
  Complex column(int row, int k) const { return columns_(row, k); }

 private:
  ComplexMatrix columns_;
};

/// Thermal state conditioned on a pointer basis: probabilities
/// p_k = exp(-beta e_k - log_z) on the projectors |psi_k><psi_k|,
/// with e_k the diagonal Hamiltonian matrix elements.
struct ConditionalThermalState {
  double beta = 0.0;
  PointerBasis basis;
  std::vector<double> diag_energies;
  std::vector<double> probs;
  double log_z = 0.0;

  int dim() const { return basis.dim(); }
  HermitianOperator density() const;
};

/// Same classical weights, with each pointer projector tagged by an
/// orthonormal ancilla state on a second factor of equal dimension.
struct SeparableCTS {
  ConditionalThermalState local;
  PointerBasis ancilla;

  int dim() const { return local.dim() * local.dim(); }
  HermitianOperator density() const;
};

std::vector<double> diag_energies(const HermitianOperator& h, const PointerBasis& basis);

// log sum_k exp(-beta e_k), evaluated with a max shift so beta * |e| far
// beyond 700 cannot overflow.
double log_partition(double beta, const std::vector<double>& energies);

// exp(-beta e_k - log_z); formed in log space.
std::vector<double> boltzmann_weights(double beta, const std::vector<double>& energies);

ConditionalThermalState cts(const HermitianOperator& h, const PointerBasis& basis, double beta);

HermitianOperator gibbs(const HermitianOperator& h, double beta);

// log of the canonical partition function Tr exp(-beta H)
double log_partition_gibbs(const HermitianOperator& h, double beta);

SeparableCTS separable_cts(const HermitianOperator& h, const PointerBasis& basis,
                           const PointerBasis& ancilla, double beta);

// -Tr rho ln rho with 0 ln 0 := 0
double von_neumann_entropy(const HermitianOperator& rho);

// Tr rho ln rho - Tr rho ln sigma; domain error when the support of rho
// is not contained in the support of sigma.
double relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma);

// Shannon entropy of a probability vector, shared by the max-entropy checks.
double shannon_entropy(const std::vector<double>& probs);

}  // namespace ctherm::states

#endif
