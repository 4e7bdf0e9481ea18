#include "ctherm/states.hpp"

#include <algorithm>
#include <cmath>

namespace ctherm::states {

PointerBasis::PointerBasis(ComplexMatrix columns) : columns_(std::move(columns)) {
  if (columns_.unitarity_deviation() > 1e-10)
    throw std::invalid_argument("pointer basis columns are not orthonormal within tolerance");
}

PointerBasis PointerBasis::computational(int dim) {
  return PointerBasis(ComplexMatrix::identity(dim));
}

HermitianOperator ConditionalThermalState::density() const {
  const int d = dim();
  ComplexMatrix rho(d);
  for (int k = 0; k < d; ++k) {
    const double p = probs[k];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        rho(i, j) += p * basis.column(i, k) * std::conj(basis.column(j, k));
  }
  return HermitianOperator(std::move(rho));
}

HermitianOperator SeparableCTS::density() const {
  const int d = local.dim();
  ComplexMatrix rho(d * d);
  for (int k = 0; k < d; ++k) {
    const double p = local.probs[k];
    for (int i1 = 0; i1 < d; ++i1)
      for (int i2 = 0; i2 < d; ++i2) {
        const Complex left = local.basis.column(i1, k) * ancilla.column(i2, k);
        for (int j1 = 0; j1 < d; ++j1)
          for (int j2 = 0; j2 < d; ++j2) {
            const Complex right = std::conj(local.basis.column(j1, k) * ancilla.column(j2, k));
            rho(i1 * d + i2, j1 * d + j2) += p * left * right;
          }
      }
  }
  return HermitianOperator(std::move(rho));
}

std::vector<double> diag_energies(const HermitianOperator& h, const PointerBasis& basis) {
  if (h.dim() != basis.dim())
    throw std::invalid_argument("diag_energies: Hamiltonian and basis dimensions differ");
  const int d = h.dim();
  std::vector<double> energies(d);
  for (int k = 0; k < d; ++k) {
    Complex value = 0.0;
    for (int i = 0; i < d; ++i) {
      Complex hv = 0.0;
      for (int j = 0; j < d; ++j) hv += h(i, j) * basis.column(j, k);
      value += std::conj(basis.column(i, k)) * hv;
    }
    energies[k] = value.real();
  }
  return energies;
}

double log_partition(double beta, const std::vector<double>& energies) {
  if (!std::isfinite(beta)) throw std::invalid_argument("log_partition: beta must be finite");
  if (energies.empty()) throw std::invalid_argument("log_partition: empty energy list");
  double shift = -beta * energies[0];
  for (double e : energies) shift = std::max(shift, -beta * e);
  double sum = 0.0;
  for (double e : energies) sum += std::exp(-beta * e - shift);
  return shift + std::log(sum);
}

std::vector<double> boltzmann_weights(double beta, const std::vector<double>& energies) {
  const double log_z = log_partition(beta, energies);
  std::vector<double> probs(energies.size());
  for (size_t k = 0; k < energies.size(); ++k) probs[k] = std::exp(-beta * energies[k] - log_z);
  return probs;
}

ConditionalThermalState cts(const HermitianOperator& h, const PointerBasis& basis, double beta) {
  std::vector<double> energies = diag_energies(h, basis);
  ConditionalThermalState state{beta, basis, std::move(energies), {}, 0.0};
  state.log_z = log_partition(beta, state.diag_energies);
  state.probs = boltzmann_weights(beta, state.diag_energies);

  double total = 0.0;
  for (double p : state.probs) total += p;
  if (std::abs(total - 1.0) > 1e-12)
    throw std::runtime_error("cts: probabilities failed to normalize");
  return state;
}

HermitianOperator gibbs(const HermitianOperator& h, double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("gibbs: beta must be finite");
  linalg::EigenDecomposition ed = eig_hermitian(h);
  std::vector<double> weights = boltzmann_weights(beta, ed.eigenvalues);

  const int d = h.dim();
  ComplexMatrix rho(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex sum = 0.0;
      for (int k = 0; k < d; ++k)
        sum += ed.eigenvectors(i, k) * weights[k] * std::conj(ed.eigenvectors(j, k));
      rho(i, j) = sum;
    }
  return HermitianOperator(std::move(rho));
}

double log_partition_gibbs(const HermitianOperator& h, double beta) {
  return log_partition(beta, eig_hermitian(h).eigenvalues);
}

SeparableCTS separable_cts(const HermitianOperator& h, const PointerBasis& basis,
                           const PointerBasis& ancilla, double beta) {
  if (ancilla.dim() != basis.dim())
    throw std::invalid_argument("separable_cts: ancilla dimension mismatch");
  return SeparableCTS{cts(h, basis, beta), ancilla};
}

double shannon_entropy(const std::vector<double>& probs) {
  double s = 0.0;
  for (double p : probs)
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

double von_neumann_entropy(const HermitianOperator& rho) {
  linalg::require_density(rho, "von_neumann_entropy: rho");
  linalg::EigenDecomposition ed = eig_hermitian(rho);
  double s = 0.0;
  for (double lam : ed.eigenvalues)
    if (lam > 0.0) s -= lam * std::log(lam);
  return s;
}

double relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  linalg::require_density(rho, "relative_entropy: rho");
  linalg::require_density(sigma, "relative_entropy: sigma");

  linalg::EigenDecomposition er = eig_hermitian(rho);
  double tr_rho_ln_rho = 0.0;
  for (double lam : er.eigenvalues)
    if (lam > 0.0) tr_rho_ln_rho += lam * std::log(lam);

  // Tr rho ln sigma = sum_j <u_j|rho|u_j> ln s_j over sigma's eigensystem;
  // weight on a zero eigenvalue of sigma means infinite divergence.
  linalg::EigenDecomposition es = eig_hermitian(sigma);
  const double support_tol = 1e-12;
  const int d = rho.dim();
  double tr_rho_ln_sigma = 0.0;
  for (int j = 0; j < d; ++j) {
    Complex weight = 0.0;
    for (int i = 0; i < d; ++i) {
      Complex rv = 0.0;
      for (int k = 0; k < d; ++k) rv += rho(i, k) * es.eigenvectors(k, j);
      weight += std::conj(es.eigenvectors(i, j)) * rv;
    }
    const double w = std::max(weight.real(), 0.0);
    if (es.eigenvalues[j] <= support_tol) {
      if (w > support_tol)
        throw std::domain_error("relative_entropy: support of rho exceeds support of sigma");
      continue;
    }
    tr_rho_ln_sigma += w * std::log(es.eigenvalues[j]);
  }
  return tr_rho_ln_rho - tr_rho_ln_sigma;
}

}  // namespace ctherm::states
