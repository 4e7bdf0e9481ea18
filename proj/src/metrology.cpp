#include "ctherm/metrology.hpp"

#include <cmath>

namespace ctherm::metrology {

namespace {

double weighted_variance(const std::vector<double>& probs, const std::vector<double>& values) {
  double mean = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) mean += probs[k] * values[k];
  double var = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    const double dev = values[k] - mean;
    var += probs[k] * dev * dev;
  }
  return var;
}

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

// F(beta, beta+eps) from three log partitions of the same energy list
double partition_ratio_fidelity(const std::vector<double>& energies, double beta, double eps) {
  const double log_f = 2.0 * states::log_partition(beta + 0.5 * eps, energies) -
                       states::log_partition(beta, energies) -
                       states::log_partition(beta + eps, energies);
  return std::exp(log_f);
}

}  // namespace

QfiResult qfi_analytic(const ConditionalThermalState& state) {
  return {weighted_variance(state.probs, state.diag_energies), QfiRoute::analytic, state.beta};
}

QfiResult qfi_fidelity_closed(const ConditionalThermalState& state, double eps, bool richardson) {
  if (eps < 1e-6)
    throw std::invalid_argument("qfi_fidelity_closed: eps below 1e-6 loses the stencil to cancellation");

  auto stencil = [&](double e) {
    const double fp = partition_ratio_fidelity(state.diag_energies, state.beta, e);
    const double fm = partition_ratio_fidelity(state.diag_energies, state.beta, -e);
    return -2.0 * (fp - 2.0 + fm) / (e * e);
  };

  double value = stencil(eps);
  if (richardson) value = (4.0 * stencil(0.5 * eps) - value) / 3.0;
  return {value, QfiRoute::fidelity_closed_form, state.beta};
}

QfiResult qfi_fidelity_matrix(const HermitianOperator& h, const PointerBasis& basis, double beta,
                              double eps) {
  if (eps < 1e-4 || eps > 1e-2)
    throw std::invalid_argument("qfi_fidelity_matrix: eps must lie in [1e-4, 1e-2]");

  const HermitianOperator rho = states::cts(h, basis, beta).density();
  const HermitianOperator rho_plus = states::cts(h, basis, beta + eps).density();
  const HermitianOperator rho_minus = states::cts(h, basis, beta - eps).density();

  const double fp = linalg::fidelity(rho, rho_plus);
  const double fm = linalg::fidelity(rho, rho_minus);
  return {-2.0 * (fp - 2.0 + fm) / (eps * eps), QfiRoute::fidelity_matrix_fd, beta};
}

HermitianOperator optimal_measurement(const ConditionalThermalState& state) {
  const int d = state.dim();
  linalg::ComplexMatrix m(d);
  for (int k = 0; k < d; ++k) {
    const double e = state.diag_energies[k];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        m(i, j) += e * state.basis.column(i, k) * std::conj(state.basis.column(j, k));
  }
  return HermitianOperator(std::move(m));
}

double qfi_gibbs(const HermitianOperator& h, double beta) {
  const std::vector<double> spectrum = eig_hermitian(h).eigenvalues;
  return weighted_variance(states::boltzmann_weights(beta, spectrum), spectrum);
}

double qfi_difference(const HermitianOperator& h, const PointerBasis& basis, double beta) {
  if (h.dim() != basis.dim()) throw std::invalid_argument("qfi_difference: dimension mismatch");
  return qfi_analytic(states::cts(h, basis, beta)).value - qfi_gibbs(h, beta);
}

double qfi_difference_fd(const HermitianOperator& h, const PointerBasis& basis, double beta,
                         double step) {
  const std::vector<double> energies = diag_energies(h, basis);
  const std::vector<double> spectrum = eig_hermitian(h).eigenvalues;
  auto log_ratio = [&](double b) {
    return states::log_partition(b, energies) - states::log_partition(b, spectrum);
  };
  return (log_ratio(beta + step) - 2.0 * log_ratio(beta) + log_ratio(beta - step)) / (step * step);
}

double qubit_delta_qfi(double omega, double theta, double beta) {
  const double c = std::cos(theta);
  const double rotated = sech(beta * omega * c);
  const double gibbs = sech(beta * omega);
  return omega * omega * (c * c * rotated * rotated - gibbs * gibbs);
}

std::pair<HermitianOperator, PointerBasis> qubit_instance(double omega, double theta) {
  linalg::ComplexMatrix h(2);
  h(0, 0) = omega;
  h(1, 1) = -omega;

  // exp(i theta sigma_x / 2) = cos(theta/2) I + i sin(theta/2) sigma_x
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  linalg::ComplexMatrix u(2);
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = linalg::Complex(0.0, s);
  u(1, 0) = linalg::Complex(0.0, s);

  return {HermitianOperator(std::move(h)), PointerBasis(std::move(u))};
}

CriterionResult outperformance_criterion(const HermitianOperator& h, const PointerBasis& basis,
                                         double beta0, double step) {
  const double scale = 1.0 + std::abs(beta0);
  if (step < 1e-4 * scale || step > 1e-2 * scale)
    throw std::invalid_argument("outperformance_criterion: step outside [1e-4, 1e-2]*(1+|beta0|)");

  const std::vector<double> energies = diag_energies(h, basis);
  const std::vector<double> spectrum = eig_hermitian(h).eigenvalues;
  auto rel_entropy = [&](double b) {
    return states::log_partition(b, spectrum) - states::log_partition(b, energies);
  };
  const double curvature = (rel_entropy(beta0 + step) - 2.0 * rel_entropy(beta0) +
                            rel_entropy(beta0 - step)) /
                           (step * step);
  return {curvature < 0.0, curvature};
}

}  // namespace ctherm::metrology
