#ifndef CTHERM_METROLOGY_HPP
#define CTHERM_METROLOGY_HPP

#include <utility>

#include "ctherm/states.hpp"

namespace ctherm::metrology {

using linalg::HermitianOperator;
using states::ConditionalThermalState;
using states::PointerBasis;

enum class QfiRoute { analytic, fidelity_closed_form, fidelity_matrix_fd };

struct QfiResult {
  double value = 0.0;
  QfiRoute route = QfiRoute::analytic;
  double beta = 0.0;
};

// Variance of the diagonal energies under the CTS weights; exact, no
// step size involved.
QfiResult qfi_analytic(const ConditionalThermalState& state);

// Central second difference of the partition-ratio fidelity
// F(beta, beta+eps) = Z_{beta+eps/2}^2 / (Z_beta Z_{beta+eps}).
// With richardson set, combines eps and eps/2 stencils.
QfiResult qfi_fidelity_closed(const ConditionalThermalState& state, double eps,
                              bool richardson = false);

// Same stencil on full density matrices through the Uhlmann fidelity;
// exercises the whole matrix pipeline. eps restricted to [1e-4, 1e-2].
QfiResult qfi_fidelity_matrix(const HermitianOperator& h, const PointerBasis& basis, double beta,
                              double eps);

// M = sum_k e_k |psi_k><psi_k|; commutes with the CTS density and
// saturates the Cramer-Rao bound.
HermitianOperator optimal_measurement(const ConditionalThermalState& state);

// Variance of the spectrum under Gibbs weights.
double qfi_gibbs(const HermitianOperator& h, double beta);

double qfi_difference(const HermitianOperator& h, const PointerBasis& basis, double beta);

// Finite-difference curvature of ln(Z_beta / Z_beta^eq); cross-check path
// for qfi_difference.
double qfi_difference_fd(const HermitianOperator& h, const PointerBasis& basis, double beta,
                         double step);

// Closed form for H = omega sigma_z with the pointer basis rotated by
// exp(i theta sigma_x / 2); periodic in theta with period pi up to the
// sign of cos(theta), which enters only through |cos|.
double qubit_delta_qfi(double omega, double theta, double beta);

// The 2x2 instance behind qubit_delta_qfi.
std::pair<HermitianOperator, PointerBasis> qubit_instance(double omega, double theta);

struct CriterionResult {
  bool outperforms = false;
  double curvature = 0.0;
};

// Sign of the curvature of the relative entropy -ln(Z_beta/Z_beta^eq) at
// beta0; negative curvature means the conditional state carries more
// information about beta than the Gibbs state.
CriterionResult outperformance_criterion(const HermitianOperator& h, const PointerBasis& basis,
                                         double beta0, double step);

}  // namespace ctherm::metrology

#endif
