#ifndef CTHERM_THERMO_HPP
#define CTHERM_THERMO_HPP

#include "ctherm/states.hpp"

namespace ctherm::thermo {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using states::ConditionalThermalState;

/// A unitary work protocol: start in the Gibbs state of h0 at inverse
/// temperature beta, evolve with utau, measure against htau.
struct ProcessSpec {
  HermitianOperator h0;
  HermitianOperator htau;
  ComplexMatrix utau;
  double beta = 0.0;

  ProcessSpec(HermitianOperator h0_in, HermitianOperator htau_in, ComplexMatrix utau_in,
              double beta_in);

  int dim() const { return h0.dim(); }
};

struct ThermoReport {
  double work = 0.0;
  double delta_F_eq = 0.0;
  double work_dissipative = 0.0;
  double S_exact_vs_gibbs = 0.0;
  double S_cts_vs_gibbs = 0.0;
  double S_exact_vs_cts = 0.0;
  double S_cts_vs_exact = 0.0;
  double J = 0.0;
  double ergotropy_W0 = 0.0;
  double delta_E_cts = 0.0;
  double quantum_heat = 0.0;
};

// U rho_eq(0) U†; spectrum is that of the initial Gibbs state.
HermitianOperator evolve_exact(const ProcessSpec& spec);

// Conditional thermal state of htau on the evolved eigenbasis {U|E_k>},
// eigenvalues of h0 taken ascending (ties in eigensolver encounter order).
ConditionalThermalState final_cts(const ProcessSpec& spec);

// Same, with a caller-supplied eigensystem of h0. All reported scalars are
// invariant under relabeling inside degenerate subspaces.
ConditionalThermalState final_cts_with_basis(const ProcessSpec& spec,
                                             const linalg::EigenDecomposition& h0_eig);

double work_exact(const ProcessSpec& spec);

// -(1/beta) ln(Z_eq(tau)/Z_eq(0)); beta must be positive.
double equilibrium_free_energy_difference(const ProcessSpec& spec);

struct ErgotropyResult {
  double value = 0.0;
  ComplexMatrix gamma;  // the extraction unitary sum_k |E_k><E_k| U†
};

ErgotropyResult ergotropy(const HermitianOperator& rho, const HermitianOperator& h0,
                          const ComplexMatrix& utau);

// Full process analysis. Every identity between the report fields is
// asserted before returning; a violation throws ConsistencyError.
ThermoReport analyze(const ProcessSpec& spec);

ThermoReport analyze_with_h0_basis(const ProcessSpec& spec,
                                   const linalg::EigenDecomposition& h0_eig);

}  // namespace ctherm::thermo

#endif
