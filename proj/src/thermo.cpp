#include "ctherm/thermo.hpp"

#include <cmath>
#include <string>

#include "ctherm/errors.hpp"

namespace ctherm::thermo {

namespace {

using linalg::Complex;

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = a.dim();
  Complex t = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t += a(i, k) * b(k, i);
  return t.real();
}

ErgotropyResult ergotropy_with_basis(const HermitianOperator& rho,
                                     const linalg::EigenDecomposition& h0_eig,
                                     const HermitianOperator& h0, const ComplexMatrix& utau) {
  // gamma = sum_k |E_k><E_k| U† maps each evolved eigenvector back onto
  // its original; assembled from the supplied labeling.
  const int d = rho.dim();
  const ComplexMatrix evolved = utau * h0_eig.eigenvectors;  // columns U|E_k>
  ComplexMatrix gamma(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        gamma(i, j) += h0_eig.eigenvectors(i, k) * std::conj(evolved(j, k));

  if (gamma.unitarity_deviation() > 1e-10)
    throw ConsistencyError("ergotropy: extraction transformation is not unitary");

  const ComplexMatrix rotated = gamma * rho.matrix() * gamma.adjoint();
  const double before = real_trace_product(rho.matrix(), h0.matrix());
  const double after = real_trace_product(rotated, h0.matrix());
  return {before - after, gamma};
}

void check_residual(double residual, double tol, const std::string& what) {
  if (std::abs(residual) > tol)
    throw ConsistencyError("analyze: " + what + " residual " + std::to_string(residual) +
                           " exceeds " + std::to_string(tol));
}

}  // namespace

ProcessSpec::ProcessSpec(HermitianOperator h0_in, HermitianOperator htau_in, ComplexMatrix utau_in,
                         double beta_in)
    : h0(std::move(h0_in)), htau(std::move(htau_in)), utau(std::move(utau_in)), beta(beta_in) {
  if (h0.dim() != htau.dim() || h0.dim() != utau.dim())
    throw std::invalid_argument("ProcessSpec: dimensions of h0, htau, utau differ");
  if (!std::isfinite(beta)) throw std::invalid_argument("ProcessSpec: beta must be finite");
  if (utau.unitarity_deviation() > 1e-10)
    throw std::invalid_argument("ProcessSpec: utau is not unitary within tolerance");
}

HermitianOperator evolve_exact(const ProcessSpec& spec) {
  const ComplexMatrix rho0 = states::gibbs(spec.h0, spec.beta).matrix();
  return HermitianOperator(spec.utau * rho0 * spec.utau.adjoint());
}

ConditionalThermalState final_cts_with_basis(const ProcessSpec& spec,
                                             const linalg::EigenDecomposition& h0_eig) {
  states::PointerBasis evolved(spec.utau * h0_eig.eigenvectors);
  return states::cts(spec.htau, evolved, spec.beta);
}

ConditionalThermalState final_cts(const ProcessSpec& spec) {
  return final_cts_with_basis(spec, eig_hermitian(spec.h0));
}

double work_exact(const ProcessSpec& spec) {
  const ComplexMatrix rho0 = states::gibbs(spec.h0, spec.beta).matrix();
  const ComplexMatrix rho_tau = spec.utau * rho0 * spec.utau.adjoint();
  return real_trace_product(rho_tau, spec.htau.matrix()) -
         real_trace_product(rho0, spec.h0.matrix());
}

double equilibrium_free_energy_difference(const ProcessSpec& spec) {
  if (spec.beta <= 0.0)
    throw std::domain_error("equilibrium_free_energy_difference: beta must be positive");
  const double log_z0 = states::log_partition_gibbs(spec.h0, spec.beta);
  const double log_ztau = states::log_partition_gibbs(spec.htau, spec.beta);
  return -(log_ztau - log_z0) / spec.beta;
}

ErgotropyResult ergotropy(const HermitianOperator& rho, const HermitianOperator& h0,
                          const ComplexMatrix& utau) {
  if (rho.dim() != h0.dim() || rho.dim() != utau.dim())
    throw std::invalid_argument("ergotropy: dimension mismatch");
  return ergotropy_with_basis(rho, eig_hermitian(h0), h0, utau);
}

ThermoReport analyze_with_h0_basis(const ProcessSpec& spec,
                                   const linalg::EigenDecomposition& h0_eig) {
  if (spec.beta <= 0.0) throw std::domain_error("analyze: beta must be positive");

  const HermitianOperator rho_exact = evolve_exact(spec);
  const ConditionalThermalState cts_tau = final_cts_with_basis(spec, h0_eig);
  const HermitianOperator rho_cts = cts_tau.density();
  const HermitianOperator rho_gibbs_tau = states::gibbs(spec.htau, spec.beta);

  ThermoReport rep;
  rep.work = work_exact(spec);
  rep.delta_F_eq = equilibrium_free_energy_difference(spec);
  rep.work_dissipative = rep.work - rep.delta_F_eq;

  rep.S_exact_vs_gibbs = states::relative_entropy(rho_exact, rho_gibbs_tau);
  rep.S_cts_vs_gibbs = states::relative_entropy(rho_cts, rho_gibbs_tau);
  rep.S_exact_vs_cts = states::relative_entropy(rho_exact, rho_cts);
  rep.S_cts_vs_exact = states::relative_entropy(rho_cts, rho_exact);
  rep.J = rep.S_exact_vs_cts + rep.S_cts_vs_exact;

  rep.ergotropy_W0 = ergotropy_with_basis(rho_cts, h0_eig, spec.h0, spec.utau).value;
  rep.delta_E_cts = real_trace_product(rho_cts.matrix(), spec.htau.matrix() - spec.h0.matrix());
  rep.quantum_heat = rep.J / spec.beta;

  check_residual(rep.work_dissipative - (rep.work - rep.delta_F_eq), 1e-10, "dissipative work");
  check_residual(spec.beta * rep.work_dissipative - rep.S_exact_vs_gibbs, 1e-9,
                 "dissipative work vs relative entropy");
  if (rep.S_exact_vs_gibbs < rep.S_cts_vs_gibbs - 1e-9)
    throw ConsistencyError("analyze: relative entropy lower bound violated");
  check_residual(rep.S_exact_vs_cts + rep.S_cts_vs_gibbs - rep.S_exact_vs_gibbs, 1e-9,
                 "triangle equality");
  check_residual(rep.J - (rep.S_exact_vs_cts + rep.S_cts_vs_exact), 1e-12, "J-divergence");
  check_residual(rep.J - spec.beta * (rep.work - rep.ergotropy_W0 - rep.delta_E_cts), 1e-9,
                 "J-divergence vs work accounting");
  return rep;
}

ThermoReport analyze(const ProcessSpec& spec) {
  return analyze_with_h0_basis(spec, eig_hermitian(spec.h0));
}

}  // namespace ctherm::thermo
