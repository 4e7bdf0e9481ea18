#ifndef CTHERM_ASYMMETRY_HPP
#define CTHERM_ASYMMETRY_HPP

#include <vector>

#include "ctherm/states.hpp"

namespace ctherm::asymmetry {

using linalg::HermitianOperator;
using states::PointerBasis;

// Tr rho H^2 - (Tr rho H)^2
double variance(const HermitianOperator& rho, const HermitianOperator& h);

// Wigner-Yanase-Dyson skew information
// I_alpha(rho, H) = Tr rho H^2 - Tr rho^alpha H rho^(1-alpha) H, 0 < alpha < 1.
// Zero eigenvalues of rho contribute 0^alpha := 0.
double skew_information(const HermitianOperator& rho, const HermitianOperator& h, double alpha);

// CTS_MAX_DIM from the environment, or 6.
int default_explicit_dim_cap();

struct SkewReport {
  double alpha = 0.0;
  double skew_local = 0.0;     // I_alpha of the conditional state itself
  double skew_extended = 0.0;  // I_alpha of the separable extension w.r.t. H x 1
  double variance = 0.0;
  double cov_local = 0.0;  // variance - skew_local
  double qfi = 0.0;
  bool explicit_route = false;  // extended value cross-checked on d^2-dim matrices
};

// Evaluates the bound chain qfi = variance - skew_extended <= cov_local.
// The extended skew is computed from the reduced formula and, for
// d <= max_explicit_dim, from explicitly assembled d^2-dimensional
// matrices; disagreement beyond 1e-9 or a broken bound throws
// ConsistencyError.
SkewReport skew_bound_report(const HermitianOperator& h, const PointerBasis& basis, double beta,
                             double alpha, int max_explicit_dim = default_explicit_dim_cap());

// Same report over an alpha grid, sharing the eigendecompositions.
std::vector<SkewReport> skew_bound_reports(const HermitianOperator& h, const PointerBasis& basis,
                                           double beta, const std::vector<double>& alphas,
                                           int max_explicit_dim = default_explicit_dim_cap());

}  // namespace ctherm::asymmetry

#endif
