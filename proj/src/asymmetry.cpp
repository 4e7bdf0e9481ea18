#include "ctherm/asymmetry.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "ctherm/errors.hpp"
#include "ctherm/metrology.hpp"

namespace ctherm::asymmetry {

namespace {

using linalg::Complex;
using linalg::ComplexMatrix;

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = a.dim();
  Complex t = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t += a(i, k) * b(k, i);
  return t.real();
}

// |(V† H V)_{jk}|^2 for the eigensystem of rho; the only matrix data the
// skew traces need.
struct SkewWorkspace {
  std::vector<double> eigenvalues;           // clamped to >= 0
  std::vector<std::vector<double>> overlap;  // |H in rho eigenbasis|^2
};

SkewWorkspace make_workspace(const HermitianOperator& rho, const HermitianOperator& h) {
  const int n = rho.dim();
  linalg::EigenDecomposition ed = eig_hermitian(rho);

  double radius = 0.0;
  for (double lam : ed.eigenvalues) radius = std::max(radius, std::abs(lam));
  const double tol = 1e-10 * (1.0 + radius);

  SkewWorkspace ws;
  ws.eigenvalues.resize(n);
  for (int k = 0; k < n; ++k) {
    const double lam = ed.eigenvalues[k];
    if (lam < -tol) throw std::domain_error("skew_information: rho has a negative eigenvalue");
    // weights within the PSD tolerance of zero are exact rank deficiency;
    // leaving a roundoff-sized positive value would blow up under pow(., alpha)
    ws.eigenvalues[k] = lam <= tol ? 0.0 : lam;
  }

  ComplexMatrix hv = h.matrix() * ed.eigenvectors;
  ws.overlap.assign(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Complex entry = 0.0;
      for (int r = 0; r < n; ++r) entry += std::conj(ed.eigenvectors(r, j)) * hv(r, k);
      ws.overlap[j][k] = std::norm(entry);
    }
  return ws;
}

double skew_from_workspace(const SkewWorkspace& ws, double alpha) {
  const size_t n = ws.eigenvalues.size();
  double tr_rho_h2 = 0.0;
  double cross = 0.0;
  for (size_t j = 0; j < n; ++j) {
    const double lj = ws.eigenvalues[j];
    const double lj_a = lj > 0.0 ? std::pow(lj, alpha) : 0.0;
    for (size_t k = 0; k < n; ++k) {
      const double lk = ws.eigenvalues[k];
      tr_rho_h2 += lj * ws.overlap[j][k];
      cross += lj_a * (lk > 0.0 ? std::pow(lk, 1.0 - alpha) : 0.0) * ws.overlap[j][k];
    }
  }
  return tr_rho_h2 - cross;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("skew information requires 0 < alpha < 1");
}

}  // namespace

int default_explicit_dim_cap() {
  if (const char* env = std::getenv("CTS_MAX_DIM")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 6;
}

double variance(const HermitianOperator& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) throw std::invalid_argument("variance: dimension mismatch");
  const ComplexMatrix& r = rho.matrix();
  const ComplexMatrix h2 = h.matrix() * h.matrix();
  const double first = real_trace_product(r, h2);
  const double mean = real_trace_product(r, h.matrix());
  return first - mean * mean;
}

double skew_information(const HermitianOperator& rho, const HermitianOperator& h, double alpha) {
  check_alpha(alpha);
  if (rho.dim() != h.dim()) throw std::invalid_argument("skew_information: dimension mismatch");
  linalg::require_density(rho, "skew_information: rho");
  return skew_from_workspace(make_workspace(rho, h), alpha);
}

std::vector<SkewReport> skew_bound_reports(const HermitianOperator& h, const PointerBasis& basis,
                                           double beta, const std::vector<double>& alphas,
                                           int max_explicit_dim) {
  for (double a : alphas) check_alpha(a);

  const states::ConditionalThermalState state = states::cts(h, basis, beta);
  const HermitianOperator rho = state.density();
  const double qfi = metrology::qfi_analytic(state).value;
  const double var = variance(rho, h);
  const SkewWorkspace local_ws = make_workspace(rho, h);

  // reduced extended skew: Tr rho H^2 - sum_k p_k e_k^2, independent of alpha
  const double tr_rho_h2 = real_trace_product(rho.matrix(), h.matrix() * h.matrix());
  double second_moment = 0.0;
  for (size_t k = 0; k < state.probs.size(); ++k)
    second_moment += state.probs[k] * state.diag_energies[k] * state.diag_energies[k];
  const double extended_reduced = tr_rho_h2 - second_moment;

  const bool use_explicit = h.dim() <= max_explicit_dim;
  SkewWorkspace extended_ws;
  if (use_explicit) {
    const states::SeparableCTS sep =
        states::separable_cts(h, basis, states::PointerBasis::computational(h.dim()), beta);
    const HermitianOperator h12(
        linalg::kron(h.matrix(), ComplexMatrix::identity(h.dim())));
    extended_ws = make_workspace(sep.density(), h12);
  }

  std::vector<SkewReport> reports;
  reports.reserve(alphas.size());
  for (double alpha : alphas) {
    SkewReport rep;
    rep.alpha = alpha;
    rep.variance = var;
    rep.qfi = qfi;
    rep.skew_local = skew_from_workspace(local_ws, alpha);
    rep.cov_local = var - rep.skew_local;
    rep.explicit_route = use_explicit;
    rep.skew_extended = extended_reduced;

    if (use_explicit) {
      const double explicit_value = skew_from_workspace(extended_ws, alpha);
      if (std::abs(explicit_value - extended_reduced) > 1e-9)
        throw ConsistencyError("skew_bound_report: explicit and reduced extended skew disagree (" +
                               std::to_string(explicit_value - extended_reduced) + ")");
      rep.skew_extended = explicit_value;
    }

    if (std::abs(rep.qfi - (rep.variance - rep.skew_extended)) > 1e-9)
      throw ConsistencyError("skew_bound_report: qfi != variance - extended skew");
    if (rep.qfi > rep.cov_local + 1e-9)
      throw ConsistencyError("skew_bound_report: covariance bound violated");

    reports.push_back(rep);
  }
  return reports;
}

SkewReport skew_bound_report(const HermitianOperator& h, const PointerBasis& basis, double beta,
                             double alpha, int max_explicit_dim) {
  return skew_bound_reports(h, basis, beta, {alpha}, max_explicit_dim).front();
}

}  // namespace ctherm::asymmetry
