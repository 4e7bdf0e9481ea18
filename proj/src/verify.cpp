#include "ctherm/verify.hpp"

#include <cmath>
#include <sstream>

#include "ctherm/errors.hpp"
#include "ctherm/estimation.hpp"
#include "ctherm/metrology.hpp"
#include "ctherm/random.hpp"
#include "ctherm/thermo.hpp"

namespace ctherm::verify {

namespace {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using states::PointerBasis;

// fixed per-property stream tags; keep stable so printed failing instances
// reproduce across releases
enum PropertyId : int {
  kEig = 0,
  kSqrt,
  kFidelity,
  kTraceNorm,
  kMaxEntropy,
  kPartition,
  kCtsGibbs,
  kSepTrace,
  kQfiRoutes,
  kCrb,
  kDeltaZero,
  kQubitGrid,
  kCurvature,
  kSkewSuite,
  kSkewGibbs,
  kSkewSaturation,
  kThermo,
  kAdiabatic,
  kDiagnosis,
  kEstDeterminism,
  kEstMoment,
};

class Recorder {
 public:
  Recorder(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void record(double residual, const std::string& case_desc) {
    ++result_.checks;
    if (!(residual <= result_.tolerance)) ++result_.failures;  // NaN counts as failure
    if (!(residual <= result_.max_residual) || result_.checks == 1) {
      result_.max_residual = residual;
      result_.worst_case = case_desc;
    }
  }

  void record_failure(const std::string& case_desc, const std::string& why) {
    ++result_.checks;
    ++result_.failures;
    result_.max_residual = std::numeric_limits<double>::infinity();
    result_.worst_case = case_desc + " (" + why + ")";
  }

  PropertyResult take() { return std::move(result_); }

 private:
  PropertyResult result_;
};

uint64_t stream_for(const VerifyConfig& cfg, int property_id, int trial) {
  return rng::derive_stream(cfg.seed, (static_cast<uint64_t>(property_id) << 32) |
                                          static_cast<uint64_t>(trial));
}

std::string describe(int dim, double beta, int trial, uint64_t stream) {
  std::ostringstream os;
  os << "dim=" << dim << " beta=" << beta << " trial=" << trial << " stream=0x" << std::hex
     << stream;
  return os.str();
}

struct Instance {
  HermitianOperator h;
  PointerBasis basis;
};

Instance random_instance(int dim, uint64_t stream) {
  rng::Prng prng(stream);
  HermitianOperator h = rng::random_gue(dim, prng);
  PointerBasis basis(rng::random_haar_unitary(dim, prng));
  return {std::move(h), std::move(basis)};
}

thermo::ProcessSpec random_process(int dim, double beta, uint64_t stream) {
  rng::Prng prng(stream);
  HermitianOperator h0 = rng::random_gue(dim, prng);
  HermitianOperator htau = rng::random_gue(dim, prng);
  ComplexMatrix utau = rng::random_haar_unitary(dim, prng);
  return thermo::ProcessSpec(std::move(h0), std::move(htau), std::move(utau), beta);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

// directions in probability space preserving normalization and mean energy
std::vector<double> constrained_direction(const std::vector<double>& energies, rng::Prng& prng) {
  const size_t d = energies.size();
  std::vector<double> u1(d, 1.0 / std::sqrt(static_cast<double>(d)));

  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= static_cast<double>(d);
  std::vector<double> u2(d);
  double norm2 = 0.0;
  for (size_t i = 0; i < d; ++i) {
    u2[i] = energies[i] - mean;
    norm2 += u2[i] * u2[i];
  }
  norm2 = std::sqrt(norm2);
  const bool has_u2 = norm2 > 1e-12;
  if (has_u2)
    for (double& v : u2) v /= norm2;

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> dir(d);
    for (double& v : dir) v = prng.normal();
    double p1 = 0.0, p2 = 0.0;
    for (size_t i = 0; i < d; ++i) {
      p1 += dir[i] * u1[i];
      if (has_u2) p2 += dir[i] * u2[i];
    }
    double norm = 0.0;
    for (size_t i = 0; i < d; ++i) {
      dir[i] -= p1 * u1[i];
      if (has_u2) dir[i] -= p2 * u2[i];
      norm += dir[i] * dir[i];
    }
    norm = std::sqrt(norm);
    if (norm > 1e-8) {
      for (double& v : dir) v /= norm;
      return dir;
    }
  }
  return {};  // no admissible direction (dim 2 with distinct energies)
}

}  // namespace

// linalg -----------------------------------------------------------------

PropertyResult check_eig_reconstruction(const VerifyConfig& cfg) {
  Recorder rec("linalg.eig_reconstruction", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kEig, t);
    rng::Prng prng(stream);
    HermitianOperator a = rng::random_gue(dim, prng);

    linalg::EigenDecomposition ed = eig_hermitian(a);
    ComplexMatrix recon(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        linalg::Complex sum = 0.0;
        for (int k = 0; k < dim; ++k)
          sum += ed.eigenvectors(i, k) * ed.eigenvalues[k] * std::conj(ed.eigenvectors(j, k));
        recon(i, j) = sum;
      }
    const double recon_res =
        (a.matrix() - recon).frobenius_norm() / (1.0 + a.matrix().frobenius_norm());
    const double unit_res = ed.eigenvectors.unitarity_deviation();
    double sorted_res = 0.0;
    for (size_t k = 1; k < ed.eigenvalues.size(); ++k)
      sorted_res = std::max(sorted_res, ed.eigenvalues[k - 1] - ed.eigenvalues[k]);
    rec.record(std::max({recon_res, unit_res, sorted_res}), describe(dim, 0.0, t, stream));
  }
  return rec.take();
}

PropertyResult check_sqrt_composition(const VerifyConfig& cfg) {
  Recorder rec("linalg.sqrt_composition", 1e-9);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kSqrt, t);
    rng::Prng prng(stream);
    HermitianOperator rho = rng::random_density(dim, prng);
    const ComplexMatrix root = matrix_function(rho, linalg::MatrixFunction::sqrt).matrix();
    rec.record(max_abs_diff(root * root, rho.matrix()), describe(dim, 0.0, t, stream));
  }
  return rec.take();
}

PropertyResult check_fidelity_properties(const VerifyConfig& cfg) {
  Recorder rec("linalg.fidelity_properties", 1e-9);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kFidelity, t);
    rng::Prng prng(stream);
    HermitianOperator rho = rng::random_density(dim, prng);
    HermitianOperator sigma = rng::random_density(dim, prng);

    const double fab = linalg::fidelity(rho, sigma);
    const double fba = linalg::fidelity(sigma, rho);
    const double fself = linalg::fidelity(rho, rho);
    double residual = std::abs(fab - fba);
    residual = std::max(residual, std::max(0.0, fab - 1.0));
    residual = std::max(residual, std::max(0.0, -fab));
    residual = std::max(residual, std::abs(fself - 1.0));
    rec.record(residual, describe(dim, 0.0, t, stream));
  }
  return rec.take();
}

PropertyResult check_trace_norm_subadditivity(const VerifyConfig& cfg) {
  Recorder rec("linalg.trace_norm_subadditivity", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kTraceNorm, t);
    rng::Prng prng(stream);
    ComplexMatrix a(dim), b(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        a(i, j) = linalg::Complex(prng.normal(), prng.normal());
        b(i, j) = linalg::Complex(prng.normal(), prng.normal());
      }
    const double lhs = linalg::trace_norm(a + b);
    const double rhs = linalg::trace_norm(a) + linalg::trace_norm(b);
    rec.record(std::max(0.0, lhs - rhs), describe(dim, 0.0, t, stream));
  }
  return rec.take();
}

// states -----------------------------------------------------------------

PropertyResult check_max_entropy(const VerifyConfig& cfg, int perturbations_per_instance) {
  Recorder rec("states.max_entropy", 1e-12);
  for (int t = 0; t < cfg.trials; ++t) {
    // two linear constraints leave no freedom at dim 2
    int dim = cfg.dims[t % cfg.dims.size()];
    if (dim < 3) dim = 3;
    const uint64_t stream = stream_for(cfg, kMaxEntropy, t);
    Instance inst = random_instance(dim, stream);
    rng::Prng prng(stream + 1);
    const double beta = cfg.betas[t % cfg.betas.size()];

    const states::ConditionalThermalState state = states::cts(inst.h, inst.basis, beta);
    const double base_entropy = states::shannon_entropy(state.probs);

    double worst = 0.0;
    for (int p = 0; p < perturbations_per_instance; ++p) {
      const std::vector<double> dir = constrained_direction(state.diag_energies, prng);
      if (dir.empty()) continue;
      double t_max = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < dir.size(); ++i)
        if (dir[i] < 0.0) t_max = std::min(t_max, -state.probs[i] / dir[i]);
      const double step = 0.9 * t_max * prng.uniform();
      std::vector<double> perturbed = state.probs;
      for (size_t i = 0; i < dir.size(); ++i) perturbed[i] += step * dir[i];
      worst = std::max(worst, states::shannon_entropy(perturbed) - base_entropy);
    }
    rec.record(worst, describe(dim, beta, t, stream));
  }
  return rec.take();
}

PropertyResult check_partition_identity(const VerifyConfig& cfg) {
  Recorder rec("states.relative_entropy_partition_identity", 1e-9);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kPartition, t);
    Instance inst = random_instance(dim, stream);
    for (double beta : cfg.betas) {
      const states::ConditionalThermalState state = states::cts(inst.h, inst.basis, beta);
      const double log_z_eq = states::log_partition_gibbs(inst.h, beta);
      const double from_partitions = log_z_eq - state.log_z;
      const double from_matrices =
          states::relative_entropy(state.density(), states::gibbs(inst.h, beta));
      double residual = std::abs(from_matrices - from_partitions);
      residual = std::max(residual, std::max(0.0, -from_partitions));  // Z <= Z_eq
      rec.record(residual, describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

PropertyResult check_cts_gibbs_limit(const VerifyConfig& cfg) {
  Recorder rec("states.cts_eigenbasis_is_gibbs", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kCtsGibbs, t);
    rng::Prng prng(stream);
    HermitianOperator h = rng::random_gue(dim, prng);
    PointerBasis eigenbasis(eig_hermitian(h).eigenvectors);
    for (double beta : cfg.betas) {
      const HermitianOperator via_cts = states::cts(h, eigenbasis, beta).density();
      const HermitianOperator via_gibbs = states::gibbs(h, beta);
      rec.record(max_abs_diff(via_cts.matrix(), via_gibbs.matrix()),
                 describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

PropertyResult check_separable_partial_trace(const VerifyConfig& cfg) {
  Recorder rec("states.separable_partial_trace", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kSepTrace, t);
    Instance inst = random_instance(dim, stream);
    rng::Prng prng(stream + 1);
    PointerBasis ancilla(rng::random_haar_unitary(dim, prng));
    const double beta = cfg.betas[t % cfg.betas.size()];

    const states::SeparableCTS sep = states::separable_cts(inst.h, inst.basis, ancilla, beta);
    const ComplexMatrix reduced = linalg::partial_trace_second(sep.density().matrix(), dim, dim);
    rec.record(max_abs_diff(reduced, sep.local.density().matrix()), describe(dim, beta, t, stream));
  }
  return rec.take();
}

// metrology ---------------------------------------------------------------

std::pair<PropertyResult, PropertyResult> check_qfi_route_agreement(const VerifyConfig& cfg) {
  Recorder closed("metrology.route_agreement_closed_form", 1e-5);
  Recorder matrix("metrology.route_agreement_matrix", 1e-4);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kQfiRoutes, t);
    Instance inst = random_instance(dim, stream);
    for (double beta : cfg.betas) {
      const states::ConditionalThermalState state = states::cts(inst.h, inst.basis, beta);
      const double analytic = metrology::qfi_analytic(state).value;
      const double via_closed = metrology::qfi_fidelity_closed(state, 1e-3).value;
      const double via_matrix =
          metrology::qfi_fidelity_matrix(inst.h, inst.basis, beta, 1e-3).value;
      closed.record(std::abs(analytic - via_closed), describe(dim, beta, t, stream));
      matrix.record(std::abs(analytic - via_matrix), describe(dim, beta, t, stream));
    }
  }
  return {closed.take(), matrix.take()};
}

PropertyResult check_crb_identity(const VerifyConfig& cfg) {
  Recorder rec("metrology.crb_identity", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kCrb, t);
    Instance inst = random_instance(dim, stream);
    for (double beta : cfg.betas) {
      const states::ConditionalThermalState state = states::cts(inst.h, inst.basis, beta);
      const HermitianOperator m = metrology::optimal_measurement(state);
      const HermitianOperator rho = state.density();

      const double var = asymmetry::variance(rho, m);
      const double qfi = metrology::qfi_analytic(state).value;
      double residual = std::abs(var - qfi);

      const ComplexMatrix commutator = m.matrix() * rho.matrix() - rho.matrix() * m.matrix();
      residual = std::max(residual, commutator.max_abs());

      double mean = 0.0;  // Tr[rho M] must equal the thermal mean energy
      for (size_t k = 0; k < state.probs.size(); ++k)
        mean += state.probs[k] * state.diag_energies[k];
      linalg::Complex tr = 0.0;
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) tr += rho(i, k) * m(k, i);
      residual = std::max(residual, std::abs(tr.real() - mean));

      rec.record(residual, describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

PropertyResult check_gibbs_delta_zero(const VerifyConfig& cfg) {
  Recorder rec("metrology.eigenbasis_delta_zero", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kDeltaZero, t);
    rng::Prng prng(stream);
    HermitianOperator h = rng::random_gue(dim, prng);
    PointerBasis eigenbasis(eig_hermitian(h).eigenvectors);
    for (double beta : cfg.betas)
      rec.record(std::abs(metrology::qfi_difference(h, eigenbasis, beta)),
                 describe(dim, beta, t, stream));
  }
  return rec.take();
}

PropertyResult check_qubit_closed_form_grid(const VerifyConfig&) {
  Recorder rec("metrology.qubit_closed_form_vs_matrix", 1e-10);
  const double thetas[] = {0.0, 0.3, M_PI / 4, 1.2, M_PI / 2, 2.5};
  const double betas[] = {0.0, 0.2, 1.0, 3.0, 5.0};
  for (double theta : thetas) {
    auto [h, basis] = metrology::qubit_instance(1.0, theta);
    for (double beta : betas) {
      const double closed = metrology::qubit_delta_qfi(1.0, theta, beta);
      const double via_matrix = metrology::qfi_difference(h, basis, beta);
      std::ostringstream os;
      os << "theta=" << theta << " beta=" << beta;
      rec.record(std::abs(closed - via_matrix), os.str());
    }
  }
  return rec.take();
}

PropertyResult check_delta_curvature(const VerifyConfig& cfg) {
  Recorder rec("metrology.delta_equals_log_ratio_curvature", 1e-5);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kCurvature, t);
    Instance inst = random_instance(dim, stream);
    for (double beta : cfg.betas) {
      const double analytic = metrology::qfi_difference(inst.h, inst.basis, beta);
      const double fd = metrology::qfi_difference_fd(inst.h, inst.basis, beta, 1e-3);
      rec.record(std::abs(analytic - fd), describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

// asymmetry ----------------------------------------------------------------

std::vector<PropertyResult> check_skew_suite(const VerifyConfig& cfg) {
  Recorder monotone("asymmetry.extension_monotone", 1e-9);
  Recorder identity("asymmetry.qfi_equals_variance_minus_skew", 1e-9);
  Recorder alpha_free("asymmetry.extended_skew_alpha_free", 1e-9);
  Recorder bound("asymmetry.covariance_bound", 1e-9);

  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kSkewSuite, t);
    Instance inst = random_instance(dim, stream);
    for (double beta : cfg.betas) {
      const std::string desc = describe(dim, beta, t, stream);
      std::vector<asymmetry::SkewReport> reports;
      try {
        reports = asymmetry::skew_bound_reports(inst.h, inst.basis, beta, cfg.alphas,
                                                cfg.max_explicit_dim);
      } catch (const ConsistencyError& e) {
        monotone.record_failure(desc, e.what());
        identity.record_failure(desc, e.what());
        alpha_free.record_failure(desc, e.what());
        bound.record_failure(desc, e.what());
        continue;
      }

      double worst_monotone = 0.0, worst_identity = 0.0, worst_bound = 0.0;
      double ext_min = reports.front().skew_extended, ext_max = ext_min;
      for (const asymmetry::SkewReport& rep : reports) {
        worst_monotone = std::max(worst_monotone, rep.skew_local - rep.skew_extended);
        worst_identity =
            std::max(worst_identity, std::abs(rep.qfi - (rep.variance - rep.skew_extended)));
        worst_bound = std::max(worst_bound, rep.qfi - rep.cov_local);
        ext_min = std::min(ext_min, rep.skew_extended);
        ext_max = std::max(ext_max, rep.skew_extended);
      }
      monotone.record(worst_monotone, desc);
      identity.record(worst_identity, desc);
      alpha_free.record(ext_max - ext_min, desc);
      bound.record(std::max(0.0, worst_bound), desc);
    }
  }
  std::vector<PropertyResult> out;
  out.push_back(monotone.take());
  out.push_back(identity.take());
  out.push_back(alpha_free.take());
  out.push_back(bound.take());
  return out;
}

PropertyResult check_gibbs_skew_zero(const VerifyConfig& cfg) {
  Recorder rec("asymmetry.gibbs_skew_zero", 1e-9);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kSkewGibbs, t);
    rng::Prng prng(stream);
    HermitianOperator h = rng::random_gue(dim, prng);
    for (double beta : cfg.betas) {
      const HermitianOperator rho = states::gibbs(h, beta);
      double worst = 0.0;
      for (double alpha : cfg.alphas)
        worst = std::max(worst, std::abs(asymmetry::skew_information(rho, h, alpha)));
      rec.record(worst, describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

PropertyResult check_skew_saturation(const VerifyConfig& cfg) {
  Recorder rec("asymmetry.eigenbasis_saturation", 1e-10);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kSkewSaturation, t);
    rng::Prng prng(stream);
    HermitianOperator h = rng::random_gue(dim, prng);
    PointerBasis eigenbasis(eig_hermitian(h).eigenvectors);
    for (double beta : cfg.betas) {
      double worst = 0.0;
      for (const asymmetry::SkewReport& rep :
           asymmetry::skew_bound_reports(h, eigenbasis, beta, cfg.alphas, cfg.max_explicit_dim))
        worst = std::max(worst, std::abs(rep.cov_local - rep.qfi));
      rec.record(worst, describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

// thermo ---------------------------------------------------------------

std::vector<PropertyResult> check_thermo_identities(const VerifyConfig& cfg) {
  Recorder eq11("thermo.dissipative_work_relative_entropy", 1e-9);
  Recorder eq14("thermo.dissipative_work_lower_bound", 1e-9);
  Recorder eq17("thermo.triangle_equality", 1e-9);
  Recorder eq19("thermo.j_divergence_work_accounting", 1e-9);
  Recorder work_logz("thermo.work_log_partition_identity", 1e-9);

  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    for (double beta : cfg.betas) {
      const uint64_t stream = stream_for(cfg, kThermo, t);
      const std::string desc = describe(dim, beta, t, stream);
      const thermo::ProcessSpec spec = random_process(dim, beta, stream);
      thermo::ThermoReport rep;
      try {
        rep = thermo::analyze(spec);
      } catch (const ConsistencyError& e) {
        eq11.record_failure(desc, e.what());
        eq14.record_failure(desc, e.what());
        eq17.record_failure(desc, e.what());
        eq19.record_failure(desc, e.what());
        work_logz.record_failure(desc, e.what());
        continue;
      }

      eq11.record(std::abs(beta * rep.work_dissipative - rep.S_exact_vs_gibbs), desc);
      eq14.record(std::max(0.0, rep.S_cts_vs_gibbs - rep.S_exact_vs_gibbs), desc);
      eq17.record(std::abs(rep.S_exact_vs_cts + rep.S_cts_vs_gibbs - rep.S_exact_vs_gibbs), desc);
      eq19.record(std::abs(rep.J - beta * (rep.work - rep.ergotropy_W0 - rep.delta_E_cts)), desc);

      // S(rho(tau)||rho_beta(tau)) = beta <W> + ln(Z_beta(tau) / Z_eq(0))
      const double log_z_tau = thermo::final_cts(spec).log_z;
      const double log_z_eq0 = states::log_partition_gibbs(spec.h0, beta);
      work_logz.record(std::abs(rep.S_exact_vs_cts - (beta * rep.work + log_z_tau - log_z_eq0)),
                       desc);
    }
  }
  std::vector<PropertyResult> out;
  out.push_back(eq11.take());
  out.push_back(eq14.take());
  out.push_back(eq17.take());
  out.push_back(eq19.take());
  out.push_back(work_logz.take());
  return out;
}

PropertyResult check_thermo_adiabatic(const VerifyConfig& cfg) {
  Recorder rec("thermo.adiabatic_family", 1e-9);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    for (double beta : cfg.betas) {
      const uint64_t stream = stream_for(cfg, kAdiabatic, t);
      rng::Prng prng(stream);
      HermitianOperator h0 = rng::random_gue(dim, prng);
      ComplexMatrix v = rng::random_haar_unitary(dim, prng);
      HermitianOperator htau(v * h0.matrix() * v.adjoint());
      const thermo::ProcessSpec spec(h0, std::move(htau), v, beta);

      const thermo::ThermoReport rep = thermo::analyze(spec);
      const double residual = std::max({std::abs(rep.J), std::abs(rep.work_dissipative),
                                        std::abs(rep.S_exact_vs_gibbs - rep.S_cts_vs_gibbs),
                                        std::abs(rep.quantum_heat)});
      rec.record(residual, describe(dim, beta, t, stream));
    }
  }
  return rec.take();
}

PropertyResult check_equality_diagnosis(const VerifyConfig& cfg) {
  Recorder rec("thermo.equality_diagnosis", 1e-7);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const double beta = cfg.betas[t % cfg.betas.size()];
    const uint64_t stream = stream_for(cfg, kDiagnosis, t);
    rng::Prng prng(stream);
    HermitianOperator h0 = rng::random_gue(dim, prng);
    ComplexMatrix u = rng::random_haar_unitary(dim, prng);
    // U† Htau U = H0 exactly, so the bound is tight and the states coincide
    HermitianOperator htau(u * h0.matrix() * u.adjoint());
    const thermo::ProcessSpec spec(h0, std::move(htau), u, beta);

    const thermo::ThermoReport rep = thermo::analyze(spec);
    const double gap = rep.S_exact_vs_gibbs - rep.S_cts_vs_gibbs;
    if (std::abs(gap) < 1e-9) {
      const ComplexMatrix diff =
          thermo::evolve_exact(spec).matrix() - thermo::final_cts(spec).density().matrix();
      rec.record(linalg::trace_norm(diff), describe(dim, beta, t, stream));
    } else {
      rec.record_failure(describe(dim, beta, t, stream), "constructed tight instance had a gap");
    }
  }
  return rec.take();
}

// estimation -----------------------------------------------------------

PropertyResult check_estimation_determinism(const VerifyConfig& cfg) {
  Recorder rec("estimation.determinism", 0.0);
  auto [h, basis] = metrology::qubit_instance(1.0, 0.0);
  const states::ConditionalThermalState state = states::cts(h, basis, 1.0);

  const std::vector<int> a = estimation::sample_outcomes(state, 512, cfg.seed);
  const std::vector<int> b = estimation::sample_outcomes(state, 512, cfg.seed);
  rec.record(a == b ? 0.0 : 1.0, "sample_outcomes twice, same seed");

  const estimation::EstimationRun r1 = estimation::crb_experiment(h, basis, 1.0, 1000, 8, cfg.seed);
  const estimation::EstimationRun r2 = estimation::crb_experiment(h, basis, 1.0, 1000, 8, cfg.seed);
  rec.record(r1.mse == r2.mse && r1.beta_hat_mean == r2.beta_hat_mean ? 0.0 : 1.0,
             "crb_experiment twice, same seed");
  return rec.take();
}

PropertyResult check_estimation_moment_match(const VerifyConfig& cfg) {
  Recorder rec("estimation.moment_match", 1e-8);
  for (int t = 0; t < cfg.trials; ++t) {
    const int dim = cfg.dims[t % cfg.dims.size()];
    const uint64_t stream = stream_for(cfg, kEstMoment, t);
    Instance inst = random_instance(dim, stream);
    const double beta = cfg.betas[t % cfg.betas.size()];

    const states::ConditionalThermalState state = states::cts(inst.h, inst.basis, beta);
    const estimation::BetaBounds bounds = estimation::default_beta_bounds(state.diag_energies);

    // the mean energy at beta must invert back to beta
    const double target = estimation::mean_energy(beta, state.diag_energies);
    const double hat = estimation::estimate_beta_from_mean(state.diag_energies, target, bounds);
    double residual = std::abs(hat - beta);

    // strict decrease over the bracket
    const double lo = estimation::mean_energy(bounds.lo, state.diag_energies);
    const double hi = estimation::mean_energy(bounds.hi, state.diag_energies);
    if (!(hi < lo)) residual = std::numeric_limits<double>::infinity();

    rec.record(residual, describe(dim, beta, t, stream));
  }
  return rec.take();
}

std::vector<PropertyResult> run_all(const VerifyConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("verify: trials must be >= 1");
  if (cfg.dims.empty()) throw std::invalid_argument("verify: need at least one dimension");
  for (int d : cfg.dims)
    if (d < 2) throw std::invalid_argument("verify: dimensions must be >= 2");

  std::vector<PropertyResult> out;

  out.push_back(check_eig_reconstruction(cfg));
  out.push_back(check_sqrt_composition(cfg));
  out.push_back(check_fidelity_properties(cfg));
  out.push_back(check_trace_norm_subadditivity(cfg));

  out.push_back(check_max_entropy(cfg));
  out.push_back(check_partition_identity(cfg));
  out.push_back(check_cts_gibbs_limit(cfg));
  out.push_back(check_separable_partial_trace(cfg));

  auto [closed, matrix] = check_qfi_route_agreement(cfg);
  out.push_back(std::move(closed));
  out.push_back(std::move(matrix));
  out.push_back(check_crb_identity(cfg));
  out.push_back(check_gibbs_delta_zero(cfg));
  out.push_back(check_qubit_closed_form_grid(cfg));
  out.push_back(check_delta_curvature(cfg));

  for (PropertyResult& r : check_skew_suite(cfg)) out.push_back(std::move(r));
  out.push_back(check_gibbs_skew_zero(cfg));
  out.push_back(check_skew_saturation(cfg));

  for (PropertyResult& r : check_thermo_identities(cfg)) out.push_back(std::move(r));
  out.push_back(check_thermo_adiabatic(cfg));
  out.push_back(check_equality_diagnosis(cfg));

  out.push_back(check_estimation_determinism(cfg));
  out.push_back(check_estimation_moment_match(cfg));

  return out;
}

}  // namespace ctherm::verify
