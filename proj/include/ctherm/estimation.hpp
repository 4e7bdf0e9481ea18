#ifndef CTHERM_ESTIMATION_HPP
#define CTHERM_ESTIMATION_HPP

#include <cstdint>
#include <vector>

#include "ctherm/states.hpp"

namespace ctherm::estimation {

using linalg::HermitianOperator;
using states::ConditionalThermalState;
using states::PointerBasis;

struct EstimationRun {
  double true_beta = 0.0;
  long n_samples = 0;
  int n_repeats = 0;
  uint64_t seed = 0;
  double beta_hat_mean = 0.0;
  double mse = 0.0;
  double crb = 0.0;  // 1 / (N * qfi)
  double ratio = 0.0;
  int clamped = 0;  // repeats whose sample mean fell outside the moment range
};

// i.i.d. outcome indices drawn from the CTS probabilities; bit-identical
// for a fixed seed.
std::vector<int> sample_outcomes(const ConditionalThermalState& state, long n, uint64_t seed);

struct BetaBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Default search interval [-50, 50] / (e_max - e_min).
BetaBounds default_beta_bounds(const std::vector<double>& energies);

// Thermal mean energy sum_k e_k exp(-beta e_k) / Z, strictly decreasing
// in beta when the energies are not all equal.
double mean_energy(double beta, const std::vector<double>& energies);

// Solves mean_energy(beta) = target by bisection to |dbeta| <= 1e-10;
// targets outside the attainable range clamp to the bounds and set the flag.
double estimate_beta_from_mean(const std::vector<double>& energies, double target,
                               const BetaBounds& bounds, bool* clamped = nullptr);

// Moment-matching estimate from measured outcome indices.
double estimate_beta(const std::vector<double>& energies, const std::vector<int>& outcomes,
                     const BetaBounds& bounds, bool* clamped = nullptr);

// Repeated sample-and-estimate cycles; the per-repeat generator streams are
// derived from (seed, repeat index), so results do not depend on schedule.
EstimationRun crb_experiment(const HermitianOperator& h, const PointerBasis& basis, double beta,
                             long n_samples, int n_repeats, uint64_t seed);

}  // namespace ctherm::estimation

#endif
