#include "ctherm/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "ctherm/errors.hpp"
#include "ctherm/metrology.hpp"
#include "ctherm/random.hpp"

namespace ctherm::estimation {

namespace {

double energy_spread(const std::vector<double>& energies) {
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  return *hi - *lo;
}

}  // namespace

std::vector<int> sample_outcomes(const ConditionalThermalState& state, long n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_outcomes: need at least one sample");

  // cumulative distribution, final entry pinned to 1
  std::vector<double> cdf(state.probs.size());
  double acc = 0.0;
  for (size_t k = 0; k < state.probs.size(); ++k) {
    acc += state.probs[k];
    cdf[k] = acc;
  }
  cdf.back() = 1.0;

  rng::Prng prng(seed);
  std::vector<int> outcomes(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double u = prng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    outcomes[static_cast<size_t>(i)] = static_cast<int>(it - cdf.begin());
  }
  return outcomes;
}

BetaBounds default_beta_bounds(const std::vector<double>& energies) {
  const double spread = energy_spread(energies);
  if (spread <= 0.0)
    throw std::invalid_argument("default_beta_bounds: energies are constant, zero information");
  return {-50.0 / spread, 50.0 / spread};
}

double mean_energy(double beta, const std::vector<double>& energies) {
  const std::vector<double> probs = states::boltzmann_weights(beta, energies);
  double mean = 0.0;
  for (size_t k = 0; k < energies.size(); ++k) mean += probs[k] * energies[k];
  return mean;
}

double estimate_beta_from_mean(const std::vector<double>& energies, double target,
                               const BetaBounds& bounds, bool* clamped) {
  if (energy_spread(energies) <= 0.0)
    throw std::invalid_argument("estimate_beta_from_mean: constant energies carry no information");
  if (!(bounds.lo < bounds.hi))
    throw std::invalid_argument("estimate_beta_from_mean: empty search interval");
  if (clamped) *clamped = false;

  double lo = bounds.lo, hi = bounds.hi;
  const double mean_lo = mean_energy(lo, energies);
  const double mean_hi = mean_energy(hi, energies);

  // mean_energy decreases in beta, so the bracket must satisfy
  // mean(hi) <= target <= mean(lo)
  if (!(mean_hi < mean_lo))
    throw ConsistencyError("estimate_beta_from_mean: mean energy failed to decrease over bracket");
  if (target >= mean_lo) {
    if (clamped) *clamped = true;
    return lo;
  }
  if (target <= mean_hi) {
    if (clamped) *clamped = true;
    return hi;
  }

  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mean_energy(mid, energies) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double estimate_beta(const std::vector<double>& energies, const std::vector<int>& outcomes,
                     const BetaBounds& bounds, bool* clamped) {
  if (outcomes.empty()) throw std::invalid_argument("estimate_beta: no outcomes");
  double sum = 0.0;
  for (int k : outcomes) sum += energies.at(static_cast<size_t>(k));
  return estimate_beta_from_mean(energies, sum / static_cast<double>(outcomes.size()), bounds,
                                 clamped);
}

EstimationRun crb_experiment(const HermitianOperator& h, const PointerBasis& basis, double beta,
                             long n_samples, int n_repeats, uint64_t seed) {
  if (n_repeats < 1) throw std::invalid_argument("crb_experiment: need at least one repeat");

  const ConditionalThermalState state = states::cts(h, basis, beta);
  const double qfi = metrology::qfi_analytic(state).value;
  if (qfi <= 1e-12)
    throw std::invalid_argument("crb_experiment: instance carries no information about beta");

  const BetaBounds bounds = default_beta_bounds(state.diag_energies);

  EstimationRun run;
  run.true_beta = beta;
  run.n_samples = n_samples;
  run.n_repeats = n_repeats;
  run.seed = seed;
  run.crb = 1.0 / (static_cast<double>(n_samples) * qfi);

  double sum_hat = 0.0;
  double sum_sq_err = 0.0;
  for (int r = 0; r < n_repeats; ++r) {
    const std::vector<int> outcomes =
        sample_outcomes(state, n_samples, rng::derive_stream(seed, static_cast<uint64_t>(r)));
    bool clamped = false;
    const double hat = estimate_beta(state.diag_energies, outcomes, bounds, &clamped);
    if (clamped) ++run.clamped;
    sum_hat += hat;
    const double err = hat - beta;
    sum_sq_err += err * err;
  }
  run.beta_hat_mean = sum_hat / n_repeats;
  run.mse = sum_sq_err / n_repeats;
  run.ratio = run.mse / run.crb;
  return run;
}

}  // namespace ctherm::estimation
