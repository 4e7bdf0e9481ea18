#ifndef CTHERM_RANDOM_HPP
#define CTHERM_RANDOM_HPP

#include <cstdint>
#include <optional>
#include <random>

#include "ctherm/linalg.hpp"

namespace ctherm::rng {

// splitmix64 step (Steele, Lea, Flood); used to derive independent
// substream seeds so parallel schedules cannot change results.
uint64_t splitmix64(uint64_t& state);

uint64_t derive_stream(uint64_t seed, uint64_t index);

/// Deterministic random source: MT19937-64 engine with the uniform and
/// normal transformations implemented here, so the produced sequences are
/// identical on every platform and standard library.
class Prng {
 public:
  explicit Prng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1) with 53-bit resolution
  double uniform();

  // standard normal via Box-Muller
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

// GUE Hamiltonian (G + G†) / (2 sqrt(2d)) with G complex Ginibre;
// spectral radius ~1 so beta sweeps up to ~50 stay in exponent range.
linalg::HermitianOperator random_gue(int dim, Prng& prng);

// Haar unitary: modified Gram-Schmidt QR of a complex Ginibre matrix with
// positive-real diagonal of R.
linalg::ComplexMatrix random_haar_unitary(int dim, Prng& prng);

// Random full-rank density matrix (normalized GG†).
linalg::HermitianOperator random_density(int dim, Prng& prng);

}  // namespace ctherm::rng

#endif
