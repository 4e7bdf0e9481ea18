#include "ctherm/random.hpp"

#include <cmath>

namespace ctherm::rng {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_stream(uint64_t seed, uint64_t index) {
  uint64_t state = seed;
  splitmix64(state);
  state ^= 0x6a09e667f3bcc909ULL * (index + 1);
  return splitmix64(state);
}

double Prng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::normal() {
  if (cached_normal_) {
    double v = *cached_normal_;
    cached_normal_.reset();
    return v;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

linalg::HermitianOperator random_gue(int dim, Prng& prng) {
  linalg::ComplexMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = linalg::Complex(prng.normal(), prng.normal());
  const double scale = 1.0 / (2.0 * std::sqrt(2.0 * dim));
  linalg::ComplexMatrix h = g + g.adjoint();
  h *= scale;
  return linalg::HermitianOperator(std::move(h));
}

linalg::ComplexMatrix random_haar_unitary(int dim, Prng& prng) {
  linalg::ComplexMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = linalg::Complex(prng.normal(), prng.normal());

  // modified Gram-Schmidt on the columns, repeated once for orthogonality
  // at machine level
  linalg::ComplexMatrix q = g;
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < j; ++k) {
        linalg::Complex proj = 0.0;
        for (int r = 0; r < dim; ++r) proj += std::conj(q(r, k)) * q(r, j);
        for (int r = 0; r < dim; ++r) q(r, j) -= proj * q(r, k);
      }
      double norm = 0.0;
      for (int r = 0; r < dim; ++r) norm += std::norm(q(r, j));
      norm = std::sqrt(norm);
      for (int r = 0; r < dim; ++r) q(r, j) /= norm;
    }
  }
  return q;
}

linalg::HermitianOperator random_density(int dim, Prng& prng) {
  linalg::ComplexMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = linalg::Complex(prng.normal(), prng.normal());
  linalg::ComplexMatrix w = g * g.adjoint();
  const double tr = w.trace().real();
  w *= (1.0 / tr);
  return linalg::HermitianOperator(std::move(w));
}

}  // namespace ctherm::rng
