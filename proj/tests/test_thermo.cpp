#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "ctherm/errors.hpp"
#include "ctherm/random.hpp"
#include "ctherm/thermo.hpp"
#include "test_util.hpp"

using namespace ctherm;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using test_util::from_rows;
using test_util::max_abs_diff;

namespace {

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

thermo::ProcessSpec random_spec(int dim, double beta, uint64_t seed) {
  rng::Prng prng(seed);
  return thermo::ProcessSpec(rng::random_gue(dim, prng), rng::random_gue(dim, prng),
                             rng::random_haar_unitary(dim, prng), beta);
}

thermo::ProcessSpec identity_spec(int dim, double beta, uint64_t seed) {
  rng::Prng prng(seed);
  HermitianOperator h = rng::random_gue(dim, prng);
  return thermo::ProcessSpec(h, h, ComplexMatrix::identity(dim), beta);
}

// H_tau = V H0 V†, U_tau = V
thermo::ProcessSpec adiabatic_spec(int dim, double beta, uint64_t seed) {
  rng::Prng prng(seed);
  HermitianOperator h0 = rng::random_gue(dim, prng);
  ComplexMatrix v = rng::random_haar_unitary(dim, prng);
  return thermo::ProcessSpec(h0, HermitianOperator(v * h0.matrix() * v.adjoint()), v, beta);
}

}  // namespace

TEST_CASE("ProcessSpec validation") {
  rng::Prng prng(157);
  HermitianOperator h = rng::random_gue(2, prng);
  SUBCASE("rejects a non-unitary evolution") {
    ComplexMatrix bad = ComplexMatrix::identity(2);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(thermo::ProcessSpec(h, h, bad, 1.0), std::invalid_argument);
  }
  SUBCASE("rejects mismatched dimensions") {
    CHECK_THROWS_AS(thermo::ProcessSpec(h, rng::random_gue(3, prng), ComplexMatrix::identity(3), 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("evolve_exact") {
  SUBCASE("identity evolution returns the initial Gibbs state") {
    auto spec = identity_spec(3, 1.2, 163);
    CHECK(max_abs_diff(thermo::evolve_exact(spec).matrix(),
                       states::gibbs(spec.h0, spec.beta).matrix()) < 1e-12);
  }
  SUBCASE("entropy is preserved") {
    auto spec = random_spec(4, 0.9, 167);
    CHECK(states::von_neumann_entropy(thermo::evolve_exact(spec)) ==
          doctest::Approx(states::von_neumann_entropy(states::gibbs(spec.h0, spec.beta)))
              .epsilon(1e-10));
  }
  SUBCASE("spectrum equals the initial Gibbs weights") {
    auto spec = random_spec(4, 1.5, 173);
    auto evolved = eig_hermitian(thermo::evolve_exact(spec)).eigenvalues;
    auto initial = eig_hermitian(states::gibbs(spec.h0, spec.beta)).eigenvalues;
    for (size_t k = 0; k < evolved.size(); ++k)
      CHECK(evolved[k] == doctest::Approx(initial[k]).epsilon(1e-10));
  }
}

TEST_CASE("final_cts") {
  SUBCASE("identity process reproduces the exact state") {
    auto spec = identity_spec(3, 1.0, 179);
    CHECK(max_abs_diff(thermo::final_cts(spec).density().matrix(),
                       thermo::evolve_exact(spec).matrix()) < 1e-10);
  }
  SUBCASE("adiabatic passage matches exact state and Gibbs state") {
    auto spec = adiabatic_spec(4, 1.1, 181);
    const ComplexMatrix cts_density = thermo::final_cts(spec).density().matrix();
    CHECK(max_abs_diff(cts_density, thermo::evolve_exact(spec).matrix()) < 1e-10);
    CHECK(max_abs_diff(cts_density, states::gibbs(spec.htau, spec.beta).matrix()) < 1e-10);
  }
  SUBCASE("beta = 0 is maximally mixed regardless of the protocol") {
    auto spec = random_spec(3, 0.0, 191);
    ComplexMatrix mixed = ComplexMatrix::identity(3);
    mixed *= Complex(1.0 / 3.0);
    CHECK(max_abs_diff(thermo::final_cts(spec).density().matrix(), mixed) < 1e-12);
  }
}

TEST_CASE("work_exact") {
  SUBCASE("identity process does no work") {
    CHECK(std::abs(thermo::work_exact(identity_spec(3, 1.4, 193))) < 1e-12);
  }
  SUBCASE("uniform level shift costs exactly the shift") {
    rng::Prng prng(197);
    HermitianOperator h0 = rng::random_gue(3, prng);
    const double c = 0.7;
    ComplexMatrix shifted = h0.matrix();
    for (int i = 0; i < 3; ++i) shifted(i, i) += c;
    thermo::ProcessSpec spec(h0, HermitianOperator(shifted), ComplexMatrix::identity(3), 1.0);
    CHECK(thermo::work_exact(spec) == doctest::Approx(c).epsilon(1e-12));
  }
  SUBCASE("random spec against the direct trace oracle") {
    auto spec = random_spec(4, 1.3, 199);
    const ComplexMatrix rho0 = states::gibbs(spec.h0, spec.beta).matrix();
    const ComplexMatrix rho_tau = spec.utau * rho0 * spec.utau.adjoint();
    const double oracle =
        real_trace(rho_tau * spec.htau.matrix()) - real_trace(rho0 * spec.h0.matrix());
    CHECK(thermo::work_exact(spec) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("equilibrium_free_energy_difference") {
  SUBCASE("unchanged Hamiltonian") {
    CHECK(std::abs(thermo::equilibrium_free_energy_difference(identity_spec(3, 2.0, 211))) <
          1e-12);
  }
  SUBCASE("uniform level shift") {
    rng::Prng prng(223);
    HermitianOperator h0 = rng::random_gue(4, prng);
    const double c = -0.45;
    ComplexMatrix shifted = h0.matrix();
    for (int i = 0; i < 4; ++i) shifted(i, i) += c;
    thermo::ProcessSpec spec(h0, HermitianOperator(shifted), ComplexMatrix::identity(4), 1.7);
    CHECK(thermo::equilibrium_free_energy_difference(spec) == doctest::Approx(c).epsilon(1e-12));
  }
  SUBCASE("qubit doubling closed form") {
    HermitianOperator h0(test_util::pauli_z());
    ComplexMatrix htau = test_util::pauli_z();
    htau *= Complex(2.0);
    thermo::ProcessSpec spec(h0, HermitianOperator(htau), ComplexMatrix::identity(2), 1.0);
    const double expected = -std::log(std::cosh(2.0) / std::cosh(1.0));
    CHECK(thermo::equilibrium_free_energy_difference(spec) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("beta must be positive") {
    auto spec = identity_spec(2, 1.0, 227);
    thermo::ProcessSpec zero_beta(spec.h0, spec.htau, spec.utau, 0.0);
    CHECK_THROWS_AS(thermo::equilibrium_free_energy_difference(zero_beta), std::domain_error);
  }
}

TEST_CASE("ergotropy") {
  SUBCASE("diagonal state with identity evolution extracts nothing") {
    rng::Prng prng(229);
    HermitianOperator h0 = rng::random_gue(3, prng);
    HermitianOperator rho = states::gibbs(h0, 1.0);
    auto res = thermo::ergotropy(rho, h0, ComplexMatrix::identity(3));
    CHECK(std::abs(res.value) < 1e-10);
    CHECK(res.gamma.unitarity_deviation() < 1e-10);
  }
  SUBCASE("extraction trace matches the weighted level sum") {
    auto spec = random_spec(4, 1.0, 233);
    auto state = thermo::final_cts(spec);
    HermitianOperator rho = state.density();
    auto res = thermo::ergotropy(rho, spec.h0, spec.utau);

    // oracle: sum_k E_k p_k(tau), pairing eigenvalues with the CTS weights
    const auto h0_eig = eig_hermitian(spec.h0);
    double expected_after = 0.0;
    for (size_t k = 0; k < state.probs.size(); ++k)
      expected_after += h0_eig.eigenvalues[k] * state.probs[k];

    const ComplexMatrix rotated = res.gamma * rho.matrix() * res.gamma.adjoint();
    CHECK(real_trace(rotated * spec.h0.matrix()) ==
          doctest::Approx(expected_after).epsilon(1e-10));
    CHECK(res.value == doctest::Approx(real_trace(rho.matrix() * spec.h0.matrix()) -
                                       expected_after)
                           .epsilon(1e-10));
  }
}

TEST_CASE("analyze") {
  SUBCASE("identity process yields the all-zero report") {
    auto rep = thermo::analyze(identity_spec(3, 1.2, 239));
    CHECK(std::abs(rep.work) < 1e-10);
    CHECK(std::abs(rep.delta_F_eq) < 1e-10);
    CHECK(std::abs(rep.work_dissipative) < 1e-10);
    CHECK(std::abs(rep.S_exact_vs_gibbs) < 1e-10);
    CHECK(std::abs(rep.S_cts_vs_gibbs) < 1e-10);
    CHECK(std::abs(rep.J) < 1e-10);
    CHECK(std::abs(rep.ergotropy_W0) < 1e-10);
    CHECK(std::abs(rep.delta_E_cts) < 1e-10);
    CHECK(std::abs(rep.quantum_heat) < 1e-10);
  }
  SUBCASE("adiabatic passage exchanges no quantum heat") {
    auto rep = thermo::analyze(adiabatic_spec(4, 0.8, 241));
    CHECK(std::abs(rep.J) < 1e-9);
    CHECK(std::abs(rep.quantum_heat) < 1e-9);
    CHECK(rep.work == doctest::Approx(rep.delta_F_eq).epsilon(1e-9));
    CHECK(std::abs(rep.work_dissipative) < 1e-9);
  }
  SUBCASE("random spec satisfies the independent-path J identity") {
    for (uint64_t seed : {251u, 257u, 263u}) {
      auto spec = random_spec(3, 1.0, seed);
      auto rep = thermo::analyze(spec);

      // left side from relative entropies, right side from trace accounting
      const double lhs = rep.S_exact_vs_cts + rep.S_cts_vs_exact;
      const double rhs = spec.beta * (rep.work - rep.ergotropy_W0 - rep.delta_E_cts);
      CHECK(std::abs(lhs - rhs) < 1e-9);

      CHECK(std::abs(spec.beta * rep.work_dissipative - rep.S_exact_vs_gibbs) < 1e-9);
      CHECK(rep.S_exact_vs_gibbs >= rep.S_cts_vs_gibbs - 1e-9);
      CHECK(std::abs(rep.S_exact_vs_cts + rep.S_cts_vs_gibbs - rep.S_exact_vs_gibbs) < 1e-9);
      CHECK(rep.quantum_heat == doctest::Approx(rep.J / spec.beta));
    }
  }
  SUBCASE("work and log-partition identity") {
    auto spec = random_spec(4, 1.4, 269);
    auto rep = thermo::analyze(spec);
    const double log_z_tau = thermo::final_cts(spec).log_z;
    const double log_z_eq0 = states::log_partition_gibbs(spec.h0, spec.beta);
    CHECK(rep.S_exact_vs_cts ==
          doctest::Approx(spec.beta * rep.work + log_z_tau - log_z_eq0).epsilon(1e-9));
  }
  SUBCASE("beta = 0 is rejected") {
    auto spec = random_spec(3, 0.0, 271);
    CHECK_THROWS_AS(thermo::analyze(spec), std::domain_error);
  }
  SUBCASE("tight-bound construction collapses the exact state onto the CTS") {
    rng::Prng prng(277);
    HermitianOperator h0 = rng::random_gue(4, prng);
    ComplexMatrix u = rng::random_haar_unitary(4, prng);
    thermo::ProcessSpec spec(h0, HermitianOperator(u * h0.matrix() * u.adjoint()), u, 1.0);

    auto rep = thermo::analyze(spec);
    CHECK(std::abs(rep.S_exact_vs_gibbs - rep.S_cts_vs_gibbs) < 1e-9);
    CHECK(linalg::trace_norm(thermo::evolve_exact(spec).matrix() -
                             thermo::final_cts(spec).density().matrix()) < 1e-7);
  }
}

TEST_CASE("degenerate spectrum relabeling leaves the report unchanged") {
  // H0 with a twofold-degenerate level; remixing the degenerate eigenvector
  // pair is an equally valid labeling and must not move any scalar output
  rng::Prng prng(281);
  ComplexMatrix v = rng::random_haar_unitary(3, prng);
  ComplexMatrix h0m(3);
  const double levels[3] = {1.0, 1.0, 2.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Complex sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += v(i, k) * levels[k] * std::conj(v(j, k));
      h0m(i, j) = sum;
    }
  HermitianOperator h0(h0m);
  thermo::ProcessSpec spec(h0, rng::random_gue(3, prng), rng::random_haar_unitary(3, prng), 1.0);

  linalg::EigenDecomposition ed = eig_hermitian(h0);
  REQUIRE(std::abs(ed.eigenvalues[0] - ed.eigenvalues[1]) < 1e-10);

  // swap the degenerate labels and attach arbitrary phases; both describe
  // the same measurement of H0
  linalg::EigenDecomposition remixed = ed;
  const Complex phase0 = std::polar(1.0, 0.9);
  const Complex phase1 = std::polar(1.0, -1.7);
  for (int r = 0; r < 3; ++r) {
    remixed.eigenvectors(r, 0) = phase0 * ed.eigenvectors(r, 1);
    remixed.eigenvectors(r, 1) = phase1 * ed.eigenvectors(r, 0);
  }

  auto rep_a = thermo::analyze_with_h0_basis(spec, ed);
  auto rep_b = thermo::analyze_with_h0_basis(spec, remixed);

  CHECK(rep_a.work == doctest::Approx(rep_b.work).epsilon(1e-9));
  CHECK(rep_a.S_exact_vs_cts == doctest::Approx(rep_b.S_exact_vs_cts).epsilon(1e-9));
  CHECK(rep_a.S_cts_vs_exact == doctest::Approx(rep_b.S_cts_vs_exact).epsilon(1e-9));
  CHECK(rep_a.J == doctest::Approx(rep_b.J).epsilon(1e-9));
  CHECK(rep_a.ergotropy_W0 == doctest::Approx(rep_b.ergotropy_W0).epsilon(1e-9));
  CHECK(rep_a.delta_E_cts == doctest::Approx(rep_b.delta_E_cts).epsilon(1e-9));
  CHECK(rep_a.quantum_heat == doctest::Approx(rep_b.quantum_heat).epsilon(1e-9));
}
