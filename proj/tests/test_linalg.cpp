#include <cmath>

#include <doctest.h>

#include "ctherm/linalg.hpp"
#include "ctherm/random.hpp"
#include "test_util.hpp"

using namespace ctherm;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using test_util::from_rows;
using test_util::max_abs_diff;

TEST_CASE("eig_hermitian on fixed 2x2 operators") {
  SUBCASE("identity") {
    auto ed = eig_hermitian(HermitianOperator(ComplexMatrix::identity(2)));
    CHECK(ed.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ed.eigenvectors.unitarity_deviation() < 1e-12);
  }
  SUBCASE("pauli z, already diagonal") {
    auto ed = eig_hermitian(HermitianOperator(test_util::pauli_z()));
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("pauli x") {
    // characteristic polynomial lambda^2 - 1 = 0 by hand
    auto ed = eig_hermitian(HermitianOperator(test_util::pauli_x()));
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("pauli y, complex off-diagonals") {
    auto ed = eig_hermitian(HermitianOperator(test_util::pauli_y()));
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  ComplexMatrix m = from_rows({{0, 1}, {2, 0}});
  CHECK_THROWS_AS(HermitianOperator{m}, std::invalid_argument);
}

TEST_CASE("eig_hermitian reconstruction on random instances") {
  rng::Prng prng(7);
  for (int dim : {2, 3, 4, 6, 8, 12}) {
    HermitianOperator a = rng::random_gue(dim, prng);
    auto ed = eig_hermitian(a);

    ComplexMatrix recon(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        Complex sum = 0.0;
        for (int k = 0; k < dim; ++k)
          sum += ed.eigenvectors(i, k) * ed.eigenvalues[k] * std::conj(ed.eigenvectors(j, k));
        recon(i, j) = sum;
      }
    CHECK((a.matrix() - recon).frobenius_norm() <= 1e-10 * (1.0 + a.matrix().frobenius_norm()));
    CHECK(ed.eigenvectors.unitarity_deviation() <= 1e-10);
    for (int k = 1; k < dim; ++k) CHECK(ed.eigenvalues[k - 1] <= ed.eigenvalues[k]);
  }
}

TEST_CASE("matrix_function basics") {
  SUBCASE("exp of the zero matrix") {
    HermitianOperator zero(ComplexMatrix(2));
    auto e = matrix_function(zero, linalg::MatrixFunction::exp);
    CHECK(max_abs_diff(e.matrix(), ComplexMatrix::identity(2)) < 1e-14);
  }
  SUBCASE("sqrt of diag(4, 9)") {
    auto r = matrix_function(HermitianOperator::from_diagonal({4, 9}), linalg::MatrixFunction::sqrt);
    CHECK(r(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r(1, 1).real() == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("power 1/2 equals sqrt on a maximally mixed qubit") {
    auto r = matrix_function(HermitianOperator::from_diagonal({0.5, 0.5}),
                             linalg::MatrixFunction::power, 0.5);
    CHECK(r(0, 0).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(r(1, 1).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
  SUBCASE("log rejects singular input") {
    CHECK_THROWS_AS(matrix_function(HermitianOperator::from_diagonal({1.0, 0.0}),
                                    linalg::MatrixFunction::log),
                    std::domain_error);
  }
  SUBCASE("sqrt rejects clearly negative input") {
    CHECK_THROWS_AS(matrix_function(HermitianOperator::from_diagonal({1.0, -0.5}),
                                    linalg::MatrixFunction::sqrt),
                    std::domain_error);
  }
  SUBCASE("log inverts exp") {
    rng::Prng prng(3);
    HermitianOperator a = rng::random_gue(4, prng);
    auto roundtrip = matrix_function(matrix_function(a, linalg::MatrixFunction::exp),
                                     linalg::MatrixFunction::log);
    CHECK(max_abs_diff(roundtrip.matrix(), a.matrix()) < 1e-10);
  }
}

TEST_CASE("sqrt composition property") {
  rng::Prng prng(11);
  for (int dim : {2, 3, 5, 6}) {
    HermitianOperator rho = rng::random_density(dim, prng);
    ComplexMatrix root = matrix_function(rho, linalg::MatrixFunction::sqrt).matrix();
    CHECK(max_abs_diff(root * root, rho.matrix()) < 1e-9);
  }
}

TEST_CASE("trace_norm") {
  SUBCASE("zero matrix") { CHECK(linalg::trace_norm(ComplexMatrix(3)) == doctest::Approx(0.0)); }
  SUBCASE("diagonal sign mix sums absolute values") {
    CHECK(linalg::trace_norm(from_rows({{1, 0}, {0, -2}})) == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("random 3x3 against the singular-value oracle") {
    rng::Prng prng(5);
    ComplexMatrix a(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = Complex(prng.normal(), prng.normal());

    // oracle: sum of sqrt eigenvalues of A†A
    auto gram = eig_hermitian(HermitianOperator(a.adjoint() * a));
    double oracle = 0.0;
    for (double lam : gram.eigenvalues) oracle += std::sqrt(std::max(lam, 0.0));

    CHECK(std::abs(linalg::trace_norm(a) - oracle) < 1e-10);
  }
  SUBCASE("subadditivity on random pairs") {
    rng::Prng prng(13);
    for (int trial = 0; trial < 25; ++trial) {
      const int dim = 2 + trial % 4;
      ComplexMatrix a(dim), b(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          a(i, j) = Complex(prng.normal(), prng.normal());
          b(i, j) = Complex(prng.normal(), prng.normal());
        }
      CHECK(linalg::trace_norm(a + b) <=
            linalg::trace_norm(a) + linalg::trace_norm(b) + 1e-10);
    }
  }
}

TEST_CASE("fidelity") {
  rng::Prng prng(17);

  SUBCASE("unit on identical states") {
    for (int dim : {2, 4, 6}) {
      HermitianOperator rho = rng::random_density(dim, prng);
      CHECK(std::abs(linalg::fidelity(rho, rho) - 1.0) < 1e-10);
    }
  }
  SUBCASE("orthogonal pure states") {
    HermitianOperator ket0(from_rows({{1, 0}, {0, 0}}));
    HermitianOperator ket1(from_rows({{0, 0}, {0, 1}}));
    CHECK(linalg::fidelity(ket0, ket1) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("commuting diagonal states follow the Bhattacharyya formula") {
    const std::vector<double> p{0.1, 0.3, 0.6};
    const std::vector<double> q{0.5, 0.25, 0.25};
    double bc = 0.0;
    for (size_t k = 0; k < p.size(); ++k) bc += std::sqrt(p[k] * q[k]);

    const double f = linalg::fidelity(HermitianOperator::from_diagonal(p),
                                      HermitianOperator::from_diagonal(q));
    CHECK(f == doctest::Approx(bc * bc).epsilon(1e-12));
  }
  SUBCASE("symmetric and bounded on random pairs") {
    for (int trial = 0; trial < 10; ++trial) {
      const int dim = 2 + trial % 3;
      HermitianOperator rho = rng::random_density(dim, prng);
      HermitianOperator sigma = rng::random_density(dim, prng);
      const double fab = linalg::fidelity(rho, sigma);
      const double fba = linalg::fidelity(sigma, rho);
      CHECK(std::abs(fab - fba) < 1e-9);
      CHECK(fab >= 0.0);
      CHECK(fab <= 1.0);
    }
  }
  SUBCASE("rejects non-density input") {
    HermitianOperator not_normalized = HermitianOperator::from_diagonal({1.0, 1.0});
    HermitianOperator rho = rng::random_density(2, prng);
    CHECK_THROWS_AS(linalg::fidelity(not_normalized, rho), std::invalid_argument);
    CHECK_THROWS_AS(linalg::fidelity(HermitianOperator::from_diagonal({1.5, -0.5}), rho),
                    std::invalid_argument);
  }
}

TEST_CASE("kron and partial trace") {
  rng::Prng prng(23);
  HermitianOperator a = rng::random_density(2, prng);
  HermitianOperator b = rng::random_density(3, prng);
  ComplexMatrix ab = linalg::kron(a.matrix(), b.matrix());
  CHECK(ab.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  // tracing out the second factor recovers the first
  CHECK(max_abs_diff(linalg::partial_trace_second(ab, 2, 3), a.matrix()) < 1e-12);
}
