#ifndef CTHERM_LINALG_HPP
#define CTHERM_LINALG_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctherm::linalg {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(check_dim(dim)), data_(static_cast<size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

  int dim() const { return dim_; }

  Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * dim_ + j]; }
  const Complex& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * dim_ + j]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  // max_{i,j} |A[i][j] - conj(A[j][i])|
  double hermiticity_deviation() const;
  // max-entry deviation of A†A from the identity
  double unitarity_deviation() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  static int check_dim(int dim) {
    if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
    return dim;
  }

  int dim_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace over the second factor of a (d1*d2)-dimensional bipartite operator.
ComplexMatrix partial_trace_second(const ComplexMatrix& ab, int dim_first, int dim_second);

/// Hermitian matrix; the constructor rejects anything with
/// hermiticity deviation above 1e-12 * (1 + max|A|).
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m);

  static HermitianOperator from_diagonal(const std::vector<double>& diag);

  int dim() const { return mat_.dim(); }
  const ComplexMatrix& matrix() const { return mat_; }
  const Complex& operator()(int i, int j) const { return mat_(i, j); }

 private:
  ComplexMatrix mat_;
};

/// Eigensystem of a Hermitian matrix: eigenvalues ascending (ties in
/// encounter order), eigenvectors as the columns of a unitary.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

// Cyclic complex Jacobi; iterates until the off-diagonal Frobenius norm
// drops below 1e-13 * ||A||_F.
EigenDecomposition eig_hermitian(const HermitianOperator& a);

enum class MatrixFunction { exp, log, sqrt, power };

// V f(Λ) V†. For sqrt/power, eigenvalues in [-psd_tol, 0) are clamped to 0
// and anything below -psd_tol is a domain error, psd_tol = 1e-10 * (1 + max|λ|);
// log additionally rejects eigenvalues that clamp to zero.
HermitianOperator matrix_function(const HermitianOperator& a, MatrixFunction f, double alpha = 0.0);

// Tr sqrt(A†A), the sum of singular values.
double trace_norm(const ComplexMatrix& a);

// Uhlmann fidelity (Tr sqrt(sqrt(ρ) σ sqrt(ρ)))², clamped to [0, 1].
// Both arguments must be density matrices.
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

// PSD within the clamp tolerance and unit trace within 1e-10.
bool is_density(const HermitianOperator& rho);

void require_density(const HermitianOperator& rho, const std::string& label);

}  // namespace ctherm::linalg

#endif
