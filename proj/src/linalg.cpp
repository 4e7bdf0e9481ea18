#include "ctherm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ctherm::linalg {

namespace {

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
}

double psd_tolerance(const std::vector<double>& eigenvalues) {
  double radius = 0.0;
  for (double v : eigenvalues) radius = std::max(radius, std::abs(v));
  return 1e-10 * (1.0 + radius);
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermiticity_deviation() const {
  double dev = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return dev;
}

double ComplexMatrix::unitarity_deviation() const {
  ComplexMatrix gram = adjoint() * (*this);
  double dev = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Complex expect = (i == j) ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(gram(i, j) - expect));
    }
  return dev;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  check_same_dim(*this, rhs);
  for (size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  check_same_dim(*this, rhs);
  for (size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  const int n = a.dim();
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int na = a.dim(), nb = b.dim();
  ComplexMatrix out(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace_second(const ComplexMatrix& ab, int dim_first, int dim_second) {
  if (ab.dim() != dim_first * dim_second)
    throw std::invalid_argument("partial_trace_second: dimensions do not factor the input");
  ComplexMatrix out(dim_first);
  for (int i = 0; i < dim_first; ++i)
    for (int j = 0; j < dim_first; ++j) {
      Complex sum = 0.0;
      for (int k = 0; k < dim_second; ++k) sum += ab(i * dim_second + k, j * dim_second + k);
      out(i, j) = sum;
    }
  return out;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : mat_(std::move(m)) {
  const double tol = 1e-12 * (1.0 + mat_.max_abs());
  if (mat_.hermiticity_deviation() > tol)
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
}

HermitianOperator HermitianOperator::from_diagonal(const std::vector<double>& diag) {
  ComplexMatrix m(static_cast<int>(diag.size()));
  for (size_t i = 0; i < diag.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = diag[i];
  return HermitianOperator(std::move(m));
}

EigenDecomposition eig_hermitian(const HermitianOperator& a) {
  const int n = a.dim();
  ComplexMatrix m = a.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  // Work on an exactly Hermitian copy: average the off-diagonal pairs,
  // drop the (tiny) imaginary parts of the diagonal.
  for (int i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }

  const double scale = m.frobenius_norm();
  const double off_target = 1e-13 * scale;

  auto off_norm = [&]() {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sum += 2.0 * std::norm(m(i, j));
    return std::sqrt(sum);
  };

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > off_target; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double b = std::abs(m(p, q));
        if (b == 0.0) continue;

        const Complex phase = m(p, q) / b;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        const double tau = (aqq - app) / (2.0 * b);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // R restricted to (p,q): [[c, s*phase], [-s*conj(phase), c]]
        for (int r = 0; r < n; ++r) {
          const Complex mrp = m(r, p), mrq = m(r, q);
          m(r, p) = c * mrp - s * std::conj(phase) * mrq;
          m(r, q) = s * phase * mrp + c * mrq;
        }
        for (int col = 0; col < n; ++col) {
          const Complex mpc = m(p, col), mqc = m(q, col);
          m(p, col) = c * mpc - s * phase * mqc;
          m(q, col) = s * std::conj(phase) * mpc + c * mqc;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        m(p, p) = m(p, p).real();
        m(q, q) = m(q, q).real();

        for (int r = 0; r < n; ++r) {
          const Complex vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * std::conj(phase) * vrq;
          v(r, q) = s * phase * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return m(i, i).real() < m(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = m(order[k], order[k]).real();
    for (int r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

HermitianOperator matrix_function(const HermitianOperator& a, MatrixFunction f, double alpha) {
  EigenDecomposition ed = eig_hermitian(a);
  const double tol = psd_tolerance(ed.eigenvalues);
  const int n = a.dim();

  std::vector<double> mapped(ed.eigenvalues.size());
  for (size_t k = 0; k < ed.eigenvalues.size(); ++k) {
    double lam = ed.eigenvalues[k];
    switch (f) {
      case MatrixFunction::exp:
        mapped[k] = std::exp(lam);
        break;
      case MatrixFunction::log:
        if (lam <= tol)
          throw std::domain_error("matrix_function: log of eigenvalue outside support");
        mapped[k] = std::log(lam);
        break;
      case MatrixFunction::sqrt:
        if (lam < -tol) throw std::domain_error("matrix_function: sqrt of negative eigenvalue");
        mapped[k] = std::sqrt(std::max(lam, 0.0));
        break;
      case MatrixFunction::power:
        if (alpha <= 0.0) throw std::invalid_argument("matrix_function: power exponent must be positive");
        if (lam < -tol) throw std::domain_error("matrix_function: power of negative eigenvalue");
        // 0^alpha := 0; a roundoff-sized positive eigenvalue must count as
        // zero too, since pow(1e-17, alpha < 1) is far from negligible
        mapped[k] = lam <= tol ? 0.0 : std::pow(lam, alpha);
        break;
    }
  }

  const ComplexMatrix& vec = ed.eigenvectors;
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (int k = 0; k < n; ++k) sum += vec(i, k) * mapped[k] * std::conj(vec(j, k));
      out(i, j) = sum;
    }
  return HermitianOperator(std::move(out));
}

double trace_norm(const ComplexMatrix& a) {
  HermitianOperator gram(a.adjoint() * a);
  HermitianOperator root = matrix_function(gram, MatrixFunction::sqrt);
  return root.matrix().trace().real();
}

bool is_density(const HermitianOperator& rho) {
  if (std::abs(rho.matrix().trace().real() - 1.0) > 1e-10) return false;
  EigenDecomposition ed = eig_hermitian(rho);
  return ed.eigenvalues.front() >= -psd_tolerance(ed.eigenvalues);
}

void require_density(const HermitianOperator& rho, const std::string& label) {
  if (!is_density(rho))
    throw std::invalid_argument(label + " is not a density matrix (PSD, unit trace)");
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_same_dim(rho.matrix(), sigma.matrix());
  require_density(rho, "fidelity: rho");
  require_density(sigma, "fidelity: sigma");

  ComplexMatrix root = matrix_function(rho, MatrixFunction::sqrt).matrix();
  HermitianOperator inner(root * sigma.matrix() * root);
  EigenDecomposition ed = eig_hermitian(inner);

  double sum = 0.0;
  for (double lam : ed.eigenvalues) sum += std::sqrt(std::max(lam, 0.0));
  return std::clamp(sum * sum, 0.0, 1.0);
}

}  // namespace ctherm::linalg
