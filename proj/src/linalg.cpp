#include "magnus/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magnus/errors.hpp"

namespace magnus {

namespace {

void require_same_dim(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << op << ": incompatible operands (" << a.dim() << "x" << a.dim() << " vs " << b.dim()
        << "x" << b.dim() << ")";
    throw DimensionError(msg.str());
  }
}

}  // namespace

ComplexSquareMatrix::ComplexSquareMatrix(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("ComplexSquareMatrix: dim must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  values_ = Eigen::MatrixXcd::Zero(n, n);
}

ComplexSquareMatrix::ComplexSquareMatrix(Eigen::MatrixXcd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw DimensionError("ComplexSquareMatrix: matrix is not square");
  }
  if (values_.rows() == 0) throw InvalidArgument("ComplexSquareMatrix: dim must be positive");
  if (!values_.allFinite()) throw InvalidArgument("ComplexSquareMatrix: non-finite entry");
}

ComplexSquareMatrix::ComplexSquareMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw InvalidArgument("ComplexSquareMatrix: dim must be positive");
  values_.resize(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw DimensionError("ComplexSquareMatrix: ragged or non-square literal");
    }
    Eigen::Index j = 0;
    for (const Complex& v : row) values_(i, j++) = v;
    ++i;
  }
  if (!values_.allFinite()) throw InvalidArgument("ComplexSquareMatrix: non-finite entry");
}

ComplexSquareMatrix ComplexSquareMatrix::identity(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("ComplexSquareMatrix: dim must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexSquareMatrix(Eigen::MatrixXcd::Identity(n, n), Unchecked{});
}

ComplexSquareMatrix ComplexSquareMatrix::adjoint() const {
  return ComplexSquareMatrix(values_.adjoint(), Unchecked{});
}

ComplexSquareMatrix operator+(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
  require_same_dim(a, b, "operator+");
  return ComplexSquareMatrix(a.values_ + b.values_, ComplexSquareMatrix::Unchecked{});
}

ComplexSquareMatrix operator-(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
  require_same_dim(a, b, "operator-");
  return ComplexSquareMatrix(a.values_ - b.values_, ComplexSquareMatrix::Unchecked{});
}

ComplexSquareMatrix operator-(const ComplexSquareMatrix& a) {
  return ComplexSquareMatrix(-a.values_, ComplexSquareMatrix::Unchecked{});
}

ComplexSquareMatrix operator*(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
  require_same_dim(a, b, "operator*");
  return ComplexSquareMatrix(a.values_ * b.values_, ComplexSquareMatrix::Unchecked{});
}

ComplexSquareMatrix operator*(Complex s, const ComplexSquareMatrix& a) {
  return ComplexSquareMatrix(s * a.values_, ComplexSquareMatrix::Unchecked{});
}

Eigen::VectorXcd apply_to_state(const ComplexSquareMatrix& a, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != a.dim()) {
    throw DimensionError("apply_to_state: vector length does not match matrix dim");
  }
  return a.eigen() * v;
}

ComplexSquareMatrix commutator(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
  require_same_dim(a, b, "commutator");
  const Eigen::MatrixXcd ab = a.eigen() * b.eigen();
  const Eigen::MatrixXcd ba = b.eigen() * a.eigen();
  return ComplexSquareMatrix(Eigen::MatrixXcd(ab - ba));
}

double frobenius_norm(const ComplexSquareMatrix& a) { return a.eigen().norm(); }

double hermiticity_defect(const ComplexSquareMatrix& a) {
  return (a.eigen() - a.eigen().adjoint()).norm();
}

double antihermiticity_defect(const ComplexSquareMatrix& a) {
  return (a.eigen() + a.eigen().adjoint()).norm();
}

double unitarity_defect(const ComplexSquareMatrix& u) {
  const auto n = u.eigen().rows();
  return (u.eigen().adjoint() * u.eigen() - Eigen::MatrixXcd::Identity(n, n)).norm();
}

ComplexSquareMatrix expm_antihermitian_increment(const ComplexSquareMatrix& theta, double tol) {
  const double defect = antihermiticity_defect(theta);
  const double scale = std::max(1.0, frobenius_norm(theta));
  if (!(defect <= tol * scale)) {
    std::ostringstream msg;
    msg << "expm_antihermitian: exponent is not anti-Hermitian (||theta + theta^dagger||_F = "
        << defect << ", allowed " << tol * scale << ")";
    throw NumericalError(msg.str(), defect);
  }

  // K = i*theta, Hermitian part only.
  const Eigen::MatrixXcd k_raw = Complex(0.0, 1.0) * theta.eigen();
  const Eigen::MatrixXcd k = 0.5 * (k_raw + k_raw.adjoint());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(k);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("expm_antihermitian: Hermitian eigensolver did not converge", defect);
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXcd& v = solver.eigenvectors();

  // U = I + V (e^{-i lambda} - 1) V^dagger keeps per-step rounding
  // proportional to |lambda| rather than to 1.
  Eigen::VectorXcd phases_m1(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double half = std::sin(0.5 * lambda(i));
    phases_m1(i) = Complex(-2.0 * half * half, -std::sin(lambda(i)));
  }
  return ComplexSquareMatrix(Eigen::MatrixXcd(v * phases_m1.asDiagonal() * v.adjoint()));
}

ComplexSquareMatrix expm_antihermitian(const ComplexSquareMatrix& theta, double tol) {
  return ComplexSquareMatrix::identity(theta.dim()) + expm_antihermitian_increment(theta, tol);
}

namespace pauli {
ComplexSquareMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexSquareMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexSquareMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace magnus
