#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>

#include <Eigen/Dense>

namespace magnus {

using Complex = std::complex<double>;

/// Default relative tolerance for the anti-Hermiticity check in
/// expm_antihermitian.
inline constexpr double kDefaultExpmTolerance = 1e-10;

/// Dense dim x dim complex matrix. Immutable value type; every entry
/// is finite. Carries Hamiltonian samples, ME exponents and propagators.
class ComplexSquareMatrix {
 public:
  /// Zero matrix. Throws InvalidArgument for dim == 0.
  explicit ComplexSquareMatrix(std::size_t dim);

  /// Throws DimensionError if not square and InvalidArgument if empty
  /// or any entry is NaN/Inf.
  explicit ComplexSquareMatrix(Eigen::MatrixXcd values);

  /// Row-major literal, e.g. {{0, 1}, {1, 0}}.
  ComplexSquareMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexSquareMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  Complex operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXcd& eigen() const noexcept { return values_; }

  /// Conjugate transpose.
  ComplexSquareMatrix adjoint() const;

  friend ComplexSquareMatrix operator+(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);
  friend ComplexSquareMatrix operator-(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);
  friend ComplexSquareMatrix operator-(const ComplexSquareMatrix& a);
  friend ComplexSquareMatrix operator*(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);
  friend ComplexSquareMatrix operator*(Complex s, const ComplexSquareMatrix& a);
  friend ComplexSquareMatrix operator*(const ComplexSquareMatrix& a, Complex s) { return s * a; }
  friend ComplexSquareMatrix operator*(double s, const ComplexSquareMatrix& a) { return Complex(s) * a; }
  friend ComplexSquareMatrix operator*(const ComplexSquareMatrix& a, double s) { return Complex(s) * a; }
  friend ComplexSquareMatrix operator/(const ComplexSquareMatrix& a, double s) { return Complex(1.0 / s) * a; }

  friend bool operator==(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_ == b.values_;
  }

 private:
  struct Unchecked {};
  ComplexSquareMatrix(Eigen::MatrixXcd values, Unchecked) : values_(std::move(values)) {}

  Eigen::MatrixXcd values_;
};

/// Applies the matrix to a state vector. Throws DimensionError.
Eigen::VectorXcd apply_to_state(const ComplexSquareMatrix& a, const Eigen::VectorXcd& v);

/// ab - ba. Throws DimensionError on mismatched dims.
ComplexSquareMatrix commutator(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);

double frobenius_norm(const ComplexSquareMatrix& a);

/// ||a - a^dagger||_F.
double hermiticity_defect(const ComplexSquareMatrix& a);

/// ||a + a^dagger||_F.
double antihermiticity_defect(const ComplexSquareMatrix& a);

/// ||u^dagger u - I||_F.
double unitarity_defect(const ComplexSquareMatrix& u);

/// exp(theta) for anti-Hermitian theta via the eigendecomposition of the
/// Hermitian matrix i*theta, so the result is unitary to rounding.
///
/// Requires ||theta + theta^dagger||_F <= tol * max(1, ||theta||_F); a
/// violation throws NumericalError carrying the defect. Only the
/// anti-Hermitian part of theta is exponentiated.
ComplexSquareMatrix expm_antihermitian(const ComplexSquareMatrix& theta,
                                       double tol = kDefaultExpmTolerance);

/// exp(theta) - I, same contract as expm_antihermitian. Accurate to
/// rounding relative to ||theta|| for small exponents.
ComplexSquareMatrix expm_antihermitian_increment(const ComplexSquareMatrix& theta,
                                                 double tol = kDefaultExpmTolerance);

namespace pauli {
ComplexSquareMatrix x();
ComplexSquareMatrix y();
ComplexSquareMatrix z();
}  // namespace pauli

}  // namespace magnus
