#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "magnus/linalg.hpp"

namespace magnus::verify {

/// n-point Gauss-Legendre rule mapped to [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(std::size_t n);

/// Lagrange interpolating matrix polynomial of degree 0..4 through
/// samples at equally spaced fractions k/degree of [t_k, t_k + dt].
/// Degree 0 takes a single sample and is constant.
class Interpolant {
 public:
  Interpolant(std::vector<ComplexSquareMatrix> samples, int degree, double t_k, double dt);

  ComplexSquareMatrix operator()(double t) const;

  int degree() const noexcept { return degree_; }
  double t_k() const noexcept { return t_k_; }
  double dt() const noexcept { return dt_; }
  std::size_t dim() const noexcept { return samples_.front().dim(); }

  /// Node fractions for a given degree: {1/2} for degree 0, else k/degree.
  static std::vector<double> node_fractions(int degree);

 private:
  std::vector<ComplexSquareMatrix> samples_;
  std::vector<double> nodes_;
  int degree_;
  double t_k_;
  double dt_;
};

Interpolant interpolant(std::vector<ComplexSquareMatrix> samples, int degree, double t_k, double dt);

struct OracleConfig {
  std::size_t gl_points_per_axis = 8;
  std::uint64_t seed = 42;
  std::size_t dim = 2;
  double dt = 1.0;
  /// Random Hermitian draws per identity in check_closed_forms.
  std::size_t draws = 100;
};

/// Integral over the time-ordered simplex t_k + dt >= tau_1 >= ... >= tau_n
/// >= t_k (orientation follows the sign of dt). f receives the ordered
/// times; each inner range [t_k, tau] is mapped onto a fixed reference
/// interval so the rule is an n-fold tensor Gauss-Legendre rule.
double nested_integral(std::size_t n, double t_k, double dt, std::size_t gl_points,
                       const std::function<double(std::span<const double>)>& f);

ComplexSquareMatrix nested_integral(
    std::size_t n, double t_k, double dt, std::size_t gl_points,
    const std::function<ComplexSquareMatrix(std::span<const ComplexSquareMatrix>)>& integrand,
    const std::function<ComplexSquareMatrix(double)>& h);

/// The exact n-th Magnus integral M_n (n = 1..4, M_4 with its prefactor 2)
/// of the interpolant over its own step.
ComplexSquareMatrix oracle_mn(const Interpolant& h, int n, const OracleConfig& cfg);

/// Hermitian (B + B^dagger)/2 with B uniform in the complex unit square.
class HermitianSource {
 public:
  explicit HermitianSource(std::uint64_t seed);
  ComplexSquareMatrix next(std::size_t dim);

 private:
  std::mt19937_64 engine_;
  double uniform();  // in [-1, 1)
};

struct IdentityCheck {
  std::string name;
  double max_rel_dev = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

using Report = std::vector<IdentityCheck>;

bool all_passed(const Report& report);

/// Every closed-form M_n^(l) against oracle_mn over cfg.draws random
/// Hermitian draws, both printed M2^(2) and M2^(3) forms, both roots of
/// the M4^(1) form, the scalar nested integrals of the linear-interpolant
/// M3 derivation and the vanishing of M2..M4 for a constant interpolant.
Report check_closed_forms(const OracleConfig& cfg);

/// Unitarity and backward-adjoint properties of every step method over
/// `draws` random smooth Hamiltonians (dims 2..cfg.dim), the dt sign flip
/// of oracle_mn for n = 1..4 and the constant-H backward*forward identity.
Report check_symmetry_suite(const OracleConfig& cfg, std::size_t draws = 200);

}  // namespace magnus::verify
