#include <cmath>
#include <random>

#include "doctest.h"
#include "magnus/errors.hpp"
#include "magnus/magnus_steps.hpp"
#include "magnus/verify.hpp"

using namespace magnus;
using namespace magnus::verify;

namespace {

const Complex I1{0.0, 1.0};

const IdentityCheck& find(const Report& r, const std::string& name) {
  for (const IdentityCheck& c : r) {
    if (c.name == name) return c;
  }
  FAIL("missing identity " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1") {
  for (std::size_t n : {1u, 2u, 5u, 8u, 12u}) {
    const QuadratureRule q = gauss_legendre(n);
    REQUIRE(q.nodes.size() == n);
    for (std::size_t k = 1; k < n; ++k) CHECK(q.nodes[k - 1] < q.nodes[k]);
    for (std::size_t deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q.weights[k] * std::pow(q.nodes[k], deg);
      CHECK(s == doctest::Approx(1.0 / static_cast<double>(deg + 1)).epsilon(1e-14));
    }
  }
  const QuadratureRule two = gauss_legendre(2);
  CHECK(two.nodes[0] == doctest::Approx(nodes::gauss2_lower()).epsilon(1e-15));
  const QuadratureRule three = gauss_legendre(3);
  CHECK(three.nodes[2] == doctest::Approx(nodes::gauss3_upper()).epsilon(1e-15));
}

TEST_CASE("interpolant examples") {
  const ComplexSquareMatrix h0 = pauli::z(), h1 = pauli::x();
  const Interpolant lin = interpolant({h0, h1}, 1, 2.0, 0.5);
  CHECK(frobenius_norm(lin(2.25) - 0.5 * (h0 + h1)) <= 1e-15);
  CHECK(lin(2.0) == h0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto quad = [](double t) { return 1.0 - 2.0 * t + 3.0 * t * t; };
  const Interpolant q = interpolant({quad(0.0) * pauli::z(), quad(0.5) * pauli::z(), quad(1.0) * pauli::z()},
                                    2, 0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double t = u(rng);
    CHECK(frobenius_norm(q(t) - quad(t) * pauli::z()) <= 1e-14);
  }
  std::vector<ComplexSquareMatrix> cub;
  for (double f : Interpolant::node_fractions(3)) cub.push_back((f * f * f) * pauli::x());
  const Interpolant c = interpolant(cub, 3, 0.0, 1.0);
  for (double t : {0.1, 0.45, 0.8}) CHECK(frobenius_norm(c(t) - (t * t * t) * pauli::x()) <= 1e-15);

  CHECK(Interpolant::node_fractions(0) == std::vector<double>{0.5});
  CHECK(Interpolant::node_fractions(4) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(interpolant({h0}, 1, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(interpolant({h0, h1}, 5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("oracle on a linear interpolant") {
  const ComplexSquareMatrix h0 = pauli::z(), h1 = pauli::x();
  const OracleConfig cfg;
  for (double dt : {1.0, 0.3}) {
    const Interpolant lin = interpolant({h0, h1}, 1, 0.7, dt);
    const ComplexSquareMatrix m1 = (dt / 2.0) * (h0 + h1);
    const ComplexSquareMatrix m2 = (dt * dt / 6.0) * commutator(h1, h0);
    const ComplexSquareMatrix m3 = (dt * dt * dt / 40.0) * commutator(h1 - h0, commutator(h1, h0));
    CHECK(frobenius_norm(oracle_mn(lin, 1, cfg) - m1) <= 1e-15);
    CHECK(frobenius_norm(oracle_mn(lin, 2, cfg) - m2) <= 1e-15);
    CHECK(frobenius_norm(oracle_mn(lin, 3, cfg) - m3) <= 1e-15);
  }
  const Interpolant lin = interpolant({h0, h1}, 1, 0.0, 1.0);
  CHECK_THROWS_AS(oracle_mn(lin, 0, cfg), InvalidArgument);
  CHECK_THROWS_AS(oracle_mn(lin, 5, cfg), InvalidArgument);
}

TEST_CASE("scalar nested integral") {
  // volume of the time-ordered simplex is dt^n / n!
  for (std::size_t n = 1; n <= 4; ++n) {
    const double v = nested_integral(n, 0.3, 2.0, 8, [](std::span<const double>) { return 1.0; });
    CHECK(v == doctest::Approx(std::pow(2.0, n) / std::tgamma(n + 1.0)).epsilon(1e-14));
  }
  const double dt = 0.9;
  const double a = nested_integral(3, 0.0, dt, 8, [](std::span<const double> t) {
    return (t[2] - 0.0) * (t[1] - t[0]);
  });
  CHECK(a == doctest::Approx(-std::pow(dt, 5) / 120.0).epsilon(1e-14));
}

TEST_CASE("closed forms pass at dim 2 and dim 3 over 100 seeds") {
  OracleConfig cfg;
  cfg.draws = 3;
  for (std::size_t dim : {2u, 3u}) {
    cfg.dim = dim;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      cfg.seed = seed;
      const Report r = check_closed_forms(cfg);
      for (const IdentityCheck& c : r) {
        CHECK_MESSAGE(c.passed, c.name, " dim ", dim, " seed ", seed, " dev ", c.max_rel_dev);
      }
    }
  }
}

TEST_CASE("closed-form report contents") {
  OracleConfig cfg;
  cfg.draws = 5;
  const Report r = check_closed_forms(cfg);
  for (const char* name : {"m1_linear_trapezoid", "m1_quadratic_simpson", "m1_quartic_boole",
                           "m2_linear", "m2_quadratic_commutator_sum", "m2_quadratic_single_commutator",
                           "m2_quadratic_forms_agree", "m2_cubic_commutator_sum", "m2_cubic_rearranged",
                           "m3_linear", "m3_quadratic", "m4_linear_root_c", "m4_linear_alternate_root_c",
                           "m4_linear_roots_agree", "constant_interpolant_m2_vanishes",
                           "constant_interpolant_m3_vanishes", "constant_interpolant_m4_vanishes",
                           "scalar_nested_dt3_over_120", "scalar_nested_dt3_over_30",
                           "scalar_nested_minus_dt3_over_30", "scalar_nested_minus_dt3_over_120"}) {
    const IdentityCheck& c = find(r, name);
    CHECK_MESSAGE(c.passed, name);
    CHECK(c.tolerance <= 1e-11);
  }
  CHECK(find(r, "m2_quadratic_forms_agree").tolerance == 1e-13);
  CHECK(find(r, "scalar_nested_dt3_over_120").tolerance == 1e-14);
}

TEST_CASE("a misprinted closed form is detected") {
  // the first printed M2^(3) form with H_{1/3} in place of H_{2/3}
  HermitianSource src(8);
  const ComplexSquareMatrix h0 = src.next(2), ht1 = src.next(2), ht2 = src.next(2), h1 = src.next(2);
  const Interpolant cub = interpolant({h0, ht1, ht2, h1}, 3, 0.0, 1.0);
  const ComplexSquareMatrix oracle = oracle_mn(cub, 2, OracleConfig{});
  const ComplexSquareMatrix misprint =
      (1.0 / 3360.0) * (117.0 * (commutator(ht1, h0) + commutator(h1, ht2)) + 47.0 * commutator(h1, h0) +
                        144.0 * (commutator(h1, ht1) + commutator(ht1, h0)) + 729.0 * commutator(ht2, ht1));
  CHECK(frobenius_norm(closed_form::m2_cubic(h0, ht1, ht2, h1, 1.0) - oracle) <= 1e-14 * frobenius_norm(oracle));
  CHECK(frobenius_norm(misprint - oracle) > 1e-3 * frobenius_norm(oracle));
}

TEST_CASE("constant interpolant has vanishing higher integrals") {
  HermitianSource src(2);
  const Interpolant c = interpolant({src.next(3)}, 0, 0.0, 0.8);
  for (int n = 2; n <= 4; ++n) CHECK(frobenius_norm(oracle_mn(c, n, OracleConfig{})) <= 1e-15);
}

TEST_CASE("oracle integrals flip sign with the step direction") {
  HermitianSource src(13);
  const std::vector<ComplexSquareMatrix> s{src.next(2), src.next(2), src.next(2)};
  const Interpolant fwd = interpolant(s, 2, 0.1, 0.6);
  const Interpolant bwd = interpolant({s[2], s[1], s[0]}, 2, 0.7, -0.6);
  for (int n = 1; n <= 4; ++n) {
    const ComplexSquareMatrix a = oracle_mn(fwd, n, OracleConfig{});
    const ComplexSquareMatrix b = oracle_mn(bwd, n, OracleConfig{});
    CHECK(frobenius_norm(a + b) <= 1e-12 * frobenius_norm(a));
  }
}

TEST_CASE("symmetry suite passes") {
  OracleConfig cfg;
  cfg.dim = 4;
  const Report r = check_symmetry_suite(cfg, 40);
  CHECK(r.size() >= 9 * 2 + 4 + 1);
  for (const IdentityCheck& c : r) CHECK_MESSAGE(c.passed, c.name, " ", c.max_rel_dev);
  CHECK(all_passed(r));
  Report failing = r;
  failing.push_back({"synthetic", 1.0, 0.5, false});
  CHECK_FALSE(all_passed(failing));
}

TEST_CASE("Hermitian source is deterministic") {
  HermitianSource a(99), b(99);
  CHECK(a.next(3) == b.next(3));
  HermitianSource c(100);
  CHECK_FALSE(a.next(3) == c.next(3));
  CHECK(hermiticity_defect(c.next(5)) == 0.0);
}
