#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "magnus/hamiltonians.hpp"
#include "magnus/linalg.hpp"

namespace magnus {

/// Magnus-expansion step schemes.
///
///   Me2           exp(-i dt/2hbar (H_0 + H_1))
///   Me3           Simpson M1 plus the linear-interpolant M2
///   Me4Full       quadratic-interpolant M2 plus the linear M3 double commutator
///   Me4Nc         Me4Full without the double commutator
///   Me6           Boole M1, cubic M2, quadratic M3, linear M4
///   Blanes4       equal-spaced fourth-order scheme of Blanes, Casas and Ros
///   Blanes4Gauss  two-point Gauss-Legendre fourth-order scheme
///   Iserles4Gauss Blanes4Gauss plus a Gauss-node double commutator
///   Blanes6Gauss  three-point Gauss-Legendre sixth-order scheme
enum class MethodId {
  Me2,
  Me3,
  Me4Full,
  Me4Nc,
  Me6,
  Blanes4,
  Blanes4Gauss,
  Iserles4Gauss,
  Blanes6Gauss,
};

/// All nine methods, in the fixed order used by `--methods all`.
const std::array<MethodId, 9>& all_methods();

/// Kebab-case name: me2, me3, me4-full, me4-nc, me6, blanes4,
/// blanes4-gauss, iserles4-gauss, blanes6-gauss.
std::string_view method_name(MethodId method);

/// Inverse of method_name; throws InvalidArgument listing valid names.
MethodId parse_method(std::string_view name);

/// Nominal order of global accuracy (2, 4 or 6).
int nominal_order(MethodId method);

struct StepContext {
  double hbar = 1.0;
  double expm_tolerance = kDefaultExpmTolerance;
};

/// Sorted fractions of dt in [0, 1] at which the method samples H.
std::vector<double> sample_nodes(MethodId method);

/// Hamiltonian samples keyed by node fraction.
using SampleMap = std::map<double, ComplexSquareMatrix>;

/// Anti-Hermitian exponent Theta with U = exp(Theta) for one step of
/// length dt. `samples` must hold every node of sample_nodes(method)
/// (matched to 1e-12); a missing node or a non-Hermitian sample throws.
ComplexSquareMatrix exponent(MethodId method, const SampleMap& samples, double dt,
                             const StepContext& ctx = {});

/// Step propagator U(t_k + dt, t_k). dt may be negative (backward step);
/// dt == 0 throws InvalidArgument.
ComplexSquareMatrix step(MethodId method, const Sampler& sampler, double t_k, double dt,
                         const StepContext& ctx = {});

/// step(...) - I, without the rounding of adding the identity.
ComplexSquareMatrix step_increment(MethodId method, const Sampler& sampler, double t_k, double dt,
                                   const StepContext& ctx = {});

/// Constants of the Gauss-node schemes and of the ME6 fourth-order term.
namespace nodes {
/// 1/2 - sqrt(3)/6 and 1/2 + sqrt(3)/6.
double gauss2_lower();
double gauss2_upper();
/// 1/2 - sqrt(15)/10 and 1/2 + sqrt(15)/10.
double gauss3_lower();
double gauss3_upper();
}  // namespace nodes

/// -(5 - sqrt(21))/2, the root used in the linear-interpolant M4 form.
double m4_root();
/// -(5 + sqrt(21))/2, the other root of the same quadratic.
double m4_alternate_root();

/// Closed-form Magnus integrals M_n^(l) for one step. Used by the step
/// assembly and certified against quadrature in verify. Arguments are the
/// Hamiltonian samples at the named fractions of dt.
namespace closed_form {
ComplexSquareMatrix m1_trapezoid(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h1,
                                 double dt);
ComplexSquareMatrix m1_simpson(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h_half,
                               const ComplexSquareMatrix& h1, double dt);
ComplexSquareMatrix m1_boole(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h_q1,
                             const ComplexSquareMatrix& h_half, const ComplexSquareMatrix& h_q3,
                             const ComplexSquareMatrix& h1, double dt);
/// M2^(1) = dt^2/6 [H_1, H_0].
ComplexSquareMatrix m2_linear(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h1,
                              double dt);
/// M2^(2) as the three-commutator sum.
ComplexSquareMatrix m2_quadratic_sum(const ComplexSquareMatrix& h0,
                                     const ComplexSquareMatrix& h_half,
                                     const ComplexSquareMatrix& h1, double dt);
/// M2^(2) = dt^2/30 [H_0 + 4H_half, H_0 - H_1].
ComplexSquareMatrix m2_quadratic(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h_half,
                                 const ComplexSquareMatrix& h1, double dt);
/// M2^(3) as the six-commutator sum over the thirds nodes.
ComplexSquareMatrix m2_cubic(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h_t1,
                             const ComplexSquareMatrix& h_t2, const ComplexSquareMatrix& h1,
                             double dt);
/// M2^(3) in the single-commutator rearrangement plus dt^2/90 [H_1, H_0].
ComplexSquareMatrix m2_cubic_rearranged(const ComplexSquareMatrix& h0,
                                        const ComplexSquareMatrix& h_t1,
                                        const ComplexSquareMatrix& h_t2,
                                        const ComplexSquareMatrix& h1, double dt);
/// M3^(1) = dt^3/40 [H_1 - H_0, [H_1, H_0]].
ComplexSquareMatrix m3_linear(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h1,
                              double dt);
/// M3^(2), the 64/64/44/9 double-commutator sum over dt^3/2520.
ComplexSquareMatrix m3_quadratic(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h_half,
                                 const ComplexSquareMatrix& h1, double dt);
/// M4^(1) = dt^4/210 [H_0/c - H_1, [H_1 - c H_0, [H_1, H_0]]].
ComplexSquareMatrix m4_linear(const ComplexSquareMatrix& h0, const ComplexSquareMatrix& h1,
                              double dt, double c);
}  // namespace closed_form

}  // namespace magnus
