#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "magnus/hamiltonians.hpp"
#include "magnus/linalg.hpp"
#include "magnus/magnus_steps.hpp"

namespace magnus {

struct EvolutionTrace {
  std::vector<double> times;
  ComplexSquareMatrix final_propagator{1};
  /// populations[k][n] = |<n|U(t_k, t0)|psi0>|^2, not renormalized.
  std::vector<std::vector<double>> populations;
  /// ||U^dagger U - I||_F of the accumulated propagator at each time.
  std::vector<double> unitarity_defects;
};

/// Accumulates U(t_{k+1}) = U_step(t_{k+1}, t_k) U(t_k) from U(t0) = I over
/// n_steps uniform steps and records populations of initial_state at every
/// grid point (n_steps + 1 entries, including t0).
///
/// Requires tf > t0, n_steps > 0 and a unit-norm initial state (1e-12).
EvolutionTrace propagate(MethodId method, const Sampler& sampler, double t0, double tf,
                         std::size_t n_steps, const Eigen::VectorXcd& initial_state,
                         const StepContext& ctx = {});

EvolutionTrace propagate(MethodId method, const HamiltonianModel& model, double t0, double tf,
                         std::size_t n_steps, const Eigen::VectorXcd& initial_state,
                         const StepContext& ctx = {});

/// Final accumulated propagator only; no per-step bookkeeping.
ComplexSquareMatrix propagator(MethodId method, const Sampler& sampler, double t0, double tf,
                               std::size_t n_steps, const StepContext& ctx = {});

/// Basis vector |index> of length dim.
Eigen::VectorXcd basis_state(std::size_t dim, std::size_t index);

/// ||approx - ref||_F / ||ref||_F. Zero reference norm throws NumericalError.
double relative_error(const ComplexSquareMatrix& approx, const ComplexSquareMatrix& ref);

/// Integer step count for a nominal step size. Accepts dt when t_length/dt
/// is an integer to 1e-9 relative, or when dt is one of the rounded step
/// labels of the standard ladder at t_length = 100. Throws NumericalError
/// otherwise.
std::size_t resolve_step_count(double t_length, double dt);

/// The standard six-rung ladder as step counts {16384, ..., 512}.
const std::vector<std::size_t>& standard_ladder_steps();

/// Printed labels of the ladder rungs: 0.00610 ... 0.19569 at t_f = 100.
const std::vector<double>& standard_ladder_labels();

struct ConvergenceRecord {
  MethodId method;
  double dt;
  std::size_t n_steps;
  double error;
};

struct ReferenceSpec {
  MethodId method = MethodId::Me6;
  /// Reference step count; 0 means 8x the finest ladder rung.
  std::size_t n_steps = 0;
  /// Independent reference that must agree before the reference is used.
  std::optional<MethodId> cross_check = MethodId::Blanes6Gauss;
  double cross_check_tolerance = 1e-8;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;
  /// Fitted log-log slope per method, in the order the methods were given.
  std::vector<std::pair<MethodId, double>> slopes;
  ComplexSquareMatrix reference{1};
  std::size_t reference_steps = 0;
  /// relative_error(cross-check reference, reference); NaN if disabled.
  double reference_cross_deviation = 0.0;

  std::vector<ConvergenceRecord> records_for(MethodId method) const;
  double slope(MethodId method) const;
};

/// Propagates every (method, rung) pair over [t0, t0 + t_length] and
/// measures relative_error against the reference propagator. A failed
/// reference cross-check throws NumericalError. The step_counts ladder
/// defaults to standard_ladder_steps().
ConvergenceReport convergence_study(const Sampler& sampler, std::span<const MethodId> methods,
                                    std::span<const std::size_t> step_counts, double t0,
                                    double t_length, const ReferenceSpec& reference = {},
                                    const StepContext& ctx = {});

/// Least-squares slope of ln(error) on ln(dt). Records whose error is
/// below 100 * eps * reference_norm are excluded as rounding-saturated.
/// Fewer than two usable records throws InvalidArgument.
double fit_order(std::span<const ConvergenceRecord> records, double reference_norm);

}  // namespace magnus
