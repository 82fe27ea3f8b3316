#include "magnus/evolution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "magnus/errors.hpp"

namespace magnus {

namespace {

void check_interval(double t0, double tf, std::size_t n_steps) {
  if (!(tf > t0)) throw InvalidArgument("propagate: requires tf > t0");
  if (n_steps == 0) throw InvalidArgument("propagate: n_steps must be positive");
}

// Extended-precision accumulator for the propagator product.
using WideMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

WideMatrix wide_identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return WideMatrix::Identity(n, n);
}

// u <- (I + delta) u
void accumulate(WideMatrix& u, const ComplexSquareMatrix& delta) {
  if (static_cast<Eigen::Index>(delta.dim()) != u.rows()) {
    throw DimensionError("propagate: initial state does not match H dim");
  }
  u += delta.eigen().cast<std::complex<long double>>() * u;
}

ComplexSquareMatrix narrow(const WideMatrix& u) {
  return ComplexSquareMatrix(Eigen::MatrixXcd(u.cast<Complex>()));
}

std::vector<double> populations_of(const Eigen::VectorXcd& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index n = 0; n < psi.size(); ++n) p[static_cast<std::size_t>(n)] = std::norm(psi(n));
  return p;
}

}  // namespace

EvolutionTrace propagate(MethodId method, const Sampler& sampler, double t0, double tf,
                         std::size_t n_steps, const Eigen::VectorXcd& initial_state,
                         const StepContext& ctx) {
  check_interval(t0, tf, n_steps);
  const double norm_defect = std::abs(initial_state.norm() - 1.0);
  if (!(norm_defect <= 1e-12)) {
    throw NumericalError("propagate: initial state is not normalized", norm_defect);
  }

  const double dt = (tf - t0) / static_cast<double>(n_steps);
  WideMatrix wide = wide_identity(static_cast<std::size_t>(initial_state.size()));

  EvolutionTrace trace;
  trace.times.reserve(n_steps + 1);
  trace.populations.reserve(n_steps + 1);
  trace.unitarity_defects.reserve(n_steps + 1);
  trace.times.push_back(t0);
  trace.populations.push_back(populations_of(initial_state));
  trace.unitarity_defects.push_back(0.0);

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_k = t0 + static_cast<double>(k) * dt;
    accumulate(wide, step_increment(method, sampler, t_k, dt, ctx));
    const ComplexSquareMatrix u = narrow(wide);
    trace.times.push_back(k + 1 == n_steps ? tf : t0 + static_cast<double>(k + 1) * dt);
    trace.populations.push_back(populations_of(apply_to_state(u, initial_state)));
    trace.unitarity_defects.push_back(unitarity_defect(u));
  }
  trace.final_propagator = narrow(wide);
  return trace;
}

EvolutionTrace propagate(MethodId method, const HamiltonianModel& model, double t0, double tf,
                         std::size_t n_steps, const Eigen::VectorXcd& initial_state,
                         const StepContext& ctx) {
  return propagate(method, model.sampler(), t0, tf, n_steps, initial_state, ctx);
}

ComplexSquareMatrix propagator(MethodId method, const Sampler& sampler, double t0, double tf,
                               std::size_t n_steps, const StepContext& ctx) {
  check_interval(t0, tf, n_steps);
  const double dt = (tf - t0) / static_cast<double>(n_steps);
  const ComplexSquareMatrix first = step_increment(method, sampler, t0, dt, ctx);
  WideMatrix wide = wide_identity(first.dim());
  accumulate(wide, first);
  for (std::size_t k = 1; k < n_steps; ++k) {
    accumulate(wide, step_increment(method, sampler, t0 + static_cast<double>(k) * dt, dt, ctx));
  }
  return narrow(wide);
}

Eigen::VectorXcd basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("basis_state: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

double relative_error(const ComplexSquareMatrix& approx, const ComplexSquareMatrix& ref) {
  if (approx.dim() != ref.dim()) throw DimensionError("relative_error: dims differ");
  const double ref_norm = frobenius_norm(ref);
  if (ref_norm == 0.0) throw NumericalError("relative_error: reference has zero norm", 0.0);
  return frobenius_norm(approx - ref) / ref_norm;
}

const std::vector<std::size_t>& standard_ladder_steps() {
  static const std::vector<std::size_t> steps{16384, 8192, 4096, 2048, 1024, 512};
  return steps;
}

const std::vector<double>& standard_ladder_labels() {
  static const std::vector<double> labels{0.00610, 0.01221, 0.02442, 0.04885, 0.09775, 0.19569};
  return labels;
}

std::size_t resolve_step_count(double t_length, double dt) {
  if (!(dt > 0.0) || !(t_length > 0.0)) {
    throw InvalidArgument("resolve_step_count: dt and interval length must be positive");
  }
  const double ratio = t_length / dt;
  const double n = std::round(ratio);
  if (n >= 1.0 && std::abs(n * dt - t_length) <= 1e-9 * t_length) {
    return static_cast<std::size_t>(n);
  }
  if (std::abs(t_length - 100.0) <= 1e-12) {
    const auto& labels = standard_ladder_labels();
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (std::abs(dt - labels[k]) <= 1e-12) return standard_ladder_steps()[k];
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "dt = " << dt << " does not divide the interval " << t_length
      << " into an integer number of steps";
  throw NumericalError(msg.str(), std::abs(ratio - n));
}

std::vector<ConvergenceRecord> ConvergenceReport::records_for(MethodId method) const {
  std::vector<ConvergenceRecord> out;
  for (const ConvergenceRecord& r : records) {
    if (r.method == method) out.push_back(r);
  }
  return out;
}

double ConvergenceReport::slope(MethodId method) const {
  for (const auto& [m, s] : slopes) {
    if (m == method) return s;
  }
  throw InvalidArgument("ConvergenceReport: no slope for " + std::string(method_name(method)));
}

ConvergenceReport convergence_study(const Sampler& sampler, std::span<const MethodId> methods,
                                    std::span<const std::size_t> step_counts, double t0,
                                    double t_length, const ReferenceSpec& reference,
                                    const StepContext& ctx) {
  if (!(t_length > 0.0)) throw InvalidArgument("convergence_study: interval length must be positive");
  std::vector<std::size_t> ladder(step_counts.begin(), step_counts.end());
  if (ladder.empty()) ladder = standard_ladder_steps();
  for (std::size_t n : ladder) {
    if (n == 0) throw InvalidArgument("convergence_study: step counts must be positive");
  }

  ConvergenceReport report;
  std::size_t finest = 0;
  for (std::size_t n : ladder) finest = std::max(finest, n);
  report.reference_steps = reference.n_steps != 0 ? reference.n_steps : 8 * finest;

  const double tf = t0 + t_length;
  report.reference = propagator(reference.method, sampler, t0, tf, report.reference_steps, ctx);
  report.reference_cross_deviation = std::numeric_limits<double>::quiet_NaN();
  if (reference.cross_check) {
    const ComplexSquareMatrix check =
        propagator(*reference.cross_check, sampler, t0, tf, report.reference_steps, ctx);
    report.reference_cross_deviation = relative_error(check, report.reference);
    if (!(report.reference_cross_deviation <= reference.cross_check_tolerance)) {
      std::ostringstream msg;
      msg << "convergence_study: reference " << method_name(reference.method) << " and cross-check "
          << method_name(*reference.cross_check) << " disagree (relative deviation "
          << report.reference_cross_deviation << " > " << reference.cross_check_tolerance << ")";
      throw NumericalError(msg.str(), report.reference_cross_deviation);
    }
  }

  const double ref_norm = frobenius_norm(report.reference);
  for (MethodId method : methods) {
    std::vector<ConvergenceRecord> own;
    for (std::size_t n : ladder) {
      const ComplexSquareMatrix u = propagator(method, sampler, t0, tf, n, ctx);
      own.push_back({method, t_length / static_cast<double>(n), n, relative_error(u, report.reference)});
    }
    report.slopes.emplace_back(method, fit_order(own, ref_norm));
    report.records.insert(report.records.end(), own.begin(), own.end());
  }
  return report;
}

double fit_order(std::span<const ConvergenceRecord> records, double reference_norm) {
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * reference_norm;
  std::vector<double> x, y;
  for (const ConvergenceRecord& r : records) {
    if (r.error > floor && r.error > 0.0 && r.dt > 0.0) {
      x.push_back(std::log(r.dt));
      y.push_back(std::log(r.error));
    }
  }
  if (x.size() < 2) throw InvalidArgument("fit_order: fewer than two records above the rounding floor");

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_order: records share a single step size");
  return sxy / sxx;
}

}  // namespace magnus
