#include "magnus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "magnus/errors.hpp"
#include "magnus/magnus_steps.hpp"

namespace magnus::verify {

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidArgument("gauss_legendre: need at least one point");
  if (n == 1) return {{0.5}, {1.0}};
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] -> [0, 1], ascending order.
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

std::vector<double> Interpolant::node_fractions(int degree) {
  if (degree < 0 || degree > 4) throw InvalidArgument("interpolant: degree must be in 0..4");
  if (degree == 0) return {0.5};
  std::vector<double> f;
  for (int k = 0; k <= degree; ++k) f.push_back(static_cast<double>(k) / degree);
  return f;
}

Interpolant::Interpolant(std::vector<ComplexSquareMatrix> samples, int degree, double t_k, double dt)
    : samples_(std::move(samples)), nodes_(node_fractions(degree)), degree_(degree), t_k_(t_k), dt_(dt) {
  if (samples_.size() != nodes_.size()) {
    std::ostringstream msg;
    msg << "interpolant: degree " << degree << " needs " << nodes_.size() << " samples, got "
        << samples_.size();
    throw InvalidArgument(msg.str());
  }
  if (dt_ == 0.0) throw InvalidArgument("interpolant: dt must be nonzero");
  for (const auto& s : samples_) {
    if (s.dim() != samples_.front().dim()) throw DimensionError("interpolant: samples differ in dim");
  }
}

ComplexSquareMatrix Interpolant::operator()(double t) const {
  const double x = (t - t_k_) / dt_;
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    double l = 1.0;
    for (std::size_t b = 0; b < nodes_.size(); ++b) {
      if (b != a) l *= (x - nodes_[b]) / (nodes_[a] - nodes_[b]);
    }
    out += l * samples_[a].eigen();
  }
  return ComplexSquareMatrix(std::move(out));
}

Interpolant interpolant(std::vector<ComplexSquareMatrix> samples, int degree, double t_k, double dt) {
  return Interpolant(std::move(samples), degree, t_k, dt);
}

namespace {

template <typename Leaf>
void simplex_recurse(std::size_t level, std::size_t n, double t_k, double span, double weight,
                     const QuadratureRule& rule, std::vector<double>& taus, Leaf&& leaf) {
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = rule.nodes[q];
    taus[level] = t_k + span * x;
    const double w = weight * rule.weights[q] * span;
    if (level + 1 == n) {
      leaf(taus, w);
    } else {
      simplex_recurse(level + 1, n, t_k, span * x, w, rule, taus, leaf);
    }
  }
}

}  // namespace

double nested_integral(std::size_t n, double t_k, double dt, std::size_t gl_points,
                       const std::function<double(std::span<const double>)>& f) {
  if (n == 0) throw InvalidArgument("nested_integral: order must be positive");
  const QuadratureRule rule = gauss_legendre(gl_points);
  std::vector<double> taus(n);
  double sum = 0.0;
  simplex_recurse(0, n, t_k, dt, 1.0, rule, taus,
                  [&](const std::vector<double>& t, double w) { sum += w * f(t); });
  return sum;
}

ComplexSquareMatrix nested_integral(
    std::size_t n, double t_k, double dt, std::size_t gl_points,
    const std::function<ComplexSquareMatrix(std::span<const ComplexSquareMatrix>)>& integrand,
    const std::function<ComplexSquareMatrix(double)>& h) {
  if (n == 0) throw InvalidArgument("nested_integral: order must be positive");
  const QuadratureRule rule = gauss_legendre(gl_points);
  const ComplexSquareMatrix probe = h(t_k);
  const auto d = static_cast<Eigen::Index>(probe.dim());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  std::vector<double> taus(n);
  std::vector<ComplexSquareMatrix> values(n, probe);
  simplex_recurse(0, n, t_k, dt, 1.0, rule, taus, [&](const std::vector<double>& t, double w) {
    for (std::size_t j = 0; j < n; ++j) values[j] = h(t[j]);
    sum += w * integrand(values).eigen();
  });
  return ComplexSquareMatrix(std::move(sum));
}

ComplexSquareMatrix oracle_mn(const Interpolant& h, int n, const OracleConfig& cfg) {
  using M = ComplexSquareMatrix;
  std::function<M(std::span<const M>)> integrand;
  switch (n) {
    case 1:
      integrand = [](std::span<const M> a) { return a[0]; };
      break;
    case 2:
      integrand = [](std::span<const M> a) { return commutator(a[0], a[1]); };
      break;
    case 3:
      integrand = [](std::span<const M> a) {
        return commutator(a[0], commutator(a[1], a[2])) + commutator(commutator(a[0], a[1]), a[2]);
      };
      break;
    case 4:
      integrand = [](std::span<const M> a) {
        const M sum = commutator(commutator(commutator(a[0], a[1]), a[2]), a[3]) +
                      commutator(a[0], commutator(commutator(a[1], a[2]), a[3])) +
                      commutator(a[0], commutator(a[1], commutator(a[2], a[3]))) +
                      commutator(a[1], commutator(a[2], commutator(a[3], a[0])));
        return 2.0 * sum;
      };
      break;
    default:
      throw InvalidArgument("oracle_mn: n must be in 1..4");
  }
  return nested_integral(static_cast<std::size_t>(n), h.t_k(), h.dt(), cfg.gl_points_per_axis,
                         integrand, [&h](double t) { return h(t); });
}

HermitianSource::HermitianSource(std::uint64_t seed) : engine_(seed) {}

double HermitianSource::uniform() {
  // 53 random bits, portable across standard libraries.
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

ComplexSquareMatrix HermitianSource::next(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = uniform();
      const double im = uniform();
      b(i, j) = Complex(re, im);
    }
  }
  return ComplexSquareMatrix(Eigen::MatrixXcd(0.5 * (b + b.adjoint())));
}

bool all_passed(const Report& report) {
  return std::all_of(report.begin(), report.end(), [](const IdentityCheck& c) { return c.passed; });
}

namespace {

double rel_dev(const ComplexSquareMatrix& value, const ComplexSquareMatrix& reference) {
  const double ref = frobenius_norm(reference);
  const double diff = frobenius_norm(value - reference);
  return ref > 0.0 ? diff / ref : diff;
}

class ReportBuilder {
 public:
  void add(const std::string& name, double tolerance) {
    report_.push_back({name, 0.0, tolerance, true});
  }
  void record(std::size_t slot, double deviation) {
    IdentityCheck& c = report_[slot];
    if (std::isnan(deviation) || deviation > c.max_rel_dev) c.max_rel_dev = deviation;
  }
  Report finish() {
    for (IdentityCheck& c : report_) c.passed = c.max_rel_dev <= c.tolerance;
    return std::move(report_);
  }

 private:
  Report report_;
};

}  // namespace

Report check_closed_forms(const OracleConfig& cfg) {
  using namespace magnus::closed_form;
  constexpr double kTol = 1e-11;
  const double dt = cfg.dt;
  const double t_k = 0.0;

  enum Slot : std::size_t {
    kM1Trapezoid,
    kM1Simpson,
    kM1Boole,
    kM2Linear,
    kM2QuadSum,
    kM2QuadSingle,
    kM2QuadForms,
    kM2CubicSum,
    kM2CubicRearranged,
    kM3Linear,
    kM3Quadratic,
    kM4Root,
    kM4AltRoot,
    kM4Roots,
    kConstM2,
    kConstM3,
    kConstM4,
    kScalar1,
    kScalar2,
    kScalar3,
    kScalar4,
  };
  ReportBuilder b;
  b.add("m1_linear_trapezoid", kTol);
  b.add("m1_quadratic_simpson", kTol);
  b.add("m1_quartic_boole", kTol);
  b.add("m2_linear", kTol);
  b.add("m2_quadratic_commutator_sum", kTol);
  b.add("m2_quadratic_single_commutator", kTol);
  b.add("m2_quadratic_forms_agree", 1e-13);
  b.add("m2_cubic_commutator_sum", kTol);
  b.add("m2_cubic_rearranged", kTol);
  b.add("m3_linear", kTol);
  b.add("m3_quadratic", kTol);
  b.add("m4_linear_root_c", kTol);
  b.add("m4_linear_alternate_root_c", kTol);
  b.add("m4_linear_roots_agree", 1e-12);
  b.add("constant_interpolant_m2_vanishes", 1e-14);
  b.add("constant_interpolant_m3_vanishes", 1e-14);
  b.add("constant_interpolant_m4_vanishes", 1e-14);
  b.add("scalar_nested_dt3_over_120", 1e-14);
  b.add("scalar_nested_dt3_over_30", 1e-14);
  b.add("scalar_nested_minus_dt3_over_30", 1e-14);
  b.add("scalar_nested_minus_dt3_over_120", 1e-14);

  HermitianSource source(cfg.seed);
  const std::size_t draws = std::max<std::size_t>(cfg.draws, 1);
  for (std::size_t draw = 0; draw < draws; ++draw) {
    const std::size_t d = cfg.dim;
    const auto h0 = source.next(d);
    const auto h_q1 = source.next(d);
    const auto h_t1 = source.next(d);
    const auto h_half = source.next(d);
    const auto h_t2 = source.next(d);
    const auto h_q3 = source.next(d);
    const auto h1 = source.next(d);

    const Interpolant lin({h0, h1}, 1, t_k, dt);
    const Interpolant quad({h0, h_half, h1}, 2, t_k, dt);
    const Interpolant cubic({h0, h_t1, h_t2, h1}, 3, t_k, dt);
    const Interpolant quartic({h0, h_q1, h_half, h_q3, h1}, 4, t_k, dt);

    b.record(kM1Trapezoid, rel_dev(m1_trapezoid(h0, h1, dt), oracle_mn(lin, 1, cfg)));
    b.record(kM1Simpson, rel_dev(m1_simpson(h0, h_half, h1, dt), oracle_mn(quad, 1, cfg)));
    b.record(kM1Boole,
             rel_dev(m1_boole(h0, h_q1, h_half, h_q3, h1, dt), oracle_mn(quartic, 1, cfg)));

    b.record(kM2Linear, rel_dev(m2_linear(h0, h1, dt), oracle_mn(lin, 2, cfg)));
    const auto m22 = oracle_mn(quad, 2, cfg);
    const auto m22_sum = m2_quadratic_sum(h0, h_half, h1, dt);
    const auto m22_single = m2_quadratic(h0, h_half, h1, dt);
    b.record(kM2QuadSum, rel_dev(m22_sum, m22));
    b.record(kM2QuadSingle, rel_dev(m22_single, m22));
    b.record(kM2QuadForms, rel_dev(m22_sum, m22_single));
    const auto m23 = oracle_mn(cubic, 2, cfg);
    b.record(kM2CubicSum, rel_dev(m2_cubic(h0, h_t1, h_t2, h1, dt), m23));
    b.record(kM2CubicRearranged, rel_dev(m2_cubic_rearranged(h0, h_t1, h_t2, h1, dt), m23));

    b.record(kM3Linear, rel_dev(m3_linear(h0, h1, dt), oracle_mn(lin, 3, cfg)));
    b.record(kM3Quadratic, rel_dev(m3_quadratic(h0, h_half, h1, dt), oracle_mn(quad, 3, cfg)));

    const auto m41 = oracle_mn(lin, 4, cfg);
    const auto m4c = m4_linear(h0, h1, dt, m4_root());
    const auto m4c_alt = m4_linear(h0, h1, dt, m4_alternate_root());
    b.record(kM4Root, rel_dev(m4c, m41));
    b.record(kM4AltRoot, rel_dev(m4c_alt, m41));
    b.record(kM4Roots, rel_dev(m4c, m4c_alt));

    // Vanishing commutator integrals, normalized by the natural scale |H|^n |dt|^n.
    const Interpolant constant({h_half}, 0, t_k, dt);
    const double hn = frobenius_norm(h_half);
    const double adt = std::abs(dt);
    b.record(kConstM2, frobenius_norm(oracle_mn(constant, 2, cfg)) / std::pow(hn * adt, 2));
    b.record(kConstM3, frobenius_norm(oracle_mn(constant, 3, cfg)) / std::pow(hn * adt, 3));
    b.record(kConstM4, frobenius_norm(oracle_mn(constant, 4, cfg)) / std::pow(hn * adt, 4));
  }

  // Scalar weights of the linear-interpolant M3 integrand; times are
  // ordered tau >= tau' >= tau''.
  const double t_end = t_k + dt;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const std::size_t pts = cfg.gl_points_per_axis;
  auto scalar_check = [&](std::size_t slot, double expected,
                          const std::function<double(double, double, double)>& f) {
    const double got = nested_integral(3, t_k, dt, pts, [&](std::span<const double> t) {
      return f(t[0], t[1], t[2]) / dt2;
    });
    b.record(slot, std::abs(got - expected) / std::abs(expected));
  };
  scalar_check(kScalar1, dt3 / 120.0, [&](double a, double s, double u) { return (t_end - a) * (s - u); });
  scalar_check(kScalar2, dt3 / 30.0, [&](double a, double s, double u) { return (a - t_k) * (s - u); });
  scalar_check(kScalar3, -dt3 / 30.0, [&](double a, double s, double u) { return (t_end - u) * (s - a); });
  scalar_check(kScalar4, -dt3 / 120.0, [&](double a, double s, double u) { return (u - t_k) * (s - a); });

  return b.finish();
}

Report check_symmetry_suite(const OracleConfig& cfg, std::size_t draws) {
  using M = ComplexSquareMatrix;
  const auto& methods = all_methods();
  ReportBuilder b;
  for (MethodId m : methods) b.add("unitarity_" + std::string(method_name(m)), 1e-12);
  for (MethodId m : methods) b.add("backward_adjoint_" + std::string(method_name(m)), 1e-12);
  for (int n = 1; n <= 4; ++n) b.add("oracle_sign_flip_m" + std::to_string(n), 1e-12);
  b.add("constant_backward_forward_identity", 1e-14);
  const std::size_t kFlip = 2 * methods.size();
  const std::size_t kConst = kFlip + 4;

  HermitianSource source(cfg.seed);
  std::mt19937_64 times(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> t_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> dt_dist(0.05, 1.0);
  const std::size_t max_dim = std::max<std::size_t>(cfg.dim, 2);

  for (std::size_t draw = 0; draw < draws; ++draw) {
    const std::size_t d = 2 + draw % (max_dim - 1);
    const M a = source.next(d);
    const M bb = source.next(d);
    const M c = source.next(d);
    const Sampler h = [a, bb, c](double t) {
      return a + std::sin(1.3 * t) * bb + std::cos(0.7 * t) * c;
    };
    const double t_k = t_dist(times);
    const double dt = dt_dist(times);

    for (std::size_t k = 0; k < methods.size(); ++k) {
      const M forward = step(methods[k], h, t_k, dt);
      const M backward = step(methods[k], h, t_k + dt, -dt);
      b.record(k, unitarity_defect(forward));
      b.record(methods.size() + k, frobenius_norm(backward - forward.adjoint()));
    }

    // Same quadratic on [t_k, t_k + dt], traversed from the other end.
    const M s0 = source.next(d), s1 = source.next(d), s2 = source.next(d);
    const Interpolant fwd({s0, s1, s2}, 2, t_k, dt);
    const Interpolant bwd({s2, s1, s0}, 2, t_k + dt, -dt);
    for (int n = 1; n <= 4; ++n) {
      const M mf = oracle_mn(fwd, n, cfg);
      const M mb = oracle_mn(bwd, n, cfg);
      b.record(kFlip + static_cast<std::size_t>(n - 1), rel_dev(-mb, mf));
    }

    const Sampler constant = [a](double) { return a; };
    for (MethodId m : methods) {
      const M product = step(m, constant, t_k + dt, -dt) * step(m, constant, t_k, dt);
      b.record(kConst, frobenius_norm(product - M::identity(d)));
    }
  }
  return b.finish();
}

}  // namespace magnus::verify
