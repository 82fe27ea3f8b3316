#include "magnus/magnus_steps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magnus/errors.hpp"

namespace magnus {

namespace {

constexpr Complex kI{0.0, 1.0};

struct MethodInfo {
  MethodId id;
  std::string_view name;
  int order;
};

constexpr std::array<MethodInfo, 9> kMethods{{
    {MethodId::Me2, "me2", 2},
    {MethodId::Me3, "me3", 4},
    {MethodId::Me4Full, "me4-full", 4},
    {MethodId::Me4Nc, "me4-nc", 4},
    {MethodId::Me6, "me6", 6},
    {MethodId::Blanes4, "blanes4", 4},
    {MethodId::Blanes4Gauss, "blanes4-gauss", 4},
    {MethodId::Iserles4Gauss, "iserles4-gauss", 4},
    {MethodId::Blanes6Gauss, "blanes6-gauss", 6},
}};

const MethodInfo& info(MethodId method) {
  for (const MethodInfo& m : kMethods) {
    if (m.id == method) return m;
  }
  throw InvalidArgument("unknown MethodId");
}

}  // namespace

const std::array<MethodId, 9>& all_methods() {
  static const std::array<MethodId, 9> ids = [] {
    std::array<MethodId, 9> out{};
    for (std::size_t k = 0; k < kMethods.size(); ++k) out[k] = kMethods[k].id;
    return out;
  }();
  return ids;
}

std::string_view method_name(MethodId method) { return info(method).name; }

MethodId parse_method(std::string_view name) {
  for (const MethodInfo& m : kMethods) {
    if (m.name == name) return m.id;
  }
  std::ostringstream msg;
  msg << "unknown method '" << name << "'; valid methods:";
  for (const MethodInfo& m : kMethods) msg << ' ' << m.name;
  throw InvalidArgument(msg.str());
}

int nominal_order(MethodId method) { return info(method).order; }

namespace nodes {
double gauss2_lower() { return 0.5 - std::sqrt(3.0) / 6.0; }
double gauss2_upper() { return 0.5 + std::sqrt(3.0) / 6.0; }
double gauss3_lower() { return 0.5 - std::sqrt(15.0) / 10.0; }
double gauss3_upper() { return 0.5 + std::sqrt(15.0) / 10.0; }
}  // namespace nodes

double m4_root() { return -(5.0 - std::sqrt(21.0)) / 2.0; }
double m4_alternate_root() { return -(5.0 + std::sqrt(21.0)) / 2.0; }

std::vector<double> sample_nodes(MethodId method) {
  switch (method) {
    case MethodId::Me2:
      return {0.0, 1.0};
    case MethodId::Me3:
    case MethodId::Me4Full:
    case MethodId::Me4Nc:
    case MethodId::Blanes4:
      return {0.0, 0.5, 1.0};
    case MethodId::Me6:
      return {0.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75, 1.0};
    case MethodId::Blanes4Gauss:
    case MethodId::Iserles4Gauss:
      return {nodes::gauss2_lower(), nodes::gauss2_upper()};
    case MethodId::Blanes6Gauss:
      return {nodes::gauss3_lower(), 0.5, nodes::gauss3_upper()};
  }
  throw InvalidArgument("unknown MethodId");
}

namespace closed_form {

using M = ComplexSquareMatrix;

M m1_trapezoid(const M& h0, const M& h1, double dt) { return (0.5 * dt) * (h0 + h1); }

M m1_simpson(const M& h0, const M& h_half, const M& h1, double dt) {
  return (dt / 6.0) * (h0 + 4.0 * h_half + h1);
}

M m1_boole(const M& h0, const M& h_q1, const M& h_half, const M& h_q3, const M& h1, double dt) {
  return (dt / 90.0) * (7.0 * h0 + 32.0 * h_q1 + 12.0 * h_half + 32.0 * h_q3 + 7.0 * h1);
}

M m2_linear(const M& h0, const M& h1, double dt) {
  return (dt * dt / 6.0) * commutator(h1, h0);
}

M m2_quadratic_sum(const M& h0, const M& h_half, const M& h1, double dt) {
  return (dt * dt / 30.0) *
         (commutator(h1, h0) + 4.0 * commutator(h_half, h0) + 4.0 * commutator(h1, h_half));
}

M m2_quadratic(const M& h0, const M& h_half, const M& h1, double dt) {
  return (dt * dt / 30.0) * commutator(h0 + 4.0 * h_half, h0 - h1);
}

M m2_cubic(const M& h0, const M& h_t1, const M& h_t2, const M& h1, double dt) {
  const M sum = 117.0 * (commutator(h_t1, h0) + commutator(h1, h_t2)) +
                47.0 * commutator(h1, h0) +
                144.0 * (commutator(h1, h_t1) + commutator(h_t2, h0)) +
                729.0 * commutator(h_t2, h_t1);
  return (dt * dt / 3360.0) * sum;
}

M m2_cubic_rearranged(const M& h0, const M& h_t1, const M& h_t2, const M& h1, double dt) {
  const M left = (232.0 / 39.0) * h0 + (1152.0 / 13.0) * h_t1 + 72.0 * h_t2;
  const M right = 2.0 * h0 + (81.0 / 8.0) * h_t1 - (13.0 / 8.0) * h1;
  return (dt * dt / 3360.0) * commutator(left, right) + (dt * dt / 90.0) * commutator(h1, h0);
}

M m3_linear(const M& h0, const M& h1, double dt) {
  return (dt * dt * dt / 40.0) * commutator(h1 - h0, commutator(h1, h0));
}

M m3_quadratic(const M& h0, const M& h_half, const M& h1, double dt) {
  const M sum = 64.0 * commutator(h_half + h1, commutator(h_half, h0)) +
                64.0 * commutator(h_half + h0, commutator(h_half, h1)) +
                44.0 * (commutator(h0, commutator(h0, h_half)) +
                        commutator(h1, commutator(h1, h_half))) +
                9.0 * commutator(h1 - h0, commutator(h1, h0));
  return (dt * dt * dt / 2520.0) * sum;
}

M m4_linear(const M& h0, const M& h1, double dt, double c) {
  const double dt4 = dt * dt * dt * dt;
  return (dt4 / 210.0) * commutator((1.0 / c) * h0 - h1, commutator(h1 - c * h0, commutator(h1, h0)));
}

}  // namespace closed_form

namespace {

const ComplexSquareMatrix& at(const SampleMap& samples, double node, MethodId method) {
  auto it = samples.lower_bound(node - 1e-12);
  if (it == samples.end() || std::abs(it->first - node) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << method_name(method) << ": missing Hamiltonian sample at node " << node;
    throw InvalidArgument(msg.str());
  }
  return it->second;
}

}  // namespace

ComplexSquareMatrix exponent(MethodId method, const SampleMap& samples, double dt,
                             const StepContext& ctx) {
  using namespace closed_form;
  using M = ComplexSquareMatrix;

  const std::vector<double> required = sample_nodes(method);
  std::vector<const M*> h;
  h.reserve(required.size());
  for (double node : required) {
    const M& sample = at(samples, node, method);
    const double defect = hermiticity_defect(sample);
    if (defect > ctx.expm_tolerance * std::max(1.0, frobenius_norm(sample))) {
      std::ostringstream msg;
      msg << method_name(method) << ": Hamiltonian sample at node " << node
          << " is not Hermitian (||H - H^dagger||_F = " << defect << ")";
      throw NumericalError(msg.str(), defect);
    }
    h.push_back(&sample);
  }
  if (h.size() > 1) {
    for (const M* p : h) {
      if (p->dim() != h.front()->dim()) {
        throw DimensionError(std::string(method_name(method)) + ": samples differ in dim");
      }
    }
  }

  const double hb = ctx.hbar;
  const Complex mi = -kI / hb;  // -i/hbar

  switch (method) {
    case MethodId::Me2:
      return mi * m1_trapezoid(*h[0], *h[1], dt);

    case MethodId::Me3:
      return mi * m1_simpson(*h[0], *h[1], *h[2], dt) -
             (1.0 / (2.0 * hb * hb)) * m2_linear(*h[0], *h[2], dt);

    case MethodId::Me4Full:
    case MethodId::Me4Nc: {
      M theta = mi * m1_simpson(*h[0], *h[1], *h[2], dt) -
                (1.0 / (2.0 * hb * hb)) * m2_quadratic(*h[0], *h[1], *h[2], dt);
      if (method == MethodId::Me4Full) {
        theta = theta + (kI / (6.0 * hb * hb * hb)) * m3_linear(*h[0], *h[2], dt);
      }
      return theta;
    }

    case MethodId::Me6: {
      // nodes: 0, 1/4, 1/3, 1/2, 2/3, 3/4, 1
      const M& h0 = *h[0];
      const M& h_q1 = *h[1];
      const M& h_t1 = *h[2];
      const M& h_half = *h[3];
      const M& h_t2 = *h[4];
      const M& h_q3 = *h[5];
      const M& h1 = *h[6];
      const double hb2 = hb * hb;
      return mi * m1_boole(h0, h_q1, h_half, h_q3, h1, dt) -
             (1.0 / (2.0 * hb2)) * m2_cubic(h0, h_t1, h_t2, h1, dt) +
             (kI / (6.0 * hb2 * hb)) * m3_quadratic(h0, h_half, h1, dt) +
             (1.0 / (24.0 * hb2 * hb2)) * m4_linear(h0, h1, dt, m4_root());
    }

    case MethodId::Blanes4: {
      const M& h0 = *h[0];
      const M& h_half = *h[1];
      const M& h1 = *h[2];
      const M simpson_sum = h0 + 4.0 * h_half + h1;
      const M inner = (dt / 6.0) * simpson_sum +
                      (mi * (dt * dt / 72.0)) * commutator(h1 - h0, simpson_sum);
      return mi * inner;
    }

    case MethodId::Blanes4Gauss:
    case MethodId::Iserles4Gauss: {
      const M& g1 = *h[0];
      const M& g2 = *h[1];
      const M c21 = commutator(g2, g1);
      M inner = (0.5 * dt) * (g1 + g2) + (mi * (std::sqrt(3.0) / 12.0 * dt * dt)) * c21;
      if (method == MethodId::Iserles4Gauss) {
        inner = inner - (1.0 / (hb * hb) * dt * dt * dt / 80.0) * commutator(g2 - g1, c21);
      }
      return mi * inner;
    }

    case MethodId::Blanes6Gauss: {
      const M a1 = mi * *h[0];
      const M a2 = mi * *h[1];
      const M a3 = mi * *h[2];
      const M b0 = (5.0 / 18.0) * (a1 + a3) + (4.0 / 9.0) * a2;
      const M b1 = (std::sqrt(15.0) / 36.0) * (a3 - a1);
      const M b2 = (1.0 / 24.0) * (a1 + a3);
      const M m1 = dt * b0;
      const M m2 = (dt * dt) * commutator(b1, 3.0 * b0 - 12.0 * b2);
      const M m34 = (0.3 * dt) * commutator(b1, m2) +
                    (dt * dt) * commutator(b0, commutator(b0, (0.5 * dt) * b2 - m2 / 120.0));
      return m1 + 0.5 * m2 + m34;
    }
  }
  throw InvalidArgument("unknown MethodId");
}

namespace {

ComplexSquareMatrix step_exponent(MethodId method, const Sampler& sampler, double t_k, double dt,
                                  const StepContext& ctx) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("step: dt must be finite and nonzero");
  if (!(ctx.hbar > 0.0)) throw InvalidArgument("step: hbar must be positive");
  SampleMap samples;
  for (double node : sample_nodes(method)) {
    samples.emplace(node, sampler(t_k + node * dt));
  }
  return exponent(method, samples, dt, ctx);
}

}  // namespace

ComplexSquareMatrix step(MethodId method, const Sampler& sampler, double t_k, double dt,
                         const StepContext& ctx) {
  return expm_antihermitian(step_exponent(method, sampler, t_k, dt, ctx), ctx.expm_tolerance);
}

ComplexSquareMatrix step_increment(MethodId method, const Sampler& sampler, double t_k, double dt,
                                   const StepContext& ctx) {
  return expm_antihermitian_increment(step_exponent(method, sampler, t_k, dt, ctx),
                                      ctx.expm_tolerance);
}

}  // namespace magnus
