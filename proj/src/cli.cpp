#include "magnus/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "magnus/errors.hpp"
#include "magnus/evolution.hpp"
#include "magnus/hamiltonians.hpp"
#include "magnus/magnus_steps.hpp"
#include "magnus/verify.hpp"

namespace magnus::cli {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

struct ModelSource {
  std::string case_id;
  std::string model_path;
};

struct Options {
  ModelSource source;
  std::string method = "me4-nc";
  std::vector<std::string> methods;
  std::vector<double> dts;
  std::vector<std::size_t> steps;
  double t_final = 100.0;
  double t0 = 0.0;
  std::size_t initial = 0;
  std::string out = "-";
  double hbar = 1.0;
  double expm_tol = kDefaultExpmTolerance;
  std::size_t ref_steps = 0;
  bool no_cross_check = false;
  double cross_check_tol = 1e-8;
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::size_t dim = 2;
  double verify_dt = 1.0;
  std::size_t draws = 100;
  std::size_t symmetry_draws = 200;
  std::size_t gl_points = 8;
};

void add_model_flags(CLI::App* cmd, Options& o) {
  auto* c = cmd->add_option("--case", o.source.case_id, "Builtin two-state case: I, II, III or IV");
  auto* m = cmd->add_option("--model", o.source.model_path, "JSON model file");
  c->excludes(m);
  m->excludes(c);
}

void add_physics_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--hbar", o.hbar, "Reduced Planck constant")->check(CLI::PositiveNumber);
  cmd->add_option("--expm-tol", o.expm_tol, "Relative anti-Hermiticity tolerance of the exponent");
}

HamiltonianModel resolve_model(const ModelSource& s) {
  if (s.case_id.empty() == s.model_path.empty()) {
    throw InvalidArgument("exactly one of --case or --model is required");
  }
  if (!s.case_id.empty()) return builtin_case(s.case_id);
  return load_model_file(s.model_path);
}

std::vector<MethodId> resolve_methods(const std::vector<std::string>& names) {
  std::vector<MethodId> out;
  for (const std::string& raw : names) {
    std::stringstream list(raw);
    std::string name;
    while (std::getline(list, name, ',')) {
      if (name.empty()) continue;
      if (name == "all") {
        out.insert(out.end(), all_methods().begin(), all_methods().end());
      } else {
        out.push_back(parse_method(name));
      }
    }
  }
  if (out.empty()) throw InvalidArgument("no methods given");
  return out;
}

/// Stream for --out; "-" selects the fallback.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw Error("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error("failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

StepContext context_of(const Options& o) { return StepContext{o.hbar, o.expm_tol}; }

int cmd_propagate(const Options& o, std::ostream& out) {
  const HamiltonianModel model = resolve_model(o.source);
  const MethodId method = parse_method(o.method);
  if (!(o.t_final > o.t0)) throw InvalidArgument("--t-final must exceed --t0");
  const double length = o.t_final - o.t0;
  std::size_t n = 0;
  if (!o.steps.empty()) {
    n = o.steps.front();
  } else if (!o.dts.empty()) {
    n = resolve_step_count(length, o.dts.front());
  } else {
    throw InvalidArgument("propagate needs --dt or --steps");
  }
  if (n == 0) throw InvalidArgument("--steps must be positive");
  if (o.initial >= model.dim()) throw InvalidArgument("--initial is out of range for the model dim");

  const EvolutionTrace trace = propagate(method, model, o.t0, o.t_final, n,
                                         basis_state(model.dim(), o.initial), context_of(o));
  Output sink(o.out, out);
  std::ostream& s = *sink;
  s << 't';
  for (std::size_t k = 0; k < model.dim(); ++k) s << ",pop_" << k;
  s << ",unitarity_defect\n";
  for (std::size_t r = 0; r < trace.times.size(); ++r) {
    s << format_real(trace.times[r]);
    for (double p : trace.populations[r]) s << ',' << format_real(p);
    s << ',' << format_real(trace.unitarity_defects[r]) << '\n';
  }
  sink.finish();
  return kOk;
}

int cmd_converge(const Options& o, std::ostream& out) {
  const HamiltonianModel model = resolve_model(o.source);
  const std::vector<MethodId> methods = resolve_methods(o.methods.empty() ? std::vector<std::string>{"all"} : o.methods);
  if (!(o.t_final > o.t0)) throw InvalidArgument("--t-final must exceed --t0");
  const double length = o.t_final - o.t0;

  std::vector<std::size_t> ladder = o.steps;
  for (double dt : o.dts) ladder.push_back(resolve_step_count(length, dt));
  ReferenceSpec ref;
  ref.n_steps = o.ref_steps;
  ref.cross_check_tolerance = o.cross_check_tol;
  if (o.no_cross_check) ref.cross_check.reset();

  const ConvergenceReport report =
      convergence_study(model.sampler(), methods, ladder, o.t0, length, ref, context_of(o));

  Output sink(o.out, out);
  std::ostream& s = *sink;
  s << "method,dt,n_steps,error\n";
  for (const ConvergenceRecord& r : report.records) {
    s << method_name(r.method) << ',' << format_real(r.dt) << ',' << r.n_steps << ','
      << format_real(r.error) << '\n';
  }
  s << "method,slope\n";
  for (const auto& [m, slope] : report.slopes) {
    s << method_name(m) << ',' << format_real(slope) << '\n';
  }
  sink.finish();
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.suite != "all" && o.suite != "closed-forms" && o.suite != "symmetry") {
    throw InvalidArgument("--suite must be all, closed-forms or symmetry");
  }
  if (o.dim == 0) throw InvalidArgument("--dim must be positive");
  if (o.gl_points < 8) throw InvalidArgument("--gl-points must be at least 8");
  verify::OracleConfig cfg;
  cfg.gl_points_per_axis = o.gl_points;
  cfg.seed = o.seed;
  cfg.dim = o.dim;
  cfg.dt = o.verify_dt;
  cfg.draws = o.draws;

  verify::Report report;
  if (o.suite == "all" || o.suite == "closed-forms") {
    const verify::Report r = verify::check_closed_forms(cfg);
    report.insert(report.end(), r.begin(), r.end());
  }
  if (o.suite == "all" || o.suite == "symmetry") {
    const verify::Report r = verify::check_symmetry_suite(cfg, o.symmetry_draws);
    report.insert(report.end(), r.begin(), r.end());
  }

  Output sink(o.out, out);
  std::ostream& s = *sink;
  s << "identity,max_rel_dev,tolerance,pass\n";
  for (const verify::IdentityCheck& c : report) {
    s << c.name << ',' << format_real(c.max_rel_dev) << ',' << format_real(c.tolerance) << ','
      << (c.passed ? "true" : "false") << '\n';
  }
  sink.finish();
  return verify::all_passed(report) ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Unitary Magnus-expansion propagators for time-dependent Hamiltonians", "magnus"};
  app.require_subcommand(1);

  auto* prop = app.add_subcommand("propagate", "Propagate a state and write populations as CSV");
  add_model_flags(prop, o);
  add_physics_flags(prop, o);
  prop->add_option("--method", o.method, "Step method (see list-methods)");
  prop->add_option("--dt", o.dts, "Step size")->expected(1);
  prop->add_option("--steps", o.steps, "Number of steps (overrides --dt)")->expected(1);
  prop->add_option("--t-final", o.t_final, "Final time");
  prop->add_option("--t0", o.t0, "Initial time");
  prop->add_option("--initial", o.initial, "Index of the initial basis state");
  prop->add_option("--out", o.out, "Output CSV path ('-' for stdout)");

  auto* conv = app.add_subcommand("converge", "Error-vs-step-size study against a fine reference");
  add_model_flags(conv, o);
  add_physics_flags(conv, o);
  conv->add_option("--methods", o.methods, "Methods: 'all' or a comma-separated list");
  conv->add_option("--dt", o.dts, "Ladder step size (repeatable; default: standard ladder)");
  conv->add_option("--steps", o.steps, "Ladder step count (repeatable)");
  conv->add_option("--t-final", o.t_final, "Final time");
  conv->add_option("--t0", o.t0, "Initial time");
  conv->add_option("--ref-steps", o.ref_steps, "Reference step count (default: 8x finest rung)");
  conv->add_flag("--no-cross-check", o.no_cross_check, "Skip the independent reference cross-check");
  conv->add_option("--cross-check-tol", o.cross_check_tol, "Allowed reference cross-check deviation");
  conv->add_option("--out", o.out, "Output CSV path ('-' for stdout)");

  auto* ver = app.add_subcommand("verify", "Certify the closed forms and symmetry properties");
  ver->add_option("--suite", o.suite, "all, closed-forms or symmetry");
  ver->add_option("--seed", o.seed, "Random seed");
  ver->add_option("--dim", o.dim, "Matrix dimension (symmetry suite uses 2..dim)");
  ver->add_option("--dt", o.verify_dt, "Step length used by the closed-form checks");
  ver->add_option("--draws", o.draws, "Random draws per closed-form identity");
  ver->add_option("--symmetry-draws", o.symmetry_draws, "Random draws for the symmetry suite");
  ver->add_option("--gl-points", o.gl_points, "Gauss-Legendre points per nested axis");
  ver->add_option("--out", o.out, "Output CSV path ('-' for stdout)");

  auto* list = app.add_subcommand("list-methods", "Print the method names in canonical order");

  std::vector<const char*> argv{"magnus"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "magnus: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (list->parsed()) {
      for (MethodId m : all_methods()) out << method_name(m) << '\n';
      return kOk;
    }
    if (prop->parsed()) return cmd_propagate(o, out);
    if (conv->parsed()) return cmd_converge(o, out);
    if (ver->parsed()) return cmd_verify(o, out);
  } catch (const NumericalError& e) {
    err << "magnus: numerical precondition failed: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "magnus: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace magnus::cli
