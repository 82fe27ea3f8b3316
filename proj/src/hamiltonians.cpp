#include "magnus/hamiltonians.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "magnus/errors.hpp"

namespace magnus {

using json = nlohmann::json;

Complex EntrySpec::value(double t) const {
  Complex v = offset;
  for (const SinusoidTerm& term : terms) {
    v += term.amplitude * std::sin(term.angular_frequency * t + term.phase);
  }
  return v;
}

namespace {

std::string entry_name(const HamiltonianModel::Index& ij) {
  std::ostringstream s;
  s << "entry (" << ij.first << "," << ij.second << ")";
  return s.str();
}

}  // namespace

HamiltonianModel::HamiltonianModel(std::size_t dim, std::map<Index, EntrySpec> upper_triangle)
    : dim_(dim), entries_(std::move(upper_triangle)) {
  if (dim_ == 0) throw ValidationError("model: dim must be positive");
  for (const auto& [ij, spec] : entries_) {
    const auto [i, j] = ij;
    if (i > j) throw ValidationError(entry_name(ij) + ": requires i <= j");
    if (j >= dim_) throw ValidationError(entry_name(ij) + ": index out of range for dim");
    if (!std::isfinite(spec.offset.real()) || !std::isfinite(spec.offset.imag())) {
      throw ValidationError(entry_name(ij) + ": non-finite offset");
    }
    for (const SinusoidTerm& term : spec.terms) {
      if (!std::isfinite(term.amplitude) || !std::isfinite(term.angular_frequency) ||
          !std::isfinite(term.phase)) {
        throw ValidationError(entry_name(ij) + ": non-finite sinusoid parameter");
      }
    }
    if (i == j && spec.offset.imag() != 0.0) {
      throw ValidationError(entry_name(ij) +
                            ": diagonal offset must be real for a Hermitian model");
    }
  }
}

ComplexSquareMatrix HamiltonianModel::sample(double t) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [ij, spec] : entries_) {
    const auto i = static_cast<Eigen::Index>(ij.first);
    const auto j = static_cast<Eigen::Index>(ij.second);
    const Complex v = spec.value(t);
    if (i == j) {
      h(i, i) = v.real();
    } else {
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return ComplexSquareMatrix(std::move(h));
}

Sampler HamiltonianModel::sampler() const {
  return [model = *this](double t) { return model.sample(t); };
}

HamiltonianModel two_state_model(const TwoStateParameters& p) {
  std::map<HamiltonianModel::Index, EntrySpec> entries;
  entries[{0, 0}] = EntrySpec{0.0, {{p.alpha1, p.omega1, 0.0}}};
  entries[{1, 1}] = EntrySpec{1.0, {{p.alpha2, p.omega2, 0.0}}};
  entries[{0, 1}] = EntrySpec{1.0, {{p.alpha_c, p.omega_c, 0.0}}};
  return HamiltonianModel(2, std::move(entries));
}

const std::vector<std::string>& builtin_case_ids() {
  static const std::vector<std::string> ids{"I", "II", "III", "IV"};
  return ids;
}

TwoStateParameters builtin_parameters(std::string_view case_id) {
  TwoStateParameters p;
  if (case_id == "I") return p;
  if (case_id == "II") {
    p.omega1 = 2.0;
    return p;
  }
  if (case_id == "III") {
    p.omega2 = 10.0;
    return p;
  }
  if (case_id == "IV") {
    p.omega_c = 10.0;
    return p;
  }
  throw InvalidArgument("unknown builtin case '" + std::string(case_id) +
                        "' (expected I, II, III or IV)");
}

HamiltonianModel builtin_case(std::string_view case_id) {
  return two_state_model(builtin_parameters(case_id));
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

double as_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
  const auto k = v.get<long long>();
  if (k < 0) throw ParseError(path + ": expected a non-negative integer");
  return static_cast<std::size_t>(k);
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream s;
  s << "line " << line << ", column " << col;
  return s.str();
}

}  // namespace

HamiltonianModel load_model(std::string_view config_text) {
  json doc;
  try {
    doc = json::parse(config_text.begin(), config_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("model: JSON syntax error at " + line_column(config_text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("model: top level must be an object");

  const std::size_t dim = as_index(field(doc, "dim", "model"), "model.dim");
  const json& entries = field(doc, "entries", "model");
  if (!entries.is_array()) throw ParseError("model.entries: expected an array");

  std::map<HamiltonianModel::Index, EntrySpec> upper;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string path = "model.entries[" + std::to_string(k) + "]";
    const json& e = entries[k];
    if (!e.is_object()) throw ParseError(path + ": expected an object");
    const std::size_t i = as_index(field(e, "i", path), path + ".i");
    const std::size_t j = as_index(field(e, "j", path), path + ".j");

    EntrySpec spec;
    if (auto it = e.find("offset"); it != e.end()) {
      if (!it->is_array() || it->size() != 2) {
        throw ParseError(path + ".offset: expected [re, im]");
      }
      spec.offset = Complex(as_real((*it)[0], path + ".offset[0]"),
                            as_real((*it)[1], path + ".offset[1]"));
    }
    if (auto it = e.find("terms"); it != e.end()) {
      if (!it->is_array()) throw ParseError(path + ".terms: expected an array");
      for (std::size_t m = 0; m < it->size(); ++m) {
        const std::string tpath = path + ".terms[" + std::to_string(m) + "]";
        const json& t = (*it)[m];
        if (!t.is_object()) throw ParseError(tpath + ": expected an object");
        SinusoidTerm term;
        term.amplitude = as_real(field(t, "amp", tpath), tpath + ".amp");
        term.angular_frequency = as_real(field(t, "omega", tpath), tpath + ".omega");
        if (auto p = t.find("phase"); p != t.end()) term.phase = as_real(*p, tpath + ".phase");
        spec.terms.push_back(term);
      }
    }
    if (!upper.emplace(HamiltonianModel::Index{i, j}, std::move(spec)).second) {
      throw ValidationError(path + ": duplicate " + entry_name({i, j}));
    }
  }
  try {
    return HamiltonianModel(dim, std::move(upper));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

HamiltonianModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string to_json(const HamiltonianModel& model) {
  json doc;
  doc["dim"] = model.dim();
  doc["entries"] = json::array();
  for (const auto& [ij, spec] : model.upper_triangle()) {
    json e;
    e["i"] = ij.first;
    e["j"] = ij.second;
    e["offset"] = {spec.offset.real(), spec.offset.imag()};
    e["terms"] = json::array();
    for (const SinusoidTerm& t : spec.terms) {
      e["terms"].push_back({{"amp", t.amplitude}, {"omega", t.angular_frequency}, {"phase", t.phase}});
    }
    doc["entries"].push_back(std::move(e));
  }
  return doc.dump(2);
}

}  // namespace magnus
