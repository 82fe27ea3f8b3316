#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magnus/linalg.hpp"

namespace magnus {

/// Any pure map t -> H(t). Must return Hermitian matrices of one fixed dim.
using Sampler = std::function<ComplexSquareMatrix(double)>;

/// amplitude * sin(angular_frequency * t + phase).
struct SinusoidTerm {
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  double phase = 0.0;

  friend bool operator==(const SinusoidTerm&, const SinusoidTerm&) = default;
};

/// One matrix entry: constant offset plus a sum of sinusoids.
struct EntrySpec {
  Complex offset{0.0, 0.0};
  std::vector<SinusoidTerm> terms;

  Complex value(double t) const;

  friend bool operator==(const EntrySpec&, const EntrySpec&) = default;
};

/// Time-dependent Hermitian matrix declared by its upper triangle. Entry
/// (j, i) for i < j is the conjugate of entry (i, j); unspecified entries
/// are zero. Immutable after construction.
class HamiltonianModel {
 public:
  using Index = std::pair<std::size_t, std::size_t>;

  /// Validates: dim > 0, i <= j < dim, finite fields, real diagonal
  /// offsets. Throws ValidationError naming the offending entry.
  HamiltonianModel(std::size_t dim, std::map<Index, EntrySpec> upper_triangle);

  std::size_t dim() const noexcept { return dim_; }
  const std::map<Index, EntrySpec>& upper_triangle() const noexcept { return entries_; }

  ComplexSquareMatrix sample(double t) const;

  /// The model as a Sampler; the returned callable holds a copy.
  Sampler sampler() const;

  friend bool operator==(const HamiltonianModel&, const HamiltonianModel&) = default;

 private:
  std::size_t dim_;
  std::map<Index, EntrySpec> entries_;
};

inline ComplexSquareMatrix sample(const HamiltonianModel& model, double t) {
  return model.sample(t);
}

/// Parameters of the two-state sinusoidal model
///   H(t) = a1 sin(w1 t)|0><0| + (1 + a2 sin(w2 t))|1><1|
///        + (1 + ac sin(wc t))(|0><1| + |1><0|).
struct TwoStateParameters {
  double alpha1 = 1.0, omega1 = 1.0;
  double alpha2 = 1.0, omega2 = 1.0;
  double alpha_c = 1.0, omega_c = 1.0;
};

HamiltonianModel two_state_model(const TwoStateParameters& p);

/// Parameter sets "I", "II", "III", "IV" of the benchmark study.
/// Throws InvalidArgument for any other id.
TwoStateParameters builtin_parameters(std::string_view case_id);
HamiltonianModel builtin_case(std::string_view case_id);

/// Case ids in canonical order.
const std::vector<std::string>& builtin_case_ids();

/// Parses the JSON model schema
///   {"dim": int, "entries": [{"i": int, "j": int, "offset": [re, im],
///     "terms": [{"amp": real, "omega": real, "phase": real}]}]}
/// "offset", "terms" and "phase" are optional. Throws ParseError (with
/// line/column or field path) and ValidationError.
HamiltonianModel load_model(std::string_view config_text);

/// Reads and parses a model file; unreadable files throw Error.
HamiltonianModel load_model_file(const std::string& path);

/// Serializes to the same schema load_model reads.
std::string to_json(const HamiltonianModel& model);

}  // namespace magnus
