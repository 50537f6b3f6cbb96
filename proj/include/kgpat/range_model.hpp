#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "kgpat/graph.hpp"
#include "kgpat/regex_induction.hpp"

namespace kgpat {

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double variance = 1.0;

  double sigma() const { return std::sqrt(variance); }
  friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;
};

/// Components are in original units (temporal values in Unix seconds).
/// `datatype` is the dominant datatype of the population the fit came from.
struct GaussianMixtureRange {
  std::vector<GaussianComponent> components;
  double shift = 0.0;
  double scale = 1.0;
  bool temporal = false;
  std::string datatype;

  friend bool operator==(const GaussianMixtureRange&, const GaussianMixtureRange&) = default;
};

struct RegexRange {
  StructuredRegex regex;

  friend bool operator==(const RegexRange&, const RegexRange&) = default;
};

/// Learned value space of a value-range variable.
struct RangeModel {
  std::variant<GaussianMixtureRange, RegexRange> model;

  bool is_mixture() const { return std::holds_alternative<GaussianMixtureRange>(model); }
  const GaussianMixtureRange& mixture() const { return std::get<GaussianMixtureRange>(model); }
  const RegexRange& regex() const { return std::get<RegexRange>(model); }

  /// Datatype class of literals this model can accept.
  DatatypeClass accepted_class() const;
  /// Stable textual key; distinct parameters give distinct keys.
  std::string key() const;

  friend bool operator==(const RangeModel&, const RangeModel&) = default;
};

struct MembershipDiagnostics {
  std::atomic<std::size_t> unparseable{0};
};

/// Mixture: some component has |v - mean| <= sigma. Regex: full-string match.
/// Literals of the wrong datatype class never match; unparseable lexical
/// forms never match and are counted in `diag`.
bool membership(const RangeModel& range, const Resource& literal, MembershipDiagnostics* diag = nullptr);

/// Formats a double with round-half-even at `decimals` places, using the
/// exact binary value of `v`.
std::string format_fixed(double v, int decimals);

}  // namespace kgpat
