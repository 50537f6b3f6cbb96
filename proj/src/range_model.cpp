#include "kgpat/range_model.hpp"

#include <cstdio>

#include "kgpat/temporal.hpp"

namespace kgpat {

DatatypeClass RangeModel::accepted_class() const {
  if (!is_mixture()) return DatatypeClass::Textual;
  return mixture().temporal ? DatatypeClass::Temporal : DatatypeClass::Numeric;
}

std::string RangeModel::key() const {
  if (!is_mixture()) return "re\"" + regex().regex.render() + "\"";
  const auto& m = mixture();
  std::string out = m.temporal ? "gmmT[" : "gmm[";
  char buf[96];
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const auto& c = m.components[i];
    std::snprintf(buf, sizeof buf, "%s%.17g:%.17g:%.17g", i ? ";" : "", c.weight, c.mean, c.variance);
    out += buf;
  }
  return out + "]";
}

bool membership(const RangeModel& range, const Resource& literal, MembershipDiagnostics* diag) {
  if (!literal.is_literal()) return false;
  if (classify_datatype(literal.datatype) != range.accepted_class()) return false;
  if (!range.is_mixture()) return full_match(range.regex().regex, literal.lexical);
  auto v = literal_value(literal);
  if (!v) {
    if (diag) diag->unparseable.fetch_add(1, std::memory_order_relaxed);
    return false;
  }
  for (const auto& c : range.mixture().components) {
    if (std::fabs(*v - c.mean) <= c.sigma()) return true;
  }
  return false;
}

std::string format_fixed(double v, int decimals) {
  // glibc printf rounds the exact binary value half-to-even.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace kgpat
