#include "kgpat/regex_induction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string_view>

namespace kgpat {

namespace {

// Length of the UTF-8 sequence starting with `lead`.
std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

CharClass classify(std::string_view s, std::size_t pos, std::size_t& len) {
  unsigned char c = static_cast<unsigned char>(s[pos]);
  len = std::min(utf8_length(c), s.size() - pos);
  if (c >= 'a' && c <= 'z') return {CharClass::Kind::Lower, {}};
  if (c >= 'A' && c <= 'Z') return {CharClass::Kind::Upper, {}};
  if (c >= '0' && c <= '9') return {CharClass::Kind::Digit, {}};
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return {CharClass::Kind::Space, {}};
  return {CharClass::Kind::Literal, std::string(s.substr(pos, len))};
}

bool class_matches(const CharClass& cls, std::string_view s, std::size_t pos, std::size_t& len) {
  CharClass actual = classify(s, pos, len);
  return actual == cls;
}

constexpr std::string_view kMeta = "\\|.?*+(){}[]^$-";

std::string render_class(const CharClass& cls, bool quantified) {
  switch (cls.kind) {
    case CharClass::Kind::Lower: return "[a-z]";
    case CharClass::Kind::Upper: return "[A-Z]";
    case CharClass::Kind::Digit: return "[0-9]";
    case CharClass::Kind::Space: return "\\s";
    case CharClass::Kind::Literal:
      if (cls.literal.size() == 1 && kMeta.find(cls.literal[0]) != std::string_view::npos) return "\\" + cls.literal;
      if (cls.literal.size() > 1 && quantified) return "(" + cls.literal + ")";
      return cls.literal;
  }
  return {};
}

}  // namespace

std::string StructuredRegex::render() const {
  std::string out;
  for (const auto& t : tokens) {
    bool quantified = !(t.min == 1 && t.max == 1);
    out += render_class(t.cls, quantified);
    if (!quantified) continue;
    if (t.min == t.max) {
      out += "{" + std::to_string(t.min) + "}";
    } else {
      out += "{" + std::to_string(t.min) + "," + std::to_string(t.max) + "}";
    }
  }
  return out;
}

std::vector<CharClass> StructuredRegex::signature() const {
  std::vector<CharClass> sig;
  sig.reserve(tokens.size());
  for (const auto& t : tokens) sig.push_back(t.cls);
  return sig;
}

StructuredRegex value_regex(std::string_view s) {
  StructuredRegex re;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = 1;
    CharClass cls = classify(s, pos, len);
    if (!re.tokens.empty() && re.tokens.back().cls == cls) {
      ++re.tokens.back().min;
      ++re.tokens.back().max;
    } else {
      re.tokens.push_back({std::move(cls), 1, 1});
    }
    pos += len;
  }
  return re;
}

bool full_match(const StructuredRegex& re, std::string_view s) {
  // Adjacent tokens have disjoint classes, so maximal runs are the only parse.
  std::size_t pos = 0;
  for (const auto& t : re.tokens) {
    std::size_t count = 0;
    std::size_t len = 1;
    while (pos < s.size() && class_matches(t.cls, s, pos, len)) {
      pos += len;
      ++count;
    }
    if (count < t.min || count > t.max) return false;
  }
  return pos == s.size();
}

namespace {

StructuredRegex merge_ranges(const std::vector<CharClass>& sig, const std::vector<std::vector<std::size_t>>& runs) {
  StructuredRegex re;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    std::size_t lo = runs.front()[i], hi = runs.front()[i];
    for (const auto& r : runs) {
      lo = std::min(lo, r[i]);
      hi = std::max(hi, r[i]);
    }
    re.tokens.push_back({sig[i], lo, hi});
  }
  return re;
}

std::vector<std::size_t> run_lengths(const StructuredRegex& re) {
  std::vector<std::size_t> out;
  for (const auto& t : re.tokens) out.push_back(t.min);
  return out;
}

// Narrows each position to its central quantile range when enough members
// still match; otherwise returns the full-range expression.
StructuredRegex trim_to_coverage(const std::vector<CharClass>& sig, const std::vector<std::vector<std::size_t>>& runs,
                                 const std::vector<std::string>& members, double coverage) {
  StructuredRegex full = merge_ranges(sig, runs);
  if (coverage >= 1.0 || runs.size() < 3) return full;
  double tail = (1.0 - coverage) / 2.0;
  StructuredRegex trimmed;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    std::vector<std::size_t> col;
    for (const auto& r : runs) col.push_back(r[i]);
    std::sort(col.begin(), col.end());
    auto at = [&](double q) {
      auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(col.size() - 1)));
      return col[std::min(idx, col.size() - 1)];
    };
    trimmed.tokens.push_back({sig[i], at(tail), at(1.0 - tail)});
  }
  std::size_t hits = 0;
  for (const auto& m : members) hits += full_match(trimmed, m) ? 1 : 0;
  if (static_cast<double>(hits) >= coverage * static_cast<double>(members.size())) return trimmed;
  return full;
}

}  // namespace

std::vector<RegexCluster> cluster_and_generalize(const std::vector<std::string>& values, double coverage) {
  struct Group {
    std::vector<std::string> members;
    std::vector<std::vector<std::size_t>> runs;
    std::map<std::vector<std::size_t>, std::vector<std::string>> exact;
  };
  std::map<std::vector<CharClass>, Group> groups;
  for (const auto& v : values) {
    StructuredRegex re = value_regex(v);
    auto& g = groups[re.signature()];
    auto runs = run_lengths(re);
    g.members.push_back(v);
    g.exact[runs].push_back(v);
    g.runs.push_back(std::move(runs));
  }

  std::vector<RegexCluster> out;
  for (auto& [sig, g] : groups) {
    int parent_index = static_cast<int>(out.size());
    RegexCluster parent;
    parent.signature = sig;
    parent.generalized = trim_to_coverage(sig, g.runs, g.members, coverage);
    parent.members = g.members;
    parent.level = 1;
    out.push_back(std::move(parent));
    if (g.exact.size() < 2) continue;
    for (auto& [runs, members] : g.exact) {
      RegexCluster child;
      child.signature = sig;
      child.generalized = merge_ranges(sig, {runs});
      child.members = members;
      child.level = 0;
      child.parent = parent_index;
      out.push_back(std::move(child));
    }
  }
  return out;
}

}  // namespace kgpat
