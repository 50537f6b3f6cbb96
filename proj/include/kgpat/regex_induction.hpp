#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kgpat {

/// Character class of one regex token. `Literal` carries the exact character
/// (one UTF-8 code point).
struct CharClass {
  enum class Kind { Lower, Upper, Digit, Space, Literal };
  Kind kind = Kind::Literal;
  std::string literal;

  friend bool operator==(const CharClass&, const CharClass&) = default;
  friend auto operator<=>(const CharClass&, const CharClass&) = default;
};

struct RegexToken {
  CharClass cls;
  std::size_t min = 1;
  std::size_t max = 1;

  friend bool operator==(const RegexToken&, const RegexToken&) = default;
};

/// A full-string-anchored sequence of quantified character classes.
struct StructuredRegex {
  std::vector<RegexToken> tokens;

  /// Unanchored source text, e.g. `[a-z]{4}\s[a-z]{3}`. Anchoring is implied.
  std::string render() const;
  /// Class sequence ignoring quantifiers; equal signatures cluster together.
  std::vector<CharClass> signature() const;

  friend bool operator==(const StructuredRegex&, const StructuredRegex&) = default;
};

/// Per-value expression: classify each character, run-length compress.
StructuredRegex value_regex(std::string_view s);

struct RegexCluster {
  std::vector<std::string> members;
  std::vector<CharClass> signature;
  StructuredRegex generalized;
  /// 0 for exact-count groups, 1 for signature-level parents.
  int level = 0;
  /// Index of the parent cluster in the returned list; -1 for parents.
  int parent = -1;
};

/// Groups values by class signature and merges quantifiers to [min, max].
/// Returns signature-level parents, each followed by its exact-count children
/// when a parent has more than one distinct child expression. With
/// coverage < 1, a parent's ranges may be trimmed so long as at least that
/// fraction of its members still matches.
std::vector<RegexCluster> cluster_and_generalize(const std::vector<std::string>& values, double coverage = 1.0);

bool full_match(const StructuredRegex& re, std::string_view s);

}  // namespace kgpat
