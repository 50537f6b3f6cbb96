#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kgpat {

namespace xsd {
inline constexpr std::string_view ns = "http://www.w3.org/2001/XMLSchema#";
inline const std::string string_ = "http://www.w3.org/2001/XMLSchema#string";
inline const std::string integer = "http://www.w3.org/2001/XMLSchema#integer";
inline const std::string decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline const std::string double_ = "http://www.w3.org/2001/XMLSchema#double";
inline const std::string float_ = "http://www.w3.org/2001/XMLSchema#float";
inline const std::string date = "http://www.w3.org/2001/XMLSchema#date";
inline const std::string dateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline const std::string gYear = "http://www.w3.org/2001/XMLSchema#gYear";
inline const std::string gYearMonth = "http://www.w3.org/2001/XMLSchema#gYearMonth";
inline const std::string gMonthDay = "http://www.w3.org/2001/XMLSchema#gMonthDay";
inline const std::string time = "http://www.w3.org/2001/XMLSchema#time";
inline const std::string duration = "http://www.w3.org/2001/XMLSchema#duration";
}  // namespace xsd

namespace rdf {
inline const std::string type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline const std::string langString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace rdf

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

/// An RDF term. Literals always carry a datatype; language-tagged literals
/// carry rdf:langString plus the tag.
struct Resource {
  TermKind kind = TermKind::Iri;
  std::string lexical;
  std::string datatype;  // empty unless Literal
  std::string language;  // empty unless language-tagged Literal

  static Resource iri(std::string value);
  static Resource blank(std::string label);
  static Resource literal(std::string lexical, std::string datatype = xsd::string_);
  static Resource lang_literal(std::string lexical, std::string language);

  bool is_literal() const { return kind == TermKind::Literal; }
  bool is_entity() const { return kind != TermKind::Literal; }

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct ResourceHash {
  std::size_t operator()(const Resource& r) const noexcept;
};

/// N-Triples term syntax, e.g. `<http://x>`, `_:b0`, `"5"^^<...#integer>`.
std::string to_ntriples(const Resource& r);

struct RawTriple {
  Resource subject;
  Resource predicate;
  Resource object;

  friend bool operator==(const RawTriple&, const RawTriple&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseOptions {
  bool lenient = false;
};

struct ParseResult {
  std::vector<RawTriple> triples;
  std::size_t skipped_lines = 0;
  std::size_t first_bad_line = 0;
};

/// Parses N-Triples text. Strict mode throws ParseError on the first malformed
/// line; lenient mode skips and counts malformed lines.
ParseResult parse_ntriples(std::string_view source, const ParseOptions& options = {});

/// Parses a single term starting at `pos`; advances `pos` past it.
std::optional<Resource> parse_term(std::string_view text, std::size_t& pos, std::string* error = nullptr);

std::string escape_string_literal(std::string_view s);

}  // namespace kgpat
