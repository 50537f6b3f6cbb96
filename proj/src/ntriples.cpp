#include "kgpat/rdf.hpp"

#include <cctype>
#include <charconv>

namespace kgpat {

Resource Resource::iri(std::string value) {
  return Resource{TermKind::Iri, std::move(value), {}, {}};
}

Resource Resource::blank(std::string label) {
  return Resource{TermKind::BlankNode, std::move(label), {}, {}};
}

Resource Resource::literal(std::string lexical, std::string datatype) {
  return Resource{TermKind::Literal, std::move(lexical), std::move(datatype), {}};
}

Resource Resource::lang_literal(std::string lexical, std::string language) {
  return Resource{TermKind::Literal, std::move(lexical), rdf::langString, std::move(language)};
}

std::size_t ResourceHash::operator()(const Resource& r) const noexcept {
  std::size_t h = std::hash<std::string>{}(r.lexical);
  h ^= std::hash<std::string>{}(r.datatype) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<std::string>{}(r.language) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(r.kind);
}

std::string escape_string_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string to_ntriples(const Resource& r) {
  switch (r.kind) {
    case TermKind::Iri: return "<" + r.lexical + ">";
    case TermKind::BlankNode: return "_:" + r.lexical;
    case TermKind::Literal:
      if (!r.language.empty()) return "\"" + escape_string_literal(r.lexical) + "\"@" + r.language;
      if (r.datatype == xsd::string_) return "\"" + escape_string_literal(r.lexical) + "\"";
      return "\"" + escape_string_literal(r.lexical) + "\"^^<" + r.datatype + ">";
  }
  return {};
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool read_hex(std::string_view text, std::size_t pos, std::size_t n, std::uint32_t& cp) {
  if (pos + n > text.size()) return false;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + n, cp, 16);
  return ec == std::errc{} && ptr == text.data() + pos + n;
}

// Handles \uXXXX and \UXXXXXXXX; `allow_string_escapes` adds the ECHAR set.
bool unescape(std::string_view text, std::size_t& pos, std::string& out, bool allow_string_escapes) {
  ++pos;  // backslash
  if (pos >= text.size()) return false;
  char c = text[pos];
  std::uint32_t cp = 0;
  if (c == 'u') {
    if (!read_hex(text, pos + 1, 4, cp)) return false;
    append_utf8(out, cp);
    pos += 5;
    return true;
  }
  if (c == 'U') {
    if (!read_hex(text, pos + 1, 8, cp)) return false;
    append_utf8(out, cp);
    pos += 9;
    return true;
  }
  if (!allow_string_escapes) return false;
  switch (c) {
    case 't': out += '\t'; break;
    case 'b': out += '\b'; break;
    case 'n': out += '\n'; break;
    case 'r': out += '\r'; break;
    case 'f': out += '\f'; break;
    case '"': out += '"'; break;
    case '\'': out += '\''; break;
    case '\\': out += '\\'; break;
    default: return false;
  }
  ++pos;
  return true;
}

bool parse_iri_body(std::string_view text, std::size_t& pos, std::string& out) {
  ++pos;  // '<'
  while (pos < text.size() && text[pos] != '>') {
    char c = text[pos];
    if (c == '\\') {
      if (!unescape(text, pos, out, false)) return false;
      continue;
    }
    if (c == ' ' || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
      return false;
    }
    out += c;
    ++pos;
  }
  if (pos >= text.size()) return false;
  ++pos;  // '>'
  return true;
}

void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
}

}  // namespace

std::optional<Resource> parse_term(std::string_view text, std::size_t& pos, std::string* error) {
  auto fail = [&](const char* msg) -> std::optional<Resource> {
    if (error) *error = msg;
    return std::nullopt;
  };
  if (pos >= text.size()) return fail("unexpected end of line");
  char c = text[pos];
  if (c == '<') {
    std::string iri;
    if (!parse_iri_body(text, pos, iri)) return fail("malformed IRI");
    return Resource::iri(std::move(iri));
  }
  if (c == '_') {
    if (pos + 1 >= text.size() || text[pos + 1] != ':') return fail("malformed blank node");
    pos += 2;
    std::size_t start = pos;
    while (pos < text.size()) {
      unsigned char ch = static_cast<unsigned char>(text[pos]);
      if (std::isalnum(ch) || ch == '_' || ch == '-' || ch == '.' || ch >= 0x80) {
        ++pos;
      } else {
        break;
      }
    }
    // A trailing '.' terminates the statement, not the label.
    while (pos > start && text[pos - 1] == '.') --pos;
    if (pos == start) return fail("empty blank node label");
    return Resource::blank(std::string(text.substr(start, pos - start)));
  }
  if (c == '"') {
    ++pos;
    std::string lex;
    while (pos < text.size() && text[pos] != '"') {
      if (text[pos] == '\\') {
        if (!unescape(text, pos, lex, true)) return fail("bad escape in literal");
        continue;
      }
      lex += text[pos++];
    }
    if (pos >= text.size()) return fail("unterminated literal");
    ++pos;
    if (pos + 1 < text.size() && text[pos] == '^' && text[pos + 1] == '^') {
      pos += 2;
      if (pos >= text.size() || text[pos] != '<') return fail("datatype must be an IRI");
      std::string dt;
      if (!parse_iri_body(text, pos, dt)) return fail("malformed datatype IRI");
      return Resource::literal(std::move(lex), std::move(dt));
    }
    if (pos < text.size() && text[pos] == '@') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '-')) ++pos;
      if (pos == start) return fail("empty language tag");
      return Resource::lang_literal(std::move(lex), std::string(text.substr(start, pos - start)));
    }
    return Resource::literal(std::move(lex));
  }
  return fail("unexpected character");
}

namespace {

std::optional<RawTriple> parse_line(std::string_view line, std::string& error) {
  std::size_t pos = 0;
  skip_ws(line, pos);
  auto s = parse_term(line, pos, &error);
  if (!s) return std::nullopt;
  if (s->is_literal()) {
    error = "subject must be an IRI or blank node";
    return std::nullopt;
  }
  skip_ws(line, pos);
  auto p = parse_term(line, pos, &error);
  if (!p) return std::nullopt;
  if (p->kind != TermKind::Iri) {
    error = "predicate must be an IRI";
    return std::nullopt;
  }
  skip_ws(line, pos);
  auto o = parse_term(line, pos, &error);
  if (!o) return std::nullopt;
  skip_ws(line, pos);
  if (pos >= line.size() || line[pos] != '.') {
    error = "missing terminating '.'";
    return std::nullopt;
  }
  ++pos;
  skip_ws(line, pos);
  if (pos < line.size() && line[pos] != '#') {
    error = "trailing content after '.'";
    return std::nullopt;
  }
  return RawTriple{std::move(*s), std::move(*p), std::move(*o)};
}

}  // namespace

ParseResult parse_ntriples(std::string_view source, const ParseOptions& options) {
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    std::size_t pos = 0;
    skip_ws(line, pos);
    if (pos < line.size() && line[pos] != '#') {
      std::string error;
      if (auto t = parse_line(line, error)) {
        result.triples.push_back(std::move(*t));
      } else if (options.lenient) {
        if (result.skipped_lines == 0) result.first_bad_line = line_no;
        ++result.skipped_lines;
      } else {
        throw ParseError(line_no, error);
      }
    }
    if (end == source.size()) break;
    start = end + 1;
  }
  return result;
}

}  // namespace kgpat
