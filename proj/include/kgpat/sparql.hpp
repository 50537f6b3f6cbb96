#pragma once

#include <string>
#include <vector>

#include "kgpat/graph.hpp"
#include "kgpat/pattern.hpp"

namespace kgpat {

struct SparqlQuery {
  std::vector<std::string> prologue;       // "PREFIX xsd: <...>"
  std::vector<std::string> select_vars;    // "?v0", ...
  std::vector<std::string> where_triples;  // "?v0 <p> <o> ."
  std::vector<std::string> filters;        // conjuncts, joined with &&

  std::string render() const;
};

/// Variables are named ?vN in canonical order, so ?v0 is the root. Object
/// variables get a type triple unless a clause already states that type.
/// Range bounds are mean -/+ sigma printed with two decimals.
SparqlQuery to_sparql(const GraphPattern& pattern, const KnowledgeGraph& g);

/// Lexical form of a POSIX time as xsd:dateTime with centisecond precision.
std::string format_date_time(double unix_seconds);

}  // namespace kgpat
