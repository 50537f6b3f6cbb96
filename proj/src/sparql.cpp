#include "kgpat/sparql.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "kgpat/rdf.hpp"

namespace kgpat {

namespace {

constexpr long long centis_per_day = 8640000;

long long floor_div(long long a, long long b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

std::string clock(long long centis) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%02lld", centis / 360000, centis / 6000 % 60, centis / 100 % 60,
                centis % 100);
  return buf;
}

bool integer_family(std::string_view dt) {
  if (!dt.starts_with(xsd::ns)) return false;
  auto local = dt.substr(xsd::ns.size());
  return local != "decimal" && local != "float" && local != "double";
}

std::string typed(const std::string& lexical, std::string_view datatype) {
  return "\"" + lexical + "\"^^<" + std::string(datatype) + ">";
}

std::string bound_literal(double v, const GaussianMixtureRange& m) {
  if (!m.temporal) {
    std::string dt = m.datatype.empty() || integer_family(m.datatype) ? std::string(xsd::decimal) : m.datatype;
    return typed(format_fixed(v, 2), dt);
  }
  if (m.datatype == xsd::duration) {
    std::string s = format_fixed(std::fabs(v), 2);
    return typed((v < 0 ? "-PT" : "PT") + s + "S", xsd::duration);
  }
  if (m.datatype == xsd::time) {
    auto c = static_cast<long long>(std::nearbyint(v * 100.0));
    c = std::clamp(c, 0LL, centis_per_day - 1);
    return typed(clock(c) + "Z", xsd::time);
  }
  return typed(format_date_time(v), xsd::dateTime);
}

std::string range_filter(const std::string& var, const RangeModel& r) {
  if (!r.is_mixture()) {
    return "REGEX(" + var + ", \"" + escape_string_literal("^" + r.regex().regex.render() + "$") + "\")";
  }
  const auto& m = r.mixture();
  std::vector<std::string> parts;
  for (const auto& c : m.components) {
    parts.push_back(var + " >= " + bound_literal(c.mean - c.sigma(), m) + " && " + var +
                    " <= " + bound_literal(c.mean + c.sigma(), m));
  }
  if (parts.size() == 1) return parts[0];
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " || (" : "((") + parts[i] + ")";
  return out + ")";
}

}  // namespace

std::string format_date_time(double unix_seconds) {
  using namespace std::chrono;
  auto centis = static_cast<long long>(std::nearbyint(unix_seconds * 100.0));
  long long days = floor_div(centis, centis_per_day);
  long long rest = centis - days * centis_per_day;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  int y = static_cast<int>(ymd.year());
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%04d-%02u-%02uT", y < 0 ? "-" : "", std::abs(y), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf + clock(rest) + "Z";
}

std::string SparqlQuery::render() const {
  std::string out;
  for (const auto& p : prologue) out += p + "\n";
  out += "SELECT";
  for (const auto& v : select_vars) out += " " + v;
  out += "\nWHERE {\n";
  for (const auto& t : where_triples) out += t.empty() ? "\n" : "  " + t + "\n";
  if (!filters.empty()) {
    out += "  FILTER (\n";
    for (std::size_t i = 0; i < filters.size(); ++i) out += (i ? "    && " : "    ") + filters[i] + "\n";
    out += "  )\n";
  }
  return out + "}\n";
}

SparqlQuery to_sparql(const GraphPattern& p, const KnowledgeGraph& g) {
  const auto& dict = g.dictionary();
  auto form = canonical_form(p, dict);
  std::vector<std::string> names(p.variables.size());
  for (std::size_t k = 0; k < form.variables.size(); ++k) names[form.variables[k]] = "?v" + std::to_string(k);
  auto tail_text = [&](const Clause& c) {
    return c.has_variable_tail() ? names[c.tail_var()] : to_ntriples(dict.decode(std::get<Constant>(c.tail).id));
  };
  std::string type_iri = g.type_predicate() ? g.resource(*g.type_predicate()).lexical : std::string(rdf::type);

  SparqlQuery q;
  q.prologue = {"PREFIX xsd: <" + std::string(xsd::ns) + ">",
                "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>"};
  for (VarIndex v : form.variables) {
    const Variable& var = p.variables[v];
    if (!var.is_object()) continue;
    q.select_vars.push_back(names[v]);
    if (!q.where_triples.empty()) q.where_triples.emplace_back();
    bool typed_by_clause = false;
    for (auto i : form.clauses) {
      const Clause& c = p.clauses[i];
      if (c.head != v) continue;
      q.where_triples.push_back(names[v] + " " + to_ntriples(dict.decode(c.predicate)) + " " + tail_text(c) + " .");
      if (g.type_predicate() && c.predicate == *g.type_predicate() && !c.has_variable_tail() &&
          std::get<Constant>(c.tail).id == var.object_type()) {
        typed_by_clause = true;
      }
    }
    if (!typed_by_clause) {
      q.where_triples.push_back(names[v] + " <" + type_iri + "> " + to_ntriples(dict.decode(var.object_type())) + " .");
    }
  }
  for (VarIndex v : form.variables) {
    const auto& kind = p.variables[v].kind;
    if (const auto* dt = std::get_if<DataTypeVar>(&kind)) {
      q.filters.push_back("DATATYPE(" + names[v] + ") = " + to_ntriples(dict.decode(dt->datatype)));
    } else if (const auto* vr = std::get_if<ValueRangeVar>(&kind)) {
      q.filters.push_back(range_filter(names[v], *vr->range));
    }
  }
  return q;
}

}  // namespace kgpat
