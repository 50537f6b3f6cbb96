#include "doctest.h"

#include <random>
#include <set>

#include "fixtures.hpp"
#include "kgpat/sparql.hpp"
#include "random_pattern.hpp"
#include "sparql_engine.hpp"

using namespace kgpat;
using namespace kgpat::testing;

namespace {

const std::string xsd_ns(xsd::ns);

std::set<std::string> engine_roots(const ReferenceEngine& engine, const std::string& query) {
  std::set<std::string> out;
  for (const auto& r : engine.distinct(query, "?v0")) out.insert(to_ntriples(r));
  return out;
}

std::set<std::string> domain_roots(const KnowledgeGraph& g, const GraphPattern& p) {
  std::set<std::string> out;
  for (auto id : p.domains[GraphPattern::root]) out.insert(to_ntriples(g.resource(id)));
  return out;
}

// Root typed `type`, one value-range clause `pred` carrying `range`.
GraphPattern range_pattern(const KnowledgeGraph& g, const std::string& type, const std::string& pred,
                           std::shared_ptr<const RangeModel> range) {
  GraphPattern p;
  VarIndex root = p.add_variable({ObjectTypeVar{id_of(g, type)}});
  Variable probe{ValueRangeVar{range, nullptr}};
  VarIndex v = p.add_variable({ValueRangeVar{range, std::make_shared<const IdSet>(kind_domain(g, probe))}});
  p.clauses.push_back({id_of(g, pred), root, v});
  p.domains = compute_domains(g, p);
  return p;
}

std::shared_ptr<const RangeModel> mixture(std::vector<GaussianComponent> comps, bool temporal, std::string dt) {
  return std::make_shared<const RangeModel>(RangeModel{GaussianMixtureRange{std::move(comps), 0.0, 1.0, temporal, dt}});
}

std::vector<RawTriple> typed_values(const std::string& pred, const std::vector<Resource>& values) {
  std::vector<RawTriple> t;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto s = Resource::iri(ex + "x" + std::to_string(i));
    t.push_back({s, Resource::iri(rdf::type), Resource::iri(ex + "Thing")});
    t.push_back({s, Resource::iri(ex + pred), values[i]});
  }
  return t;
}

}  // namespace

TEST_CASE("single clause query text") {
  auto g = certificate_graph();
  GraphPattern p;
  VarIndex v = p.add_variable({ObjectTypeVar{id_of(g, "Person")}});
  p.clauses.push_back({id_of(g, "has_gender"), v, Constant{id_of(g, "Female")}});
  p.domains = compute_domains(g, p);
  std::string expected =
      "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n"
      "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
      "SELECT ?v0\n"
      "WHERE {\n"
      "  ?v0 <http://example.org/has_gender> <http://example.org/Female> .\n"
      "  ?v0 <http://example.org/has_type> <http://example.org/Person> .\n"
      "}\n";
  CHECK(to_sparql(p, g).render() == expected);
}

TEST_CASE("certificate query") {
  auto g = certificate_graph();
  auto q = to_sparql(certificate_pattern(g), g);
  CHECK(q.select_vars == std::vector<std::string>{"?v0", "?v2"});
  std::vector<std::string> where{
      "?v0 <http://example.org/at_age> ?v1 .",
      "?v0 <http://example.org/has_subject> ?v2 .",
      "?v0 <http://example.org/has_type> <http://example.org/Death_Certificate> .",
      "",
      "?v2 <http://example.org/has_gender> <http://example.org/Female> .",
      "?v2 <http://example.org/has_occupation> <http://example.org/H.0-2> .",
      "?v2 <http://example.org/has_type> <http://example.org/Person> .",
  };
  CHECK(q.where_triples == where);
  REQUIRE(q.filters.size() == 1);
  CHECK(q.filters[0] == "?v1 >= \"23.35\"^^<" + xsd_ns + "float> && ?v1 <= \"25.65\"^^<" + xsd_ns + "float>");
  // Stated type is not repeated.
  CHECK(q.render().find("Death_Certificate> .\n  ?v0 <http://example.org/has_type>") == std::string::npos);

  ReferenceEngine engine(fixture_triples("certificate.nt"));
  auto rows = engine.select(q.render());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("?v0") == Resource::iri(ex + "cert"));
}

TEST_CASE("integer-family bounds are decimals") {
  auto g = build_graph(typed_values("n", {Resource::literal("10", std::string(xsd::integer)),
                                          Resource::literal("14", std::string(xsd::integer))}));
  auto p = range_pattern(g, "Thing", "n", mixture({{1.0, 12.0, 4.0}}, false, std::string(xsd::integer)));
  auto q = to_sparql(p, g);
  REQUIRE(q.filters.size() == 1);
  CHECK(q.filters[0] == "?v1 >= \"10.00\"^^<" + xsd_ns + "decimal> && ?v1 <= \"14.00\"^^<" + xsd_ns + "decimal>");
}

TEST_CASE("several components are alternatives") {
  auto g = build_graph(typed_values("n", {Resource::literal("1.0", std::string(xsd::decimal)),
                                          Resource::literal("5.0", std::string(xsd::decimal)),
                                          Resource::literal("9.5", std::string(xsd::decimal))}));
  auto p = range_pattern(g, "Thing", "n",
                         mixture({{0.5, 1.0, 0.25}, {0.5, 9.0, 1.0}}, false, std::string(xsd::decimal)));
  auto q = to_sparql(p, g);
  REQUIRE(q.filters.size() == 1);
  std::string dec = "^^<" + xsd_ns + "decimal>";
  CHECK(q.filters[0] == "((?v1 >= \"0.50\"" + dec + " && ?v1 <= \"1.50\"" + dec + ") || (?v1 >= \"8.00\"" + dec +
                            " && ?v1 <= \"10.00\"" + dec + "))");
  ReferenceEngine engine(typed_values("n", {Resource::literal("1.0", std::string(xsd::decimal)),
                                            Resource::literal("5.0", std::string(xsd::decimal)),
                                            Resource::literal("9.5", std::string(xsd::decimal))}));
  CHECK(engine_roots(engine, q.render()) == std::set<std::string>{"<" + ex + "x0>", "<" + ex + "x2>"});
  CHECK(domain_roots(g, p) == engine_roots(engine, q.render()));
}

TEST_CASE("date-time lexical form") {
  CHECK(format_date_time(946684800) == "2000-01-01T00:00:00.00Z");
  CHECK(format_date_time(1709209815) == "2024-02-29T12:30:15.00Z");
  CHECK(format_date_time(-5017593600) == "1811-01-01T00:00:00.00Z");
  CHECK(format_date_time(-2203891200) == "1900-03-01T00:00:00.00Z");
  CHECK(format_date_time(4133980799) == "2100-12-31T23:59:59.00Z");
  CHECK(format_date_time(-0.25) == "1969-12-31T23:59:59.75Z");
  CHECK(format_date_time(0.004) == "1970-01-01T00:00:00.00Z");
}

TEST_CASE("temporal bounds") {
  auto dates = std::vector<Resource>{Resource::literal("1999-12-31", std::string(xsd::date)),
                                     Resource::literal("2000-01-01", std::string(xsd::date)),
                                     Resource::literal("2000-01-05", std::string(xsd::date))};
  auto g = build_graph(typed_values("on", dates));
  auto p = range_pattern(g, "Thing", "on", mixture({{1.0, 946684800.0, 86400.0 * 86400.0}}, true, std::string(xsd::date)));
  auto q = to_sparql(p, g);
  std::string dt = "^^<" + xsd_ns + "dateTime>";
  REQUIRE(q.filters.size() == 1);
  CHECK(q.filters[0] ==
        "?v1 >= \"1999-12-31T00:00:00.00Z\"" + dt + " && ?v1 <= \"2000-01-02T00:00:00.00Z\"" + dt);
  ReferenceEngine engine(typed_values("on", dates));
  CHECK(engine_roots(engine, q.render()) == domain_roots(g, p));
  CHECK(domain_roots(g, p).size() == 2);

  auto dur = mixture({{1.0, 3600.0, 3600.0}}, true, std::string(xsd::duration));
  auto dg = build_graph(typed_values("d", {Resource::literal("PT1H", std::string(xsd::duration))}));
  std::string du = "^^<" + xsd_ns + "duration>";
  CHECK(to_sparql(range_pattern(dg, "Thing", "d", dur), dg).filters[0] ==
        "?v1 >= \"PT3540.00S\"" + du + " && ?v1 <= \"PT3660.00S\"" + du);
  auto neg = mixture({{1.0, 0.0, 100.0}}, true, std::string(xsd::duration));
  CHECK(to_sparql(range_pattern(dg, "Thing", "d", neg), dg).filters[0] ==
        "?v1 >= \"-PT10.00S\"" + du + " && ?v1 <= \"PT10.00S\"" + du);

  auto tm = mixture({{1.0, 43200.0, 3600.0 * 3600.0}}, true, std::string(xsd::time));
  auto tg = build_graph(typed_values("t", {Resource::literal("12:00:00", std::string(xsd::time))}));
  std::string ti = "^^<" + xsd_ns + "time>";
  CHECK(to_sparql(range_pattern(tg, "Thing", "t", tm), tg).filters[0] ==
        "?v1 >= \"11:00:00.00Z\"" + ti + " && ?v1 <= \"13:00:00.00Z\"" + ti);
  // Clock bounds stay within one day.
  auto wide = mixture({{1.0, 3600.0, 7200.0 * 7200.0}}, true, std::string(xsd::time));
  CHECK(to_sparql(range_pattern(tg, "Thing", "t", wide), tg).filters[0] ==
        "?v1 >= \"00:00:00.00Z\"" + ti + " && ?v1 <= \"03:00:00.00Z\"" + ti);
}

TEST_CASE("regex filters are anchored and escaped") {
  std::vector<Resource> names{Resource::literal("anna maria"), Resource::literal("o'neil.x\\y\"z"),
                              Resource::literal("bob")};
  auto g = build_graph(typed_values("name", names));
  ReferenceEngine engine(typed_values("name", names));

  auto spaced = std::make_shared<const RangeModel>(RangeModel{RegexRange{value_regex("anna maria")}});
  auto q = to_sparql(range_pattern(g, "Thing", "name", spaced), g);
  REQUIRE(q.filters.size() == 1);
  CHECK(q.filters[0] == R"(REGEX(?v1, "^[a-z]{4}\\s[a-z]{5}$"))");
  CHECK(engine_roots(engine, q.render()) == std::set<std::string>{"<" + ex + "x0>"});

  auto odd = std::make_shared<const RangeModel>(RangeModel{RegexRange{value_regex("o'neil.x\\y\"z")}});
  auto p = range_pattern(g, "Thing", "name", odd);
  auto text = to_sparql(p, g).render();
  CHECK(engine_roots(engine, text) == std::set<std::string>{"<" + ex + "x1>"});
  CHECK(domain_roots(g, p) == engine_roots(engine, text));
}

TEST_CASE("datatype filters") {
  auto g = build_graph(typed_values("v", {Resource::literal("3", std::string(xsd::integer)), Resource::literal("x")}));
  GraphPattern p;
  VarIndex root = p.add_variable({ObjectTypeVar{id_of(g, "Thing")}});
  VarIndex d = p.add_variable({DataTypeVar{*g.find_iri(xsd::integer)}});
  p.clauses.push_back({id_of(g, "v"), root, d});
  p.domains = compute_domains(g, p);
  auto q = to_sparql(p, g);
  REQUIRE(q.filters.size() == 1);
  CHECK(q.filters[0] == "DATATYPE(?v1) = <" + xsd_ns + "integer>");
  ReferenceEngine engine(typed_values("v", {Resource::literal("3", std::string(xsd::integer)), Resource::literal("x")}));
  CHECK(engine_roots(engine, q.render()) == std::set<std::string>{"<" + ex + "x0>"});
}

TEST_CASE("queries agree with domains on random patterns") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int gi = 0; gi < 6; ++gi) {
    auto triples = random_graph(rng, RandomGraphShape{});
    auto g = build_graph(triples);
    ReferenceEngine engine(triples);
    for (int pi = 0; pi < 25; ++pi) {
      auto p = random_pattern(rng, g, 1 + pi % 4);
      if (p.clauses.empty()) continue;
      p.domains = compute_domains(g, p);
      auto text = to_sparql(p, g).render();
      CHECK_MESSAGE(engine_roots(engine, text) == domain_roots(g, p), text);
      ++checked;
    }
  }
  CHECK(checked > 100);
}
