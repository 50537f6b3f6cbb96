#include "doctest.h"

#include <filesystem>

#include "fixtures.hpp"
#include "kgpat/base_patterns.hpp"
#include "kgpat/miner.hpp"
#include "kgpat/serialize.hpp"
#include "kgpat/sparql.hpp"

using namespace kgpat;
using namespace kgpat::testing;
using nlohmann::json;

namespace {

struct Mined {
  KnowledgeGraph graph;
  PatternStore store;
  DiscoveryRun run;
};

Mined mine_small() {
  Mined m;
  m.graph = build_graph(fixture_triples("small.nt"));
  BaseOptions b;
  b.min_support = 1;
  b.min_samples = 1;
  MinerOptions o;
  o.min_support = 1;
  o.max_depth = 1;
  m.store = discover(m.graph, compute_base_patterns(m.graph, b), o);
  m.run.inputs = {{"small.nt", sha256_hex(read_text(fixture_path("small.nt")))}};
  m.run.min_support = 1;
  m.run.max_depth = 1;
  m.run.type_predicate = std::string(rdf::type);
  m.run.min_samples = 1;
  m.run.last_complete_depth = m.store.last_complete_generation;
  return m;
}

json small_document() {
  static const json doc = [] {
    auto m = mine_small();
    return pattern_document(m.store, m.run, m.graph);
  }();
  return doc;
}

std::string error_of(const json& doc) {
  try {
    validate_document(doc);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kgpat_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("sha-256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("run id depends on every serialized setting") {
  DiscoveryRun a;
  a.inputs = {{"x.nt", sha256_hex("x")}};
  DiscoveryRun b = a;
  CHECK(a.run_id() == b.run_id());
  CHECK(a.run_id().size() == 32);
  CHECK(a.to_json()["runId"] == a.run_id());
  b.seed = 1;
  CHECK(a.run_id() != b.run_id());
  b = a;
  b.inputs[0].sha256 = sha256_hex("y");
  CHECK(a.run_id() != b.run_id());
  b = a;
  b.partial = true;
  CHECK(a.run_id() != b.run_id());
  CHECK(b.to_json()["status"] == "partial");
}

TEST_CASE("document layout") {
  auto m = mine_small();
  auto doc = pattern_document(m.store, m.run, m.graph);
  REQUIRE(m.store.patterns.size() > 5);
  CHECK(doc["patterns"].size() == m.store.patterns.size());
  CHECK(error_of(doc).empty());
  REQUIRE(doc["provenance"].size() == 1);
  CHECK(doc["provenance"][0]["event"] == "discovery");
  CHECK(doc["provenance"][0]["runId"] == m.run.run_id());
  CHECK(doc["provenance"][0]["patternCount"] == m.store.patterns.size());
  for (std::size_t i = 0; i < m.store.patterns.size(); ++i) {
    const auto& p = m.store.patterns[i];
    const auto& r = doc["patterns"][i];
    CHECK(r["id"] == p.id);
    CHECK(r["canonical"] == p.canonical);
    CHECK(r["support"] == p.pattern.domains[GraphPattern::root].size());
    CHECK(r["generation"] == p.generation);
    CHECK(r["parentId"] == (p.parent_id ? json(*p.parent_id) : json(nullptr)));
    CHECK(r["graph"]["edges"].size() == p.pattern.clauses.size());
  }
  // Canonical text: sorted keys, stable across reloads.
  auto text = dump_document(doc);
  CHECK(text.back() == '\n');
  CHECK(dump_document(parse_document(text)) == text);
}

TEST_CASE("schema errors name the field") {
  auto doc = small_document();
  json bad = doc;
  bad.erase("run");
  CHECK(error_of(bad) == "$.run: missing");
  bad = doc;
  bad["patterns"][1]["support"] = "3";
  CHECK(error_of(bad) == "$.patterns[1].support: expected integer");
  bad = doc;
  bad["patterns"][0]["graph"]["nodes"][0].erase("label");
  CHECK(error_of(bad) == "$.patterns[0].graph.nodes[0].label: missing");
  bad = doc;
  bad["provenance"] = json::object();
  CHECK(error_of(bad) == "$.provenance: expected array");
  CHECK_THROWS_AS(parse_document("{\"run\": "), SchemaError);
}

TEST_CASE("lineage is checked on load") {
  auto doc = small_document();
  json forged = doc;
  forged["run"]["hyperparameters"]["seed"] = 99;
  CHECK_THROWS_AS(parse_document(dump_document(forged)), LineageError);
  forged = doc;
  forged["provenance"][0]["runId"] = "0";
  CHECK_THROWS_AS(parse_document(dump_document(forged)), LineageError);
  forged = doc;
  forged["provenance"] = json::array();
  CHECK_THROWS_AS(parse_document(dump_document(forged)), LineageError);
}

TEST_CASE("facet filter") {
  json p = {{"support", 4}, {"depth", 2}, {"length", 3}, {"width", 2}, {"sparql", "SELECT ?v0 WHERE { ?v0 <x:Gender> ?v1 }"},
            {"graph", {{"nodes", json::array({{{"id", "v0"}, {"kind", "objectType"}, {"label", "<x:Person>"}}})}}}};
  FacetFilter f;
  CHECK(f.matches(p));
  f.support_min = 4;
  f.support_max = 4;
  CHECK(f.matches(p));
  f.support_min = 5;
  CHECK_FALSE(f.matches(p));
  f = {};
  f.depth_max = 1;
  CHECK_FALSE(f.matches(p));
  f = {};
  f.length_min = 3;
  f.width_max = 2;
  CHECK(f.matches(p));
  f = {};
  f.full_text = "gENDER";
  CHECK(f.matches(p));
  f.full_text = "person";
  CHECK(f.matches(p));
  f.full_text = "certificate";
  CHECK_FALSE(f.matches(p));
  f.full_text = "";
  f.width_min = 3;
  CHECK_FALSE(f.matches(p));
}

TEST_CASE("selection events chain") {
  auto doc = small_document();
  FacetFilter f;
  f.length_min = 2;
  auto once = append_selection_provenance(doc, f, "2026-01-02T03:04:05Z");
  std::vector<json> expected;
  for (const auto& p : doc["patterns"]) {
    if (p["length"].get<int>() >= 2) expected.push_back(p);
  }
  CHECK(once["patterns"] == json(expected));
  CHECK(once["run"] == doc["run"]);
  REQUIRE(once["provenance"].size() == 2);
  const auto& e = once["provenance"][1];
  CHECK(e["event"] == "selection");
  CHECK(e["sequence"] == 1);
  CHECK(e["timestamp"] == "2026-01-02T03:04:05Z");
  CHECK(e["before"] == doc["patterns"].size());
  CHECK(e["after"] == expected.size());
  CHECK(e["filter"]["length"] == json::array({2, nullptr}));
  CHECK(e["previous"] == sha256_hex(doc["provenance"][0].dump()));

  FacetFilter g;
  g.full_text = "rdf-syntax";
  auto twice = append_selection_provenance(once, g, "2026-01-02T03:05:00Z");
  REQUIRE(twice["provenance"].size() == 3);
  CHECK(twice["provenance"][2]["previous"] == sha256_hex(once["provenance"][1].dump()));
  CHECK(twice["provenance"][2]["before"] == expected.size());
  CHECK_NOTHROW(parse_document(dump_document(twice)));

  json tampered = twice;
  tampered["provenance"][1]["after"] = 0;
  CHECK_THROWS_AS(parse_document(dump_document(tampered)), LineageError);
  CHECK_THROWS_AS(append_selection_provenance(tampered, g, "t"), LineageError);
}

TEST_CASE("rdf export") {
  auto m = mine_small();
  auto text = pattern_ntriples(m.store, m.run, m.graph);
  auto parsed = parse_ntriples(text);
  CHECK(parsed.skipped_lines == 0);
  std::size_t parents = 0;
  for (const auto& p : m.store.patterns) parents += p.parent_id ? 1 : 0;
  CHECK(parents > 0);
  CHECK(run_triple_count(m.run) == 19);
  CHECK(parsed.triples.size() == 9 * m.store.patterns.size() + parents + run_triple_count(m.run) + 1);

  const auto& last = parsed.triples.back();
  CHECK(last.subject.lexical == std::string(resource_ns) + m.run.run_id());
  CHECK(last.predicate.lexical == std::string(vocab_ns) + "complete");
  CHECK(last.object.lexical == "true");

  // Every pattern's SPARQL text survives as a literal.
  std::size_t queries = 0;
  for (const auto& t : parsed.triples) {
    if (t.predicate.lexical != std::string(vocab_ns) + "sparql") continue;
    CHECK(t.object.lexical == to_sparql(m.store.patterns[queries].pattern, m.graph).render());
    ++queries;
  }
  CHECK(queries == m.store.patterns.size());
}

TEST_CASE("atomic writes") {
  auto dir = scratch_dir("atomic");
  auto path = (dir / "out.json").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second\n");
  CHECK(read_text(path) == "second\n");
  CHECK_FALSE(std::filesystem::exists(path + ".partial"));
  CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "out.json").string(), "x"), IoError);
  std::filesystem::remove_all(dir);
}
