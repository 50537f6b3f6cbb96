#include "kgpat/serialize.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kgpat/sparql.hpp"

namespace kgpat {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

json run_body(const DiscoveryRun& r) {
  json j;
  j["toolVersion"] = tool_version;
  j["inputs"] = json::array();
  for (const auto& in : r.inputs) j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}});
  j["hyperparameters"] = {
      {"minSupport", r.min_support},
      {"maxDepth", r.max_depth},
      {"maxLength", r.max_length},
      {"maxWidth", r.max_width},
      {"seed", r.seed},
      {"typePredicate", r.type_predicate},
      {"numericRanges", r.numeric_ranges},
      {"temporalRanges", r.temporal_ranges},
      {"textualRanges", r.textual_ranges},
      {"modesMax", r.modes_max},
      {"restarts", r.restarts},
      {"minSamples", r.min_samples},
      {"redundancyFilter", r.redundancy_filter},
  };
  j["lastCompleteDepth"] = r.last_complete_depth;
  j["status"] = r.partial ? "partial" : "complete";
  return j;
}

std::string hash_run(json run) {
  run.erase("runId");
  return sha256_hex(run.dump()).substr(0, 32);
}

std::string range_label(const RangeModel& r) {
  if (!r.is_mixture()) return "/^" + r.regex().regex.render() + "$/";
  std::string out;
  char buf[96];
  for (const auto& c : r.mixture().components) {
    std::snprintf(buf, sizeof buf, "%sN(%.6g, %.6g)", out.empty() ? "" : " | ", c.mean, c.variance);
    out += buf;
  }
  return out;
}

json graph_of(const GraphPattern& p, const KnowledgeGraph& g) {
  const auto& dict = g.dictionary();
  auto form = canonical_form(p, dict);
  std::vector<std::string> ids(p.variables.size());
  json nodes = json::array(), edges = json::array();
  for (std::size_t k = 0; k < form.variables.size(); ++k) {
    VarIndex v = form.variables[k];
    ids[v] = "v" + std::to_string(k);
    std::string kind, label;
    std::visit(
        [&](const auto& var) {
          using K = std::decay_t<decltype(var)>;
          if constexpr (std::is_same_v<K, ObjectTypeVar>) {
            kind = "objectType";
            label = dict.decode(var.type).lexical;
          } else if constexpr (std::is_same_v<K, DataTypeVar>) {
            kind = "dataType";
            label = dict.decode(var.datatype).lexical;
          } else {
            kind = "valueRange";
            label = range_label(*var.range);
          }
        },
        p.variables[v].kind);
    nodes.push_back({{"id", ids[v]}, {"kind", kind}, {"label", label}});
  }
  std::size_t constants = 0;
  for (auto i : form.clauses) {
    const Clause& c = p.clauses[i];
    std::string to;
    if (c.has_variable_tail()) {
      to = ids[c.tail_var()];
    } else {
      const Resource& r = dict.decode(std::get<Constant>(c.tail).id);
      to = "c" + std::to_string(constants++);
      nodes.push_back({{"id", to}, {"kind", r.is_literal() ? "literal" : "entity"}, {"label", to_ntriples(r)}});
    }
    edges.push_back({{"from", ids[c.head]}, {"to", to}, {"predicate", dict.decode(c.predicate).lexical}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace


json DiscoveryRun::to_json() const {
  json j = run_body(*this);
  j["runId"] = hash_run(j);
  return j;
}

std::string DiscoveryRun::run_id() const { return hash_run(run_body(*this)); }

json pattern_record(const StoredPattern& p, const KnowledgeGraph& g) {
  json j;
  j["id"] = p.id;
  j["canonical"] = p.canonical;
  j["sparql"] = to_sparql(p.pattern, g).render();
  j["support"] = p.pattern.support();
  j["depth"] = p.metrics.depth;
  j["length"] = p.metrics.length;
  j["width"] = p.metrics.width;
  j["generation"] = p.generation;
  j["parentId"] = p.parent_id ? json(*p.parent_id) : json(nullptr);
  j["graph"] = graph_of(p.pattern, g);
  return j;
}

json pattern_document(const PatternStore& store, const DiscoveryRun& run, const KnowledgeGraph& g) {
  json doc;
  doc["run"] = run.to_json();
  doc["patterns"] = json::array();
  for (const auto& p : store.patterns) doc["patterns"].push_back(pattern_record(p, g));
  doc["provenance"] = json::array({{
      {"sequence", 0},
      {"event", "discovery"},
      {"runId", doc["run"]["runId"]},
      {"patternCount", store.patterns.size()},
      {"lastCompleteDepth", run.last_complete_depth},
      {"status", run.partial ? "partial" : "complete"},
  }});
  return doc;
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

namespace {

std::string iri(std::string_view s) { return "<" + std::string(s) + ">"; }
std::string vocab(std::string_view local) { return iri(std::string(vocab_ns) + std::string(local)); }

std::string literal(std::string_view lexical, std::string_view datatype = {}) {
  std::string out = "\"" + escape_string_literal(lexical) + "\"";
  if (!datatype.empty()) out += "^^<" + std::string(datatype) + ">";
  return out;
}

std::string integer(long long v) { return literal(std::to_string(v), xsd::integer); }
std::string boolean(bool v) { return literal(v ? "true" : "false", std::string(xsd::ns) + "boolean"); }

}  // namespace

std::size_t run_triple_count(const DiscoveryRun& run) { return 18 + run.inputs.size(); }

std::string pattern_ntriples(const PatternStore& store, const DiscoveryRun& run, const KnowledgeGraph& g) {
  const std::string id = run.run_id();
  const std::string run_iri = iri(std::string(resource_ns) + id);
  auto pattern_iri = [&](std::size_t n) { return iri(std::string(resource_ns) + id + "/pattern/" + std::to_string(n)); };
  std::string out;
  auto triple = [&out](const std::string& s, const std::string& p, const std::string& o) {
    out += s + " " + p + " " + o + " .\n";
  };
  const std::string type = iri(rdf::type);

  triple(run_iri, type, vocab("DiscoveryRun"));
  triple(run_iri, vocab("runId"), literal(id));
  triple(run_iri, vocab("toolVersion"), literal(tool_version));
  triple(run_iri, vocab("minSupport"), integer(static_cast<long long>(run.min_support)));
  triple(run_iri, vocab("maxDepth"), integer(run.max_depth));
  triple(run_iri, vocab("maxLength"), integer(run.max_length));
  triple(run_iri, vocab("maxWidth"), integer(run.max_width));
  triple(run_iri, vocab("seed"), literal(std::to_string(run.seed), xsd::integer));
  triple(run_iri, vocab("typePredicate"), iri(run.type_predicate));
  triple(run_iri, vocab("numericRanges"), boolean(run.numeric_ranges));
  triple(run_iri, vocab("temporalRanges"), boolean(run.temporal_ranges));
  triple(run_iri, vocab("textualRanges"), boolean(run.textual_ranges));
  triple(run_iri, vocab("modesMax"), integer(run.modes_max));
  triple(run_iri, vocab("restarts"), integer(run.restarts));
  triple(run_iri, vocab("minSamples"), integer(static_cast<long long>(run.min_samples)));
  triple(run_iri, vocab("redundancyFilter"), boolean(run.redundancy_filter));
  triple(run_iri, vocab("lastCompleteDepth"), integer(run.last_complete_depth));
  triple(run_iri, vocab("status"), literal(run.partial ? "partial" : "complete"));
  for (const auto& in : run.inputs) triple(run_iri, vocab("input"), literal("sha256:" + in.sha256 + " " + in.path));

  for (const auto& p : store.patterns) {
    auto s = pattern_iri(p.id);
    triple(s, type, vocab("Pattern"));
    triple(s, vocab("canonical"), literal(p.canonical));
    triple(s, vocab("sparql"), literal(to_sparql(p.pattern, g).render()));
    triple(s, vocab("support"), integer(static_cast<long long>(p.pattern.support())));
    triple(s, vocab("depth"), integer(p.metrics.depth));
    triple(s, vocab("length"), integer(p.metrics.length));
    triple(s, vocab("width"), integer(p.metrics.width));
    triple(s, vocab("generation"), integer(p.generation));
    triple(s, vocab("run"), run_iri);
    if (p.parent_id) triple(s, vocab("parent"), pattern_iri(*p.parent_id));
  }
  triple(run_iri, vocab("complete"), boolean(true));
  return out;
}

namespace {

[[noreturn]] void schema_fail(const std::string& field, const std::string& what) {
  throw SchemaError(field + ": " + what);
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "." + key, "missing");
  return *it;
}

void require_string(const json& obj, const std::string& path, const char* key) {
  if (!require(obj, path, key).is_string()) schema_fail(path + "." + key, "expected string");
}

void require_integer(const json& obj, const std::string& path, const char* key) {
  if (!require(obj, path, key).is_number_integer()) schema_fail(path + "." + key, "expected integer");
}

const json& require_array(const json& obj, const std::string& path, const char* key) {
  const json& a = require(obj, path, key);
  if (!a.is_array()) schema_fail(path + "." + key, "expected array");
  return a;
}

}  // namespace

void validate_document(const json& doc) {
  if (!doc.is_object()) schema_fail("$", "expected object");
  const json& run = require(doc, "$", "run");
  if (!run.is_object()) schema_fail("$.run", "expected object");
  require_string(run, "$.run", "runId");
  const json& patterns = require_array(doc, "$", "patterns");
  require_array(doc, "$", "provenance");
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const json& p = patterns[i];
    std::string path = "$.patterns[" + std::to_string(i) + "]";
    if (!p.is_object()) schema_fail(path, "expected object");
    for (const char* k : {"id", "support", "depth", "length", "width", "generation"}) require_integer(p, path, k);
    require_string(p, path, "canonical");
    require_string(p, path, "sparql");
    const json& parent = require(p, path, "parentId");
    if (!parent.is_null() && !parent.is_number_integer()) schema_fail(path + ".parentId", "expected integer or null");
    const json& graph = require(p, path, "graph");
    if (!graph.is_object()) schema_fail(path + ".graph", "expected object");
    const json& nodes = require_array(graph, path + ".graph", "nodes");
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      std::string np = path + ".graph.nodes[" + std::to_string(n) + "]";
      for (const char* k : {"id", "kind", "label"}) require_string(nodes[n], np, k);
    }
    const json& edges = require_array(graph, path + ".graph", "edges");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      std::string ep = path + ".graph.edges[" + std::to_string(e) + "]";
      for (const char* k : {"from", "to", "predicate"}) require_string(edges[e], ep, k);
    }
  }
}

namespace {

void check_lineage(const json& doc) {
  const json& run = doc["run"];
  std::string id = run["runId"].get<std::string>();
  if (hash_run(run) != id) throw LineageError("runId does not match the run record");
  const json& events = doc["provenance"];
  if (events.empty() || !events[0].is_object() || events[0].value("runId", "") != id) {
    throw LineageError("provenance does not start with a discovery event of run " + id);
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].value("previous", "") != sha256_hex(events[i - 1].dump())) {
      throw LineageError("provenance chain broken at event " + std::to_string(i));
    }
  }
}

}  // namespace

json parse_document(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("$: not valid JSON");
  validate_document(doc);
  check_lineage(doc);
  return doc;
}

bool FacetFilter::matches(const json& p) const {
  auto within = [&p](const char* key, const std::optional<std::int64_t>& lo, const std::optional<std::int64_t>& hi) {
    auto v = p.at(key).get<std::int64_t>();
    return (!lo || v >= *lo) && (!hi || v <= *hi);
  };
  if (!within("support", support_min, support_max) || !within("depth", depth_min, depth_max) ||
      !within("length", length_min, length_max) || !within("width", width_min, width_max)) {
    return false;
  }
  if (full_text.empty()) return true;
  std::string needle = lower(full_text);
  if (lower(p.at("sparql").get<std::string>()).find(needle) != std::string::npos) return true;
  for (const auto& n : p.at("graph").at("nodes")) {
    if (lower(n.at("label").get<std::string>()).find(needle) != std::string::npos) return true;
  }
  return false;
}

json FacetFilter::to_json() const {
  auto range = [](const std::optional<std::int64_t>& lo, const std::optional<std::int64_t>& hi) {
    return json::array({lo ? json(*lo) : json(nullptr), hi ? json(*hi) : json(nullptr)});
  };
  return {{"support", range(support_min, support_max)},
          {"depth", range(depth_min, depth_max)},
          {"length", range(length_min, length_max)},
          {"width", range(width_min, width_max)},
          {"fullText", full_text}};
}

json append_selection_provenance(const json& doc, const FacetFilter& filter, const std::string& timestamp) {
  validate_document(doc);
  check_lineage(doc);
  json out = doc;
  json kept = json::array();
  for (const auto& p : doc["patterns"]) {
    if (filter.matches(p)) kept.push_back(p);
  }
  const json& events = doc["provenance"];
  json event = {
      {"sequence", events.size()},
      {"event", "selection"},
      {"runId", doc["run"]["runId"]},
      {"timestamp", timestamp},
      {"filter", filter.to_json()},
      {"before", doc["patterns"].size()},
      {"after", kept.size()},
      {"previous", sha256_hex(events.back().dump())},
  };
  out["patterns"] = std::move(kept);
  out["provenance"].push_back(std::move(event));
  return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace kgpat
