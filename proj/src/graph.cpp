#include "kgpat/graph.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace kgpat {

IdSet intersect(const IdSet& a, const IdSet& b) {
  IdSet out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const IdSet& s, ResourceId id) { return std::binary_search(s.begin(), s.end(), id); }

bool is_subset(const IdSet& sub, const IdSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

DatatypeClass classify_datatype(std::string_view dt) {
  if (!dt.starts_with(xsd::ns)) {
    return dt == rdf::langString ? DatatypeClass::Textual : DatatypeClass::Other;
  }
  std::string_view local = dt.substr(xsd::ns.size());
  static constexpr std::array<std::string_view, 16> numeric = {
      "integer", "decimal", "float", "double", "int", "long", "short", "byte",
      "nonNegativeInteger", "nonPositiveInteger", "positiveInteger", "negativeInteger",
      "unsignedLong", "unsignedInt", "unsignedShort", "unsignedByte"};
  static constexpr std::array<std::string_view, 7> temporal = {
      "date", "dateTime", "gYear", "gYearMonth", "gMonthDay", "time", "duration"};
  if (std::find(numeric.begin(), numeric.end(), local) != numeric.end()) return DatatypeClass::Numeric;
  if (std::find(temporal.begin(), temporal.end(), local) != temporal.end()) return DatatypeClass::Temporal;
  if (local == "string" || local == "normalizedString" || local == "token") return DatatypeClass::Textual;
  return DatatypeClass::Other;
}

std::string_view to_string(DatatypeClass c) {
  switch (c) {
    case DatatypeClass::Numeric: return "numeric";
    case DatatypeClass::Temporal: return "temporal";
    case DatatypeClass::Textual: return "textual";
    case DatatypeClass::Other: return "other";
  }
  return "other";
}

ResourceId Dictionary::encode(const Resource& r) {
  auto [it, inserted] = ids_.try_emplace(r, static_cast<ResourceId>(resources_.size()));
  if (inserted) resources_.push_back(r);
  return it->second;
}

std::optional<ResourceId> Dictionary::find(const Resource& r) const {
  auto it = ids_.find(r);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {
const IdSet kEmpty;
}

const IdSet& KnowledgeGraph::entities_of_type(ResourceId type) const {
  auto it = type_index_.find(type);
  return it == type_index_.end() ? kEmpty : it->second;
}

const IdSet& KnowledgeGraph::literals_of_datatype(ResourceId datatype) const {
  auto it = datatype_index_.find(datatype);
  return it == datatype_index_.end() ? kEmpty : it->second;
}

const IdSet& KnowledgeGraph::types_of(ResourceId entity) const {
  auto it = types_of_.find(entity);
  return it == types_of_.end() ? kEmpty : it->second;
}

std::optional<ResourceId> KnowledgeGraph::datatype_of(ResourceId literal) const {
  auto it = literal_datatype_.find(literal);
  if (it == literal_datatype_.end()) return std::nullopt;
  return it->second;
}

DatatypeClass KnowledgeGraph::datatype_class_of(ResourceId literal) const {
  const Resource& r = dict_.decode(literal);
  if (!r.is_literal()) return DatatypeClass::Other;
  return classify_datatype(r.datatype);
}

std::span<const Assertion> KnowledgeGraph::out_edges(ResourceId predicate, ResourceId head) const {
  auto lo = std::lower_bound(by_head_.begin(), by_head_.end(), Assertion{predicate, head, 0});
  auto hi = lo;
  while (hi != by_head_.end() && hi->predicate == predicate && hi->head == head) ++hi;
  return {lo, hi};
}

std::span<const Assertion> KnowledgeGraph::in_edges(ResourceId predicate, ResourceId tail) const {
  auto key = [](const Assertion& a) { return std::tuple(a.predicate, a.tail, a.head); };
  auto lo = std::lower_bound(by_tail_.begin(), by_tail_.end(), std::tuple(predicate, tail, ResourceId{0}),
                             [&](const Assertion& a, const auto& k) { return key(a) < k; });
  auto hi = lo;
  while (hi != by_tail_.end() && hi->predicate == predicate && hi->tail == tail) ++hi;
  return {lo, hi};
}

bool KnowledgeGraph::has_assertion(ResourceId predicate, ResourceId head, ResourceId tail) const {
  return std::binary_search(by_head_.begin(), by_head_.end(), Assertion{predicate, head, tail});
}

KnowledgeGraph build_graph(const std::vector<RawTriple>& triples, const std::string& type_predicate) {
  KnowledgeGraph g;
  g.by_head_.reserve(triples.size());
  for (const auto& t : triples) {
    if (t.subject.is_literal()) {
      throw GraphError("literal in subject position: " + to_ntriples(t.subject));
    }
    if (t.predicate.kind != TermKind::Iri) {
      throw GraphError("predicate is not an IRI: " + to_ntriples(t.predicate));
    }
    ResourceId s = g.dict_.encode(t.subject);
    ResourceId p = g.dict_.encode(t.predicate);
    ResourceId o = g.dict_.encode(t.object);
    g.by_head_.push_back({p, s, o});
    if (t.object.is_literal()) {
      ResourceId dt = g.dict_.encode(Resource::iri(t.object.datatype));
      g.literal_datatype_.emplace(o, dt);
    }
  }
  std::sort(g.by_head_.begin(), g.by_head_.end());
  g.by_head_.erase(std::unique(g.by_head_.begin(), g.by_head_.end()), g.by_head_.end());
  g.by_tail_ = g.by_head_;
  std::sort(g.by_tail_.begin(), g.by_tail_.end(), [](const Assertion& a, const Assertion& b) {
    return std::tie(a.predicate, a.tail, a.head) < std::tie(b.predicate, b.tail, b.head);
  });

  g.type_predicate_ = g.dict_.find(Resource::iri(type_predicate));
  for (const auto& a : g.by_head_) {
    if (g.predicates_.empty() || g.predicates_.back() != a.predicate) g.predicates_.push_back(a.predicate);
    if (g.type_predicate_ && a.predicate == *g.type_predicate_ && !g.dict_.decode(a.tail).is_literal()) {
      g.type_index_[a.tail].push_back(a.head);
      g.types_of_[a.head].push_back(a.tail);
    }
  }
  for (auto& [lit, dt] : g.literal_datatype_) {
    g.datatype_index_[dt].push_back(lit);
    g.literals_.push_back(lit);
  }
  auto normalize = [](IdSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  };
  for (auto& [_, s] : g.type_index_) normalize(s);
  for (auto& [_, s] : g.datatype_index_) normalize(s);
  for (auto& [_, s] : g.types_of_) normalize(s);
  normalize(g.literals_);

  for (const auto& a : g.by_head_) {
    for (ResourceId t : g.types_of(a.head)) g.pred_index_[{a.predicate, t}].push_back(a);
  }
  return g;
}

}  // namespace kgpat
