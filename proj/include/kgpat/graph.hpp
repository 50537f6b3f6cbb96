#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgpat/rdf.hpp"

namespace kgpat {

using ResourceId = std::uint32_t;

/// Sorted, duplicate-free list of ids. All domain arithmetic runs on these.
using IdSet = std::vector<ResourceId>;

IdSet intersect(const IdSet& a, const IdSet& b);
bool contains(const IdSet& s, ResourceId id);
bool is_subset(const IdSet& sub, const IdSet& super);

struct Assertion {
  ResourceId predicate;
  ResourceId head;
  ResourceId tail;

  friend bool operator==(const Assertion&, const Assertion&) = default;
  friend auto operator<=>(const Assertion&, const Assertion&) = default;
};

enum class DatatypeClass { Numeric, Temporal, Textual, Other };

DatatypeClass classify_datatype(std::string_view datatype);
std::string_view to_string(DatatypeClass c);

/// Bijection between RDF terms and dense ids, issued in first-seen order.
class Dictionary {
 public:
  ResourceId encode(const Resource& r);
  std::optional<ResourceId> find(const Resource& r) const;
  const Resource& decode(ResourceId id) const { return resources_.at(id); }
  std::size_t size() const { return resources_.size(); }

 private:
  std::vector<Resource> resources_;
  std::unordered_map<Resource, ResourceId, ResourceHash> ids_;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable, dictionary-encoded labelled multidigraph with the indexes the
/// miner needs. Safe to share across threads once built.
class KnowledgeGraph {
 public:
  const Dictionary& dictionary() const { return dict_; }
  const Resource& resource(ResourceId id) const { return dict_.decode(id); }
  std::optional<ResourceId> find(const Resource& r) const { return dict_.find(r); }
  std::optional<ResourceId> find_iri(const std::string& iri) const { return dict_.find(Resource::iri(iri)); }

  /// Deduplicated, sorted by (predicate, head, tail).
  const std::vector<Assertion>& assertions() const { return by_head_; }
  std::optional<ResourceId> type_predicate() const { return type_predicate_; }

  const std::map<ResourceId, IdSet>& type_index() const { return type_index_; }
  const std::map<ResourceId, IdSet>& datatype_index() const { return datatype_index_; }
  const std::map<std::pair<ResourceId, ResourceId>, std::vector<Assertion>>& pred_index() const {
    return pred_index_;
  }

  const IdSet& entities_of_type(ResourceId type) const;
  const IdSet& literals_of_datatype(ResourceId datatype) const;
  /// Types asserted for an entity (sorted); empty if untyped or a literal.
  const IdSet& types_of(ResourceId entity) const;
  /// Datatype id of a literal; nullopt for entities.
  std::optional<ResourceId> datatype_of(ResourceId literal) const;
  DatatypeClass datatype_class_of(ResourceId literal) const;

  const IdSet& predicates() const { return predicates_; }
  const IdSet& literals() const { return literals_; }

  /// Assertions p(head, *) sorted by tail.
  std::span<const Assertion> out_edges(ResourceId predicate, ResourceId head) const;
  /// Assertions p(*, tail) sorted by head.
  std::span<const Assertion> in_edges(ResourceId predicate, ResourceId tail) const;
  bool has_assertion(ResourceId predicate, ResourceId head, ResourceId tail) const;

  friend KnowledgeGraph build_graph(const std::vector<RawTriple>& triples, const std::string& type_predicate);

 private:
  Dictionary dict_;
  std::vector<Assertion> by_head_;  // (p, h, t)
  std::vector<Assertion> by_tail_;  // (p, t, h)
  std::optional<ResourceId> type_predicate_;
  std::map<ResourceId, IdSet> type_index_;
  std::map<ResourceId, IdSet> datatype_index_;
  std::map<std::pair<ResourceId, ResourceId>, std::vector<Assertion>> pred_index_;
  std::unordered_map<ResourceId, IdSet> types_of_;
  std::unordered_map<ResourceId, ResourceId> literal_datatype_;
  IdSet predicates_;
  IdSet literals_;
};

/// Builds the graph. Throws GraphError when a subject is a literal.
KnowledgeGraph build_graph(const std::vector<RawTriple>& triples, const std::string& type_predicate = rdf::type);

}  // namespace kgpat
