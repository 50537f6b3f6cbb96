#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kgpat/graph.hpp"
#include "kgpat/range_model.hpp"

namespace kgpat {

using VarIndex = std::uint32_t;

struct ObjectTypeVar {
  ResourceId type;
  friend bool operator==(const ObjectTypeVar&, const ObjectTypeVar&) = default;
};

struct DataTypeVar {
  ResourceId datatype;
  friend bool operator==(const DataTypeVar&, const DataTypeVar&) = default;
};

struct ValueRangeVar {
  std::shared_ptr<const RangeModel> range;
  /// Literals accepted by `range`, cached when the variable is created.
  /// Not part of the variable's identity.
  std::shared_ptr<const IdSet> universe;
  friend bool operator==(const ValueRangeVar& a, const ValueRangeVar& b) {
    return a.range == b.range || (a.range && b.range && *a.range == *b.range);
  }
};

struct Variable {
  std::variant<ObjectTypeVar, DataTypeVar, ValueRangeVar> kind;

  bool is_object() const { return std::holds_alternative<ObjectTypeVar>(kind); }
  bool is_value_range() const { return std::holds_alternative<ValueRangeVar>(kind); }
  ResourceId object_type() const { return std::get<ObjectTypeVar>(kind).type; }

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Constant {
  ResourceId id;
  friend bool operator==(const Constant&, const Constant&) = default;
};

using Tail = std::variant<VarIndex, Constant>;

/// p(head, tail). The head is always a variable of the owning pattern.
struct Clause {
  ResourceId predicate;
  VarIndex head;
  Tail tail;

  bool has_variable_tail() const { return std::holds_alternative<VarIndex>(tail); }
  VarIndex tail_var() const { return std::get<VarIndex>(tail); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// A conjunction of clauses forming a tree over variables rooted at
/// variable 0. `domains[v]` holds the resources variable v can take in some
/// satisfying assignment; support is the size of the root domain.
struct GraphPattern {
  std::vector<Variable> variables;
  std::vector<Clause> clauses;
  std::vector<IdSet> domains;

  static constexpr VarIndex root = 0;

  std::size_t support() const { return domains.empty() ? 0 : domains[root].size(); }
  ResourceId root_type() const { return variables.at(root).object_type(); }

  VarIndex add_variable(Variable v);
  /// Number of clauses headed at `v`.
  std::size_t out_degree(VarIndex v) const;
  /// Clause whose tail introduces `v`; nullopt for the root.
  std::optional<std::size_t> introducing_clause(VarIndex v) const;
  /// Non-root object-type variables that head no clause yet.
  std::vector<VarIndex> open_leaves() const;
  /// Hops from the root along clause edges.
  int level(VarIndex v) const;
};

enum class Violation { None, Empty, HeadNotObjectType, Disconnected, NonTerminalTail, NotATree };

std::string_view to_string(Violation v);

/// First violated validity rule, in the order head kind, connectivity,
/// non-terminal tail kind, tree shape.
Violation validate(const GraphPattern& pattern);

struct PatternMetrics {
  int depth = 0;
  int length = 0;
  int width = 0;
  friend bool operator==(const PatternMetrics&, const PatternMetrics&) = default;
};

/// depth: longest path in hops on the undirected pattern graph whose nodes
/// are variables, constant occurrences and one distribution node per
/// value-range variable. length: clause count. width: max clauses per head.
PatternMetrics metrics(const GraphPattern& pattern);

/// Formula string invariant under clause order and variable numbering.
std::string canonical_string(const GraphPattern& pattern, const Dictionary& dict);

struct CanonicalForm {
  std::string text;
  /// variables[k] is the variable printed as ?vk.
  std::vector<VarIndex> variables;
  /// Clause indices in printed order.
  std::vector<std::size_t> clauses;
};

CanonicalForm canonical_form(const GraphPattern& pattern, const Dictionary& dict);

/// Sort key of a single clause shape p(·, tail) used for ordering candidates.
std::string clause_shape_key(const GraphPattern& pattern, const Clause& clause, const Dictionary& dict);

/// Copy of `pattern` without clause `clause_index` and everything below its
/// tail. Variables are renumbered, order preserved; domains are cleared.
/// `remap`, when given, receives old index -> new index for kept variables.
GraphPattern without_subtree(const GraphPattern& pattern, std::size_t clause_index,
                             std::vector<VarIndex>* remap = nullptr);

/// Indices of clauses in the subtree rooted at clause `clause_index`,
/// including it.
std::vector<std::size_t> subtree_clauses(const GraphPattern& pattern, std::size_t clause_index);

}  // namespace kgpat
