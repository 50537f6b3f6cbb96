#pragma once

#include <vector>

#include "kgpat/graph.hpp"
#include "kgpat/pattern.hpp"

namespace kgpat {

/// Resources a variable may take before any clause applies: typed entities,
/// literals of a datatype, or literals accepted by a range model.
IdSet kind_domain(const KnowledgeGraph& g, const Variable& v);

/// Domains of every variable as projections of the pattern's satisfying
/// assignments, by a bottom-up then top-down semi-join pass over the tree.
std::vector<IdSet> compute_domains(const KnowledgeGraph& g, const GraphPattern& pattern);

/// Same result as compute_domains, starting from `initial` (one superset of
/// the true projection per variable, e.g. a parent's reduced domains plus the
/// kind domain of a new variable).
std::vector<IdSet> reduce_domains(const KnowledgeGraph& g, const GraphPattern& pattern, std::vector<IdSet> initial);

/// Domains of `child`, which is `parent` plus clauses whose new variables
/// were appended after the parent's. Reuses the parent's reduced domains.
std::vector<IdSet> propagate_domains(const KnowledgeGraph& g, const GraphPattern& parent, const GraphPattern& child);

/// True when removing clause `clause_index` and its subtree leaves a
/// non-empty pattern under which the clause head's domain is unchanged.
bool clause_is_redundant(const KnowledgeGraph& g, const GraphPattern& pattern, std::size_t clause_index);

}  // namespace kgpat
