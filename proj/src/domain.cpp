#include "kgpat/domain.hpp"

#include <algorithm>

namespace kgpat {

IdSet kind_domain(const KnowledgeGraph& g, const Variable& v) {
  return std::visit(
      [&g](const auto& k) -> IdSet {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ObjectTypeVar>) {
          return g.entities_of_type(k.type);
        } else if constexpr (std::is_same_v<K, DataTypeVar>) {
          return g.literals_of_datatype(k.datatype);
        } else {
          if (k.universe) return *k.universe;
          IdSet out;
          for (ResourceId lit : g.literals()) {
            if (membership(*k.range, g.resource(lit))) out.push_back(lit);
          }
          return out;
        }
      },
      v.kind);
}

namespace {

// Keeps heads h in `heads` with some p(h, t), t in `tails`.
IdSet semijoin_heads(const KnowledgeGraph& g, ResourceId p, const IdSet& heads, const IdSet& tails) {
  IdSet out;
  for (ResourceId h : heads) {
    for (const auto& a : g.out_edges(p, h)) {
      if (contains(tails, a.tail)) {
        out.push_back(h);
        break;
      }
    }
  }
  return out;
}

// Keeps tails t in `tails` with some p(h, t), h in `heads`.
IdSet semijoin_tails(const KnowledgeGraph& g, ResourceId p, const IdSet& heads, const IdSet& tails) {
  IdSet out;
  for (ResourceId t : tails) {
    for (const auto& a : g.in_edges(p, t)) {
      if (contains(heads, a.head)) {
        out.push_back(t);
        break;
      }
    }
  }
  return out;
}

// Variables in an order where every tail comes after its head.
std::vector<VarIndex> preorder(const GraphPattern& p) {
  std::vector<VarIndex> order{GraphPattern::root};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const auto& c : p.clauses) {
      if (c.head == order[k] && c.has_variable_tail()) order.push_back(c.tail_var());
    }
  }
  return order;
}

}  // namespace

std::vector<IdSet> reduce_domains(const KnowledgeGraph& g, const GraphPattern& p, std::vector<IdSet> d) {
  auto order = preorder(p);
  std::vector<std::vector<std::size_t>> children(p.variables.size());
  for (std::size_t i = 0; i < p.clauses.size(); ++i) children[p.clauses[i].head].push_back(i);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VarIndex v = *it;
    for (auto i : children[v]) {
      if (d[v].empty()) break;
      const Clause& c = p.clauses[i];
      if (c.has_variable_tail()) {
        d[v] = semijoin_heads(g, c.predicate, d[v], d[c.tail_var()]);
      } else {
        ResourceId t = std::get<Constant>(c.tail).id;
        IdSet heads;
        for (const auto& a : g.in_edges(c.predicate, t)) heads.push_back(a.head);
        d[v] = intersect(d[v], heads);
      }
    }
  }
  for (VarIndex v : order) {
    for (auto i : children[v]) {
      const Clause& c = p.clauses[i];
      if (c.has_variable_tail()) {
        d[c.tail_var()] = semijoin_tails(g, c.predicate, d[v], d[c.tail_var()]);
      }
    }
  }
  return d;
}

std::vector<IdSet> compute_domains(const KnowledgeGraph& g, const GraphPattern& p) {
  std::vector<IdSet> d;
  d.reserve(p.variables.size());
  for (const auto& v : p.variables) d.push_back(kind_domain(g, v));
  return reduce_domains(g, p, std::move(d));
}

std::vector<IdSet> propagate_domains(const KnowledgeGraph& g, const GraphPattern& parent, const GraphPattern& child) {
  std::vector<IdSet> d = parent.domains;
  d.resize(parent.variables.size());
  for (std::size_t v = parent.variables.size(); v < child.variables.size(); ++v) {
    d.push_back(kind_domain(g, child.variables[v]));
  }
  return reduce_domains(g, child, std::move(d));
}

bool clause_is_redundant(const KnowledgeGraph& g, const GraphPattern& p, std::size_t clause_index) {
  std::vector<VarIndex> remap;
  GraphPattern rest = without_subtree(p, clause_index, &remap);
  if (rest.clauses.empty()) return false;
  VarIndex h = p.clauses[clause_index].head;
  auto full = p.domains.empty() ? compute_domains(g, p) : p.domains;
  auto reduced = compute_domains(g, rest);
  return full[h].size() == reduced[remap[h]].size();
}

}  // namespace kgpat
