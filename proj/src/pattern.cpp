#include "kgpat/pattern.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

namespace kgpat {

VarIndex GraphPattern::add_variable(Variable v) {
  variables.push_back(std::move(v));
  return static_cast<VarIndex>(variables.size() - 1);
}

std::size_t GraphPattern::out_degree(VarIndex v) const {
  return static_cast<std::size_t>(std::count_if(clauses.begin(), clauses.end(),
                                                [v](const Clause& c) { return c.head == v; }));
}

std::optional<std::size_t> GraphPattern::introducing_clause(VarIndex v) const {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (clauses[i].has_variable_tail() && clauses[i].tail_var() == v) return i;
  }
  return std::nullopt;
}

std::vector<VarIndex> GraphPattern::open_leaves() const {
  std::vector<bool> heads(variables.size(), false);
  for (const auto& c : clauses) heads[c.head] = true;
  std::vector<VarIndex> out;
  for (VarIndex v = 1; v < variables.size(); ++v) {
    if (variables[v].is_object() && !heads[v]) out.push_back(v);
  }
  return out;
}

int GraphPattern::level(VarIndex v) const {
  int hops = 0;
  while (v != root) {
    auto c = introducing_clause(v);
    if (!c) return -1;
    v = clauses[*c].head;
    ++hops;
  }
  return hops;
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::None: return "ok";
    case Violation::Empty: return "empty pattern";
    case Violation::HeadNotObjectType: return "clause head is not an object-type variable";
    case Violation::Disconnected: return "clauses are not connected to the root";
    case Violation::NonTerminalTail: return "non-terminal clause tail is not an object-type variable";
    case Violation::NotATree: return "variables do not form a rooted tree";
  }
  return "unknown";
}

Violation validate(const GraphPattern& p) {
  const auto n = p.variables.size();
  if (p.clauses.empty() || n == 0) return Violation::Empty;

  for (const auto& c : p.clauses) {
    if (c.head >= n || !p.variables[c.head].is_object()) return Violation::HeadNotObjectType;
  }

  std::vector<int> introduced(n, 0);
  for (const auto& c : p.clauses) {
    if (!c.has_variable_tail()) continue;
    if (c.tail_var() >= n) return Violation::Disconnected;
    ++introduced[c.tail_var()];
  }
  for (const auto& c : p.clauses) {
    if (c.head != GraphPattern::root && introduced[c.head] == 0) return Violation::Disconnected;
  }
  // Every variable must be reachable from the root.
  std::vector<bool> seen(n, false);
  seen[GraphPattern::root] = true;
  std::deque<VarIndex> queue{GraphPattern::root};
  while (!queue.empty()) {
    VarIndex v = queue.front();
    queue.pop_front();
    for (const auto& c : p.clauses) {
      if (c.head == v && c.has_variable_tail() && !seen[c.tail_var()]) {
        seen[c.tail_var()] = true;
        queue.push_back(c.tail_var());
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return Violation::Disconnected;

  for (const auto& c : p.clauses) {
    if (!c.has_variable_tail()) continue;
    VarIndex t = c.tail_var();
    bool non_terminal = std::any_of(p.clauses.begin(), p.clauses.end(),
                                    [t](const Clause& d) { return d.head == t; });
    if (non_terminal && !p.variables[t].is_object()) return Violation::NonTerminalTail;
  }

  if (introduced[GraphPattern::root] != 0) return Violation::NotATree;
  for (std::size_t v = 1; v < n; ++v) {
    if (introduced[v] != 1) return Violation::NotATree;
  }
  return Violation::None;
}

PatternMetrics metrics(const GraphPattern& p) {
  PatternMetrics m;
  m.length = static_cast<int>(p.clauses.size());
  for (VarIndex v = 0; v < p.variables.size(); ++v) {
    m.width = std::max(m.width, static_cast<int>(p.out_degree(v)));
  }

  std::vector<std::vector<std::size_t>> adj(p.variables.size());
  auto add_node = [&adj] {
    adj.emplace_back();
    return adj.size() - 1;
  };
  auto link = [&adj](std::size_t a, std::size_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (const auto& c : p.clauses) {
    link(c.head, c.has_variable_tail() ? c.tail_var() : add_node());
  }
  for (VarIndex v = 0; v < p.variables.size(); ++v) {
    if (p.variables[v].is_value_range()) link(v, add_node());
  }

  // Tree diameter by two sweeps.
  auto farthest = [&adj](std::size_t start) {
    std::vector<int> dist(adj.size(), -1);
    dist[start] = 0;
    std::deque<std::size_t> queue{start};
    std::size_t last = start;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      if (dist[u] > dist[last]) last = u;
      for (auto w : adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return std::pair{last, dist[last]};
  };
  if (!adj.empty()) m.depth = farthest(farthest(0).first).second;
  return m;
}

namespace {

std::string term(const Dictionary& dict, ResourceId id) { return to_ntriples(dict.decode(id)); }

std::string var_label(const GraphPattern& p, VarIndex v, const Dictionary& dict) {
  return std::visit(
      [&dict](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ObjectTypeVar>) return term(dict, k.type);
        else if constexpr (std::is_same_v<K, DataTypeVar>) return "^^" + term(dict, k.datatype);
        else return "~" + k.range->key();
      },
      p.variables[v].kind);
}

class Canonicalizer {
 public:
  Canonicalizer(const GraphPattern& p, const Dictionary& dict)
      : p_(p), dict_(dict), keys_(p.variables.size()), labels_(p.variables.size()), clause_keys_(p.clauses.size()) {
    children_.resize(p.variables.size());
    for (std::size_t i = 0; i < p.clauses.size(); ++i) children_[p.clauses[i].head].push_back(i);
  }

  const std::string& subtree_key(VarIndex v) {
    if (!keys_[v].empty()) return keys_[v];
    std::vector<const std::string*> parts;
    for (auto i : children_[v]) parts.push_back(&clause_key(i));
    std::sort(parts.begin(), parts.end(), [](const auto* a, const auto* b) { return *a < *b; });
    std::string k = label(v) + "{";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) k += ',';
      k += *parts[i];
    }
    keys_[v] = k + "}";
    return keys_[v];
  }

  const std::string& clause_key(std::size_t i) {
    if (!clause_keys_[i].empty()) return clause_keys_[i];
    const Clause& c = p_.clauses[i];
    std::string k = res(c.predicate) + "(";
    if (c.has_variable_tail()) k += "1?" + subtree_key(c.tail_var());
    else k += "0" + res(std::get<Constant>(c.tail).id);
    clause_keys_[i] = k + ")";
    return clause_keys_[i];
  }

  const std::string& label(VarIndex v) {
    if (labels_[v].empty()) labels_[v] = var_label(p_, v, dict_);
    return labels_[v];
  }

  const std::string& res(ResourceId id) {
    auto it = terms_.find(id);
    if (it == terms_.end()) it = terms_.emplace(id, term(dict_, id)).first;
    return it->second;
  }

  CanonicalForm render() {
    CanonicalForm form;
    std::vector<std::string> names(p_.variables.size());
    std::vector<std::string> decls, atoms;
    auto name_of = [&](VarIndex v) -> const std::string& {
      if (names[v].empty()) {
        names[v] = "?v" + std::to_string(decls.size());
        decls.push_back(names[v] + ":" + label(v));
        form.variables.push_back(v);
      }
      return names[v];
    };
    std::function<void(VarIndex)> visit = [&](VarIndex v) {
      const auto& order = children_[v];
      std::vector<std::size_t> idx(order.size());
      for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
      std::stable_sort(idx.begin(), idx.end(),
                       [&](auto a, auto b) { return clause_key(order[a]) < clause_key(order[b]); });
      for (auto j : idx) {
        const Clause& c = p_.clauses[order[j]];
        form.clauses.push_back(order[j]);
        std::string head = name_of(v);
        if (c.has_variable_tail()) {
          atoms.push_back(res(c.predicate) + "(" + head + ", " + name_of(c.tail_var()) + ")");
          visit(c.tail_var());
        } else {
          atoms.push_back(res(c.predicate) + "(" + head + ", " + res(std::get<Constant>(c.tail).id) + ")");
        }
      }
    };
    name_of(GraphPattern::root);
    visit(GraphPattern::root);
    for (std::size_t i = 0; i < decls.size(); ++i) form.text += (i ? " " : "") + decls[i];
    form.text += " |";
    for (std::size_t i = 0; i < atoms.size(); ++i) form.text += (i ? " & " : " ") + atoms[i];
    return form;
  }

 private:
  const GraphPattern& p_;
  const Dictionary& dict_;
  std::vector<std::string> keys_;
  std::vector<std::string> labels_;
  std::vector<std::string> clause_keys_;
  std::unordered_map<ResourceId, std::string> terms_;
  std::vector<std::vector<std::size_t>> children_;
};

}  // namespace

CanonicalForm canonical_form(const GraphPattern& pattern, const Dictionary& dict) {
  return Canonicalizer(pattern, dict).render();
}

std::string canonical_string(const GraphPattern& pattern, const Dictionary& dict) {
  return canonical_form(pattern, dict).text;
}

std::string clause_shape_key(const GraphPattern& pattern, const Clause& clause, const Dictionary& dict) {
  std::string k = term(dict, clause.predicate) + "(";
  if (clause.has_variable_tail()) k += "1" + var_label(pattern, clause.tail_var(), dict);
  else k += "0" + term(dict, std::get<Constant>(clause.tail).id);
  return k + ")";
}

std::vector<std::size_t> subtree_clauses(const GraphPattern& p, std::size_t clause_index) {
  std::vector<std::size_t> out{clause_index};
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Clause& c = p.clauses[out[k]];
    if (!c.has_variable_tail()) continue;
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      if (p.clauses[i].head == c.tail_var()) out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphPattern without_subtree(const GraphPattern& p, std::size_t clause_index, std::vector<VarIndex>* remap_out) {
  auto removed = subtree_clauses(p, clause_index);
  std::vector<bool> drop_clause(p.clauses.size(), false), drop_var(p.variables.size(), false);
  for (auto i : removed) {
    drop_clause[i] = true;
    if (p.clauses[i].has_variable_tail()) drop_var[p.clauses[i].tail_var()] = true;
  }
  GraphPattern out;
  std::vector<VarIndex> remap(p.variables.size(), 0);
  for (VarIndex v = 0; v < p.variables.size(); ++v) {
    if (!drop_var[v]) remap[v] = out.add_variable(p.variables[v]);
  }
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    if (drop_clause[i]) continue;
    Clause c = p.clauses[i];
    c.head = remap[c.head];
    if (c.has_variable_tail()) c.tail = remap[c.tail_var()];
    out.clauses.push_back(c);
  }
  if (remap_out) *remap_out = std::move(remap);
  return out;
}

}  // namespace kgpat
