#include "kgpat/base_patterns.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "kgpat/domain.hpp"
#include "kgpat/gmm.hpp"
#include "kgpat/parallel.hpp"
#include "kgpat/regex_induction.hpp"
#include "kgpat/temporal.hpp"

namespace kgpat {

std::size_t BaseOptions::effective_min_samples() const {
  return min_samples ? min_samples : std::max<std::size_t>(20, min_support);
}

std::size_t PatternStore::generation_size(int g) const {
  return static_cast<std::size_t>(std::count_if(patterns.begin(), patterns.end(),
                                                [g](const StoredPattern& p) { return p.generation == g; }));
}

const StoredPattern* PatternStore::find(const std::string& canonical) const {
  for (const auto& p : patterns) {
    if (p.canonical == canonical) return &p;
  }
  return nullptr;
}

std::uint64_t population_seed(std::uint64_t seed, const std::string& key) {
  // FNV-1a keeps the key hash stable across platforms and runs.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<IdSet> base_domain(const GraphPattern& pattern, const KnowledgeGraph& g) {
  std::vector<IdSet> d;
  for (const auto& v : pattern.variables) d.push_back(kind_domain(g, v));
  const Clause& c = pattern.clauses.at(0);
  IdSet heads, tails;
  for (ResourceId h : d[c.head]) {
    bool hit = false;
    for (const auto& a : g.out_edges(c.predicate, h)) {
      bool ok = c.has_variable_tail() ? contains(d[c.tail_var()], a.tail) : a.tail == std::get<Constant>(c.tail).id;
      if (!ok) continue;
      hit = true;
      if (c.has_variable_tail()) tails.push_back(a.tail);
    }
    if (hit) heads.push_back(h);
  }
  d[c.head] = std::move(heads);
  if (c.has_variable_tail()) {
    std::sort(tails.begin(), tails.end());
    tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
    d[c.tail_var()] = std::move(tails);
  }
  return d;
}

namespace {

IdSet sorted_unique(IdSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

GraphPattern single(ResourceId type, ResourceId predicate, std::optional<Variable> tail_var, ResourceId constant,
                    IdSet heads, IdSet tails) {
  GraphPattern p;
  p.add_variable({ObjectTypeVar{type}});
  if (tail_var) {
    VarIndex v = p.add_variable(std::move(*tail_var));
    p.clauses.push_back({predicate, GraphPattern::root, v});
    p.domains = {std::move(heads), std::move(tails)};
  } else {
    p.clauses.push_back({predicate, GraphPattern::root, Constant{constant}});
    p.domains = {std::move(heads)};
  }
  return p;
}

struct Population {
  std::vector<const Assertion*> assertions;
  std::map<ResourceId, std::size_t> datatype_counts;
};

class TypeMiner {
 public:
  TypeMiner(const KnowledgeGraph& g, const BaseOptions& o, ResourceId type, MembershipDiagnostics& unparseable)
      : g_(g), o_(o), type_(type), unparseable_(unparseable) {}

  std::vector<GraphPattern> run(BaseDiagnostics& diag) {
    for (ResourceId p : g_.predicates()) {
      auto it = g_.pred_index().find({p, type_});
      if (it != g_.pred_index().end()) mine_predicate(p, it->second, diag);
    }
    return std::move(out_);
  }

 private:
  void mine_predicate(ResourceId p, const std::vector<Assertion>& as, BaseDiagnostics& diag) {
    std::map<ResourceId, IdSet> by_const, by_type_heads, by_type_tails, by_dt_heads, by_dt_tails;
    std::map<DatatypeClass, Population> populations;
    for (const auto& a : as) {
      const Resource& tail = g_.resource(a.tail);
      if (tail.kind != TermKind::BlankNode) by_const[a.tail].push_back(a.head);
      if (tail.is_literal()) {
        ResourceId dt = *g_.datatype_of(a.tail);
        by_dt_heads[dt].push_back(a.head);
        by_dt_tails[dt].push_back(a.tail);
        auto& pop = populations[classify_datatype(tail.datatype)];
        pop.assertions.push_back(&a);
        ++pop.datatype_counts[dt];
      } else {
        for (ResourceId t2 : g_.types_of(a.tail)) {
          by_type_heads[t2].push_back(a.head);
          by_type_tails[t2].push_back(a.tail);
        }
      }
    }
    for (auto& [c, heads] : by_const) {
      heads = sorted_unique(std::move(heads));
      if (heads.size() >= o_.min_support) out_.push_back(single(type_, p, std::nullopt, c, std::move(heads), {}));
    }
    for (auto& [t2, heads] : by_type_heads) {
      heads = sorted_unique(std::move(heads));
      if (heads.size() < o_.min_support) continue;
      out_.push_back(single(type_, p, Variable{ObjectTypeVar{t2}}, 0, std::move(heads),
                            sorted_unique(std::move(by_type_tails[t2]))));
    }
    for (auto& [dt, heads] : by_dt_heads) {
      heads = sorted_unique(std::move(heads));
      if (heads.size() < o_.min_support) continue;
      out_.push_back(single(type_, p, Variable{DataTypeVar{dt}}, 0, std::move(heads),
                            sorted_unique(std::move(by_dt_tails[dt]))));
    }
    for (auto& [cls, pop] : populations) {
      bool enabled = (cls == DatatypeClass::Numeric && o_.numeric_ranges) ||
                     (cls == DatatypeClass::Temporal && o_.temporal_ranges) ||
                     (cls == DatatypeClass::Textual && o_.textual_ranges);
      if (!enabled) continue;
      if (pop.assertions.size() < o_.effective_min_samples()) {
        ++diag.populations_too_small;
        continue;
      }
      ++diag.populations_fitted;
      std::string key = g_.resource(type_).lexical + "|" + g_.resource(p).lexical + "|" + std::string(to_string(cls));
      for (auto& range : learn_ranges(cls, pop, key)) add_range(p, pop, std::move(range));
    }
  }

  std::vector<RangeModel> learn_ranges(DatatypeClass cls, const Population& pop, const std::string& key) {
    std::vector<RangeModel> out;
    if (cls == DatatypeClass::Textual) {
      std::vector<std::string> values;
      for (const auto* a : pop.assertions) values.push_back(g_.resource(a->tail).lexical);
      std::vector<std::string> seen;
      for (auto& cluster : cluster_and_generalize(values, o_.text_coverage)) {
        std::string r = cluster.generalized.render();
        if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
        seen.push_back(r);
        out.push_back({RegexRange{std::move(cluster.generalized)}});
      }
      return out;
    }

    std::vector<double> values;
    for (const auto* a : pop.assertions) {
      if (auto v = literal_value(g_.resource(a->tail))) {
        values.push_back(*v);
      } else {
        unparseable_.unparseable.fetch_add(1, std::memory_order_relaxed);
      }
    }
    GmmOptions go;
    go.modes_max = o_.modes_max;
    go.restarts = o_.restarts;
    go.seed = population_seed(o_.seed, key);
    go.min_samples = o_.effective_min_samples();
    auto fit = fit_gmm(values, go);
    if (!fit) return out;

    // Dominant datatype; ties go to the smallest IRI.
    std::string dominant;
    std::size_t best = 0;
    for (const auto& [dt, n] : pop.datatype_counts) {
      const std::string& iri = g_.resource(dt).lexical;
      if (n > best || (n == best && iri < dominant)) {
        best = n;
        dominant = iri;
      }
    }
    for (const auto& c : fit->components) {
      GaussianMixtureRange m;
      m.components = {{1.0, c.mean, c.variance}};
      m.shift = fit->shift;
      m.scale = fit->scale;
      m.temporal = cls == DatatypeClass::Temporal;
      m.datatype = dominant;
      out.push_back({std::move(m)});
    }
    return out;
  }

  void add_range(ResourceId p, const Population& pop, RangeModel range) {
    auto model = std::make_shared<const RangeModel>(std::move(range));
    IdSet universe;
    for (ResourceId lit : g_.literals()) {
      if (membership(*model, g_.resource(lit))) universe.push_back(lit);
    }
    IdSet heads, tails;
    std::size_t covered = 0;
    for (const auto* a : pop.assertions) {
      if (!contains(universe, a->tail)) continue;
      ++covered;
      heads.push_back(a->head);
      tails.push_back(a->tail);
    }
    heads = sorted_unique(std::move(heads));
    if (covered < o_.min_support || heads.size() < o_.min_support) return;
    auto shared_universe = std::make_shared<const IdSet>(std::move(universe));
    out_.push_back(single(type_, p, Variable{ValueRangeVar{model, shared_universe}}, 0, std::move(heads),
                          sorted_unique(std::move(tails))));
  }

  const KnowledgeGraph& g_;
  const BaseOptions& o_;
  ResourceId type_;
  MembershipDiagnostics& unparseable_;
  std::vector<GraphPattern> out_;
};

}  // namespace

PatternStore compute_base_patterns(const KnowledgeGraph& g, const BaseOptions& options, BaseDiagnostics* diag) {
  std::vector<ResourceId> types;
  for (const auto& [t, members] : g.type_index()) {
    if (members.size() >= std::max<std::size_t>(1, options.min_support)) types.push_back(t);
  }

  MembershipDiagnostics unparseable;
  std::vector<std::vector<GraphPattern>> per_type(types.size());
  std::vector<BaseDiagnostics> per_diag(types.size());
  parallel_for(types.size(), options.workers, [&](std::size_t i) {
    per_type[i] = TypeMiner(g, options, types[i], unparseable).run(per_diag[i]);
  });

  PatternStore store;
  std::vector<std::pair<std::string, GraphPattern>> all;
  for (std::size_t i = 0; i < types.size(); ++i) {
    std::vector<std::pair<std::string, GraphPattern>> keyed;
    for (auto& p : per_type[i]) {
      std::string c = canonical_string(p, g.dictionary());
      keyed.emplace_back(std::move(c), std::move(p));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    auto& bucket = store.base_by_type[types[i]];
    for (auto& [c, p] : keyed) {
      bucket.push_back(p);
      all.emplace_back(c, std::move(p));
    }
    if (diag) {
      diag->populations_fitted += per_diag[i].populations_fitted;
      diag->populations_too_small += per_diag[i].populations_too_small;
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [c, p] : all) {
    StoredPattern s;
    s.id = store.patterns.size();
    s.metrics = metrics(p);
    s.canonical = std::move(c);
    s.pattern = std::move(p);
    store.patterns.push_back(std::move(s));
  }
  store.last_complete_generation = 0;
  if (diag) diag->unparseable_literals = unparseable.unparseable.load();
  return store;
}

}  // namespace kgpat
