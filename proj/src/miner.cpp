#include "kgpat/miner.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "kgpat/domain.hpp"
#include "kgpat/parallel.hpp"

namespace kgpat {

std::string_view to_string(PruneReason r) {
  switch (r) {
    case PruneReason::Support: return "support";
    case PruneReason::NoReduction: return "no_reduction";
    case PruneReason::SizeLimit: return "size_limit";
    case PruneReason::Duplicate: return "duplicate";
    case PruneReason::TerminalOnly: return "terminal_only";
  }
  return "unknown";
}

void GenerationTelemetry::add(const GenerationTelemetry& o) {
  frontier += o.frontier;
  candidates += o.candidates;
  generated += o.generated;
  emitted += o.emitted;
  for (std::size_t i = 0; i < pruned.size(); ++i) pruned[i] += o.pruned[i];
}

GenerationTelemetry Telemetry::total() const {
  GenerationTelemetry t;
  t.generation = -1;
  for (const auto& g : generations) t.add(g);
  return t;
}

bool DedupTable::contains(const std::string& canonical) const {
  std::lock_guard lock(mutex_);
  return set_.contains(canonical);
}

bool DedupTable::insert(const std::string& canonical) {
  std::lock_guard lock(mutex_);
  return set_.insert(canonical).second;
}

std::size_t DedupTable::size() const {
  std::lock_guard lock(mutex_);
  return set_.size();
}

std::vector<VarIndex> endpoints(const GraphPattern& parent) {
  auto out = parent.open_leaves();
  if (parent.clauses.size() == 1) out.insert(out.begin(), GraphPattern::root);
  return out;
}

namespace {

bool same_shape(const GraphPattern& p, const Clause& c, const GraphPattern& base) {
  const Clause& b = base.clauses[0];
  if (c.predicate != b.predicate || c.has_variable_tail() != b.has_variable_tail()) return false;
  if (!c.has_variable_tail()) return std::get<Constant>(c.tail) == std::get<Constant>(b.tail);
  return p.variables[c.tail_var()] == base.variables[b.tail_var()];
}

}  // namespace

std::vector<CandidateExtension> candidate_extensions(const GraphPattern& parent, const PatternStore& store) {
  std::vector<CandidateExtension> out;
  for (VarIndex e : endpoints(parent)) {
    auto it = store.base_by_type.find(parent.variables[e].object_type());
    if (it == store.base_by_type.end()) continue;
    for (const auto& base : it->second) {
      bool repeated = std::any_of(parent.clauses.begin(), parent.clauses.end(), [&](const Clause& c) {
        return c.head == e && same_shape(parent, c, base);
      });
      if (!repeated) out.push_back({e, &base});
    }
  }
  return out;
}

GraphPattern extend(const GraphPattern& parent, const CandidateExtension& cand) {
  GraphPattern child = parent;
  const Clause& b = cand.base->clauses[0];
  if (b.has_variable_tail()) {
    VarIndex v = child.add_variable(cand.base->variables[b.tail_var()]);
    child.clauses.push_back({b.predicate, cand.endpoint, v});
  } else {
    child.clauses.push_back({b.predicate, cand.endpoint, b.tail});
  }
  return child;
}

RedundancyVerdict check_redundancy(const KnowledgeGraph& g, const GraphPattern& p, const std::vector<VarIndex>& live) {
  RedundancyVerdict verdict;
  std::vector<bool> heads(p.variables.size(), false);
  for (const auto& c : p.clauses) heads[c.head] = true;
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    if (!clause_is_redundant(g, p, i)) continue;
    verdict.redundant = true;
    bool open = false, has_live = false;
    for (auto k : subtree_clauses(p, i)) {
      const Clause& c = p.clauses[k];
      if (!c.has_variable_tail()) continue;
      VarIndex v = c.tail_var();
      if (p.variables[v].is_object() && !heads[v]) open = true;
      if (std::find(live.begin(), live.end(), v) != live.end()) has_live = true;
    }
    if (!open) {
      verdict.permanent = true;
      if (!has_live) {
        verdict.settled = true;
        break;
      }
    }
  }
  return verdict;
}

namespace {

struct BfsItem {
  GraphPattern pattern;
  std::size_t next;  // first candidate index still to try
  bool emitted;
  std::string canonical;
  std::string ancestor;
};

class Explorer {
 public:
  Explorer(const KnowledgeGraph& g, const PatternStore& store, const ExploreInput& in, const DedupTable& seen,
           const MinerOptions& o, GenerationTelemetry& tele)
      : g_(g), in_(in), seen_(seen), o_(o), tele_(tele) {
    live_ = endpoints(*in.parent);
    candidates_ = candidate_extensions(*in.parent, store);
  }

  std::vector<ExploredPattern> run() {
    std::vector<BfsItem> queue;
    // First layer: one candidate each. Under search prunes a candidate that
    // fails support or the limits alone is dropped for every combination.
    std::vector<CandidateExtension> viable;
    std::vector<std::optional<BfsItem>> singles;
    BfsItem root{*in_.parent, 0, in_.parent_emitted, in_.parent_canonical, in_.parent_ancestor};
    for (std::size_t j = 0; j < candidates_.size(); ++j) {
      if (stopped()) return {};
      Outcome r = try_child(root, candidates_[j]);
      if (o_.search_prunes && (r.reason == PruneReason::Support || r.reason == PruneReason::SizeLimit)) continue;
      viable.push_back(candidates_[j]);
      singles.push_back(std::move(r.item));
    }
    candidates_ = std::move(viable);
    for (std::size_t j = 0; j < singles.size(); ++j) {
      if (!singles[j]) continue;
      singles[j]->next = j + 1;
      queue.push_back(std::move(*singles[j]));
    }

    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::size_t j = queue[head].next; j < candidates_.size(); ++j) {
        if (stopped()) return {};
        Outcome r = try_child(queue[head], candidates_[j]);
        if (r.item) {
          r.item->next = j + 1;
          queue.push_back(std::move(*r.item));
        }
      }
      // Children hold their own copies; release the parent's domains.
      queue[head].pattern.domains.clear();
      queue[head].pattern.domains.shrink_to_fit();
    }
    return std::move(out_);
  }

 private:
  struct Outcome {
    std::optional<PruneReason> reason;
    std::optional<BfsItem> item;
  };

  bool stopped() const { return o_.stop && o_.stop->load(std::memory_order_relaxed); }

  bool over_limits(const GraphPattern& y, VarIndex head) const {
    return static_cast<int>(y.clauses.size()) > o_.max_length || static_cast<int>(y.out_degree(head)) > o_.max_width;
  }

  Outcome reject(PruneReason r) {
    ++tele_.count(r);
    return {r, std::nullopt};
  }

  Outcome try_child(const BfsItem& x, const CandidateExtension& cand) {
    ++tele_.candidates;
    GraphPattern y = extend(x.pattern, cand);
    if (o_.search_prunes && over_limits(y, cand.endpoint)) return reject(PruneReason::SizeLimit);

    std::string canonical = canonical_string(y, g_.dictionary());
    if (seen_.contains(canonical) || !local_.insert(canonical).second) return reject(PruneReason::Duplicate);

    y.domains = propagate_domains(g_, x.pattern, y);
    if (y.support() < o_.min_support) return reject(PruneReason::Support);
    if (!o_.search_prunes && over_limits(y, cand.endpoint)) return reject(PruneReason::SizeLimit);

    RedundancyVerdict v;
    if (o_.redundancy_filter) v = check_redundancy(g_, y, live_);
    ++tele_.generated;

    ExploredPattern e;
    e.canonical = canonical;
    e.emitted = !v.redundant;
    e.emitted_ancestor = x.emitted ? x.canonical : x.ancestor;
    if (!e.emitted) ++tele_.count(PruneReason::NoReduction);
    if (y.open_leaves().empty()) {
      ++tele_.count(PruneReason::TerminalOnly);
      e.parent_eligible = false;
    }
    if (o_.search_prunes && v.permanent) e.parent_eligible = false;

    std::optional<BfsItem> next;
    if (!(o_.search_prunes && v.settled)) {
      next = BfsItem{y, 0, e.emitted, canonical, e.emitted_ancestor};
    }
    e.pattern = std::move(y);
    out_.push_back(std::move(e));
    return {std::nullopt, std::move(next)};
  }

  const KnowledgeGraph& g_;
  const ExploreInput& in_;
  const DedupTable& seen_;
  const MinerOptions& o_;
  GenerationTelemetry& tele_;
  std::vector<VarIndex> live_;
  std::vector<CandidateExtension> candidates_;
  std::unordered_set<std::string> local_;
  std::vector<ExploredPattern> out_;
};

struct FrontierItem {
  GraphPattern pattern;
  std::string canonical;
  bool emitted = true;
  std::string ancestor;
};

void log_generation(std::ostream& os, const GenerationTelemetry& t) {
  os << "generation " << t.generation << ": frontier=" << t.frontier << " candidates=" << t.candidates
     << " generated=" << t.generated << " emitted=" << t.emitted << " pruned{";
  for (std::size_t i = 0; i < prune_reason_count; ++i) {
    os << (i ? " " : "") << to_string(static_cast<PruneReason>(i)) << "=" << t.pruned[i];
  }
  os << "}\n";
}

}  // namespace

std::vector<ExploredPattern> explore(const KnowledgeGraph& g, const PatternStore& store, const ExploreInput& input,
                                     const DedupTable& seen, const MinerOptions& options, GenerationTelemetry& tele) {
  return Explorer(g, store, input, seen, options, tele).run();
}

PatternStore discover(const KnowledgeGraph& g, PatternStore store, const MinerOptions& options, Telemetry* telemetry) {
  auto stopped = [&] { return options.stop && options.stop->load(); };

  DedupTable seen;
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<FrontierItem> frontier;
  for (const auto& p : store.patterns) {
    seen.insert(p.canonical);
    ids.emplace(p.canonical, p.id);
    if (p.generation == 0) frontier.push_back({p.pattern, p.canonical, true, {}});
  }
  std::sort(frontier.begin(), frontier.end(), [](const auto& a, const auto& b) { return a.canonical < b.canonical; });
  store.last_complete_generation = 0;
  store.interrupted = false;
  if (options.on_generation_complete) options.on_generation_complete(0, store);

  for (int d = 0; d < options.max_depth; ++d) {
    if (stopped()) {
      store.interrupted = true;
      break;
    }
    GenerationTelemetry gen;
    gen.generation = d + 1;
    gen.frontier = frontier.size();

    std::vector<std::vector<ExploredPattern>> results(frontier.size());
    std::vector<GenerationTelemetry> teles(frontier.size());
    parallel_for(frontier.size(), options.workers, [&](std::size_t i) {
      if (stopped()) return;
      ExploreInput in{&frontier[i].pattern, frontier[i].emitted, frontier[i].canonical, frontier[i].ancestor};
      results[i] = explore(g, store, in, seen, options, teles[i]);
    });
    if (stopped()) {
      store.interrupted = true;
      break;
    }
    for (const auto& t : teles) gen.add(t);

    // Merge in parent order so the first producer of a pattern always wins.
    std::unordered_set<std::string> merged;
    std::vector<ExploredPattern> fresh;
    for (auto& r : results) {
      for (auto& e : r) {
        if (!merged.insert(e.canonical).second) {
          ++gen.count(PruneReason::Duplicate);
          continue;
        }
        fresh.push_back(std::move(e));
      }
      r.clear();
    }
    std::sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) { return a.canonical < b.canonical; });

    std::vector<FrontierItem> next;
    std::size_t first_new = store.patterns.size();
    for (auto& e : fresh) {
      seen.insert(e.canonical);
      if (e.emitted) {
        StoredPattern s;
        s.id = store.patterns.size();
        s.canonical = e.canonical;
        s.metrics = metrics(e.pattern);
        s.generation = d + 1;
        s.pattern = e.pattern;
        ids.emplace(s.canonical, s.id);
        store.patterns.push_back(std::move(s));
      }
      if (e.parent_eligible && d + 1 < options.max_depth) {
        next.push_back({std::move(e.pattern), e.canonical, e.emitted, e.emitted_ancestor});
      }
    }
    std::size_t k = 0;
    for (const auto& e : fresh) {
      if (!e.emitted) continue;
      auto& s = store.patterns[first_new + k++];
      if (!e.emitted_ancestor.empty()) s.parent_id = ids.at(e.emitted_ancestor);
    }
    gen.emitted = store.patterns.size() - first_new;

    frontier = std::move(next);
    store.last_complete_generation = d + 1;
    if (options.log) log_generation(*options.log, gen);
    if (telemetry) telemetry->generations.push_back(gen);
    if (options.on_generation_complete) options.on_generation_complete(d + 1, store);
    if (frontier.empty()) {
      store.last_complete_generation = options.max_depth;
      break;
    }
  }
  return store;
}

}  // namespace kgpat
