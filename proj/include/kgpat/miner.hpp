#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <string>
#include <unordered_set>
#include <vector>

#include "kgpat/base_patterns.hpp"
#include "kgpat/graph.hpp"
#include "kgpat/pattern.hpp"

namespace kgpat {

enum class PruneReason { Support, NoReduction, SizeLimit, Duplicate, TerminalOnly };
inline constexpr std::size_t prune_reason_count = 5;
std::string_view to_string(PruneReason r);

struct GenerationTelemetry {
  int generation = 0;
  std::size_t frontier = 0;
  std::size_t candidates = 0;
  std::size_t generated = 0;
  std::size_t emitted = 0;
  std::array<std::size_t, prune_reason_count> pruned{};

  std::size_t& count(PruneReason r) { return pruned[static_cast<std::size_t>(r)]; }
  std::size_t count(PruneReason r) const { return pruned[static_cast<std::size_t>(r)]; }
  void add(const GenerationTelemetry& other);
};

struct Telemetry {
  std::vector<GenerationTelemetry> generations;
  GenerationTelemetry total() const;
};

struct MinerOptions {
  std::size_t min_support = 2;
  int max_depth = 3;
  int max_length = 8;
  int max_width = 4;
  unsigned workers = 1;
  /// Emit a pattern only if every clause shrinks its head's domain relative
  /// to the pattern without that clause's subtree.
  bool redundancy_filter = true;
  /// Search-space prunes that never change the emitted set: candidates below
  /// support are dropped per parent, limits are checked before any domain
  /// work, and patterns whose redundancy can no longer be repaired stop
  /// being extended.
  bool search_prunes = true;
  /// Polled between tasks; when set, the running generation is discarded.
  const std::atomic<bool>* stop = nullptr;
  /// Called after each generation is merged, with its index.
  std::function<void(int, const PatternStore&)> on_generation_complete;
  /// Per-generation telemetry lines; null for silence.
  std::ostream* log = nullptr;
};

/// One clause a parent may be extended with at `endpoint`, taken from a base
/// pattern of the endpoint's type.
struct CandidateExtension {
  VarIndex endpoint;
  const GraphPattern* base;
};

/// Endpoints are the open object-type leaves, plus the root while the
/// pattern is a single clause.
std::vector<VarIndex> endpoints(const GraphPattern& parent);

std::vector<CandidateExtension> candidate_extensions(const GraphPattern& parent, const PatternStore& store);

/// parent plus the candidate's clause (a fresh variable for a variable tail).
/// Domains are not computed.
GraphPattern extend(const GraphPattern& parent, const CandidateExtension& candidate);

/// Insert-if-absent set of canonical strings.
class DedupTable {
 public:
  bool contains(const std::string& canonical) const;
  /// True when the string was not present before.
  bool insert(const std::string& canonical);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_set<std::string> set_;
};

struct ExploredPattern {
  GraphPattern pattern;
  std::string canonical;
  bool emitted = false;
  /// May seed the next generation.
  bool parent_eligible = true;
  /// Canonical string of the nearest emitted ancestor; empty if none.
  std::string emitted_ancestor;
};

struct ExploreInput {
  const GraphPattern* parent;
  bool parent_emitted = true;
  std::string parent_canonical;
  std::string parent_ancestor;
};

/// All supported combinations of the parent's candidates, one clause per
/// breadth-first step, skipping anything already in `seen`.
std::vector<ExploredPattern> explore(const KnowledgeGraph& g, const PatternStore& store, const ExploreInput& input,
                                     const DedupTable& seen, const MinerOptions& options, GenerationTelemetry& tele);

/// Result of checking a supported pattern against the output filter.
struct RedundancyVerdict {
  bool redundant = false;
  /// Some redundant clause's subtree has no open leaf, so no extension can
  /// make it shrink its head's domain.
  bool permanent = false;
  /// Permanent and the subtree also holds none of `live` (variables still
  /// open for extension in the current step).
  bool settled = false;
};

RedundancyVerdict check_redundancy(const KnowledgeGraph& g, const GraphPattern& pattern,
                                   const std::vector<VarIndex>& live = {});

/// Phase two: extends generation 0 of `store` breadth-first up to
/// options.max_depth generations, or until nothing extends or a stop is
/// requested. Returns the store with all complete generations.
PatternStore discover(const KnowledgeGraph& g, PatternStore store, const MinerOptions& options,
                      Telemetry* telemetry = nullptr);

}  // namespace kgpat
