#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgpat/graph.hpp"
#include "kgpat/pattern.hpp"

namespace kgpat {

struct BaseOptions {
  std::size_t min_support = 2;
  bool numeric_ranges = true;
  bool temporal_ranges = true;
  bool textual_ranges = true;
  int modes_max = 5;
  int restarts = 3;
  std::uint64_t seed = 0;
  /// Smallest literal population a range is learned from; 0 means
  /// max(20, min_support).
  std::size_t min_samples = 0;
  /// Fraction of a text population a generalized regex must match.
  double text_coverage = 1.0;
  unsigned workers = 1;

  std::size_t effective_min_samples() const;
};

struct StoredPattern {
  std::size_t id = 0;
  GraphPattern pattern;
  std::string canonical;
  PatternMetrics metrics;
  int generation = 0;
  std::optional<std::size_t> parent_id;
};

/// Emitted patterns ordered by (generation, canonical); ids are positions.
/// `base_by_type` keeps every single-clause pattern grouped by root type in
/// canonical order; extensions draw their clauses from it.
struct PatternStore {
  std::vector<StoredPattern> patterns;
  std::map<ResourceId, std::vector<GraphPattern>> base_by_type;
  int last_complete_generation = -1;
  bool interrupted = false;

  std::size_t generation_size(int g) const;
  const StoredPattern* find(const std::string& canonical) const;
};

struct BaseDiagnostics {
  std::size_t populations_fitted = 0;
  std::size_t populations_too_small = 0;
  std::size_t unparseable_literals = 0;
};

/// Single-clause patterns with support >= min_support for every type with at
/// least min_support entities: constant tails, object-type tails, datatype
/// tails and value-range tails. Generation 0 of the returned store holds them.
PatternStore compute_base_patterns(const KnowledgeGraph& g, const BaseOptions& options,
                                   BaseDiagnostics* diag = nullptr);

/// Domains of a single-clause pattern (head, tail when it is a variable).
std::vector<IdSet> base_domain(const GraphPattern& pattern, const KnowledgeGraph& g);

/// 64-bit seed derived from the global seed and a stable population key.
std::uint64_t population_seed(std::uint64_t seed, const std::string& key);

}  // namespace kgpat
