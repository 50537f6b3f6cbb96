#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "kgpat/base_patterns.hpp"
#include "kgpat/graph.hpp"

namespace kgpat {

inline constexpr std::string_view tool_version = "0.3.0";
inline constexpr std::string_view vocab_ns = "https://w3id.org/kgpat/vocab#";
inline constexpr std::string_view resource_ns = "https://w3id.org/kgpat/id/";

struct InputDigest {
  std::string path;
  std::string sha256;
};

/// Provenance of one discovery run. Only fields that are fixed by the inputs
/// and hyperparameters are serialized, so that equal runs give equal bytes;
/// wall-clock times and worker counts go to the run report instead.
struct DiscoveryRun {
  std::vector<InputDigest> inputs;
  std::size_t min_support = 2;
  int max_depth = 3;
  int max_length = 8;
  int max_width = 4;
  std::uint64_t seed = 0;
  std::string type_predicate;
  bool numeric_ranges = true;
  bool temporal_ranges = true;
  bool textual_ranges = true;
  int modes_max = 5;
  int restarts = 3;
  std::size_t min_samples = 20;
  bool redundancy_filter = true;
  int last_complete_depth = 0;
  bool partial = false;

  nlohmann::json to_json() const;
  /// Content hash of to_json() without the runId field.
  std::string run_id() const;
};

std::string sha256_hex(std::string_view bytes);

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LineageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON pattern record (see pattern_document for the full layout).
nlohmann::json pattern_record(const StoredPattern& p, const KnowledgeGraph& g);

/// { run, patterns, provenance } with one initial "discovery" event.
nlohmann::json pattern_document(const PatternStore& store, const DiscoveryRun& run, const KnowledgeGraph& g);

/// Stable text form: sorted keys, two-space indent, trailing newline.
std::string dump_document(const nlohmann::json& doc);

/// N-Triples export. Each pattern has nine fixed triples plus one per parent
/// link; the run contributes run_triple_count(run) triples; a final sentinel
/// triple marks the file complete.
std::string pattern_ntriples(const PatternStore& store, const DiscoveryRun& run, const KnowledgeGraph& g);
std::size_t run_triple_count(const DiscoveryRun& run);

/// Checks field names and types of a loaded document. Throws SchemaError
/// naming the offending field.
void validate_document(const nlohmann::json& doc);

/// Parses and validates a document, then verifies that run.runId matches
/// the run record and the first provenance event. Throws SchemaError or
/// LineageError.
nlohmann::json parse_document(std::string_view text);

/// Inclusive facet ranges and a case-insensitive substring matched against
/// a pattern's SPARQL text and graph labels.
struct FacetFilter {
  std::optional<std::int64_t> support_min, support_max;
  std::optional<std::int64_t> depth_min, depth_max;
  std::optional<std::int64_t> length_min, length_max;
  std::optional<std::int64_t> width_min, width_max;
  std::string full_text;

  bool matches(const nlohmann::json& pattern_record) const;
  nlohmann::json to_json() const;
};

/// Keeps the patterns `filter` accepts (records unchanged, order kept) and
/// appends a "selection" event chained to the previous one. Throws
/// LineageError when the document's lineage does not check out.
nlohmann::json append_selection_provenance(const nlohmann::json& doc, const FacetFilter& filter,
                                           const std::string& timestamp);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace kgpat
