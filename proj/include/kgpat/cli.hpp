#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kgpat {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_parse = 3,
  exit_io = 4,
  exit_partial = 5,
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::size_t min_support = 2;
  int max_depth = 3;
  int max_length = 8;
  int max_width = 4;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string type_predicate = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
  bool numeric_ranges = true;
  bool temporal_ranges = true;
  bool textual_ranges = true;
  int modes_max = 5;
  int restarts = 3;
  double text_coverage = 1.0;
  /// 0 means max(20, min_support).
  std::size_t min_samples = 0;
  bool redundancy_filter = true;
  bool search_prunes = true;
  std::string out = "patterns";
  bool write_json = true;
  bool write_rdf = true;
  bool lenient = false;
  bool quiet = false;
};

/// Checks invariants of a config; returns an error message or "".
std::string check_config(const RunConfig& config);

/// ingest -> base patterns -> mining -> emission. The run report goes to
/// `out`, diagnostics and telemetry to `err`. `stop` requests an anytime
/// exit: complete generations are written and exit_partial is returned.
int run(const RunConfig& config, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop = nullptr);

/// Parses flags and runs with a SIGINT handler installed.
int run_cli(int argc, char** argv);

}  // namespace kgpat
