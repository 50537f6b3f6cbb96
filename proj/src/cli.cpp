#include "kgpat/cli.hpp"

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "kgpat/base_patterns.hpp"
#include "kgpat/graph.hpp"
#include "kgpat/miner.hpp"
#include "kgpat/rdf.hpp"
#include "kgpat/serialize.hpp"

namespace kgpat {

namespace {

std::atomic<bool> interrupt_requested{false};

extern "C" void on_sigint(int) { interrupt_requested.store(true); }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) return std::nullopt;
  return ss.str();
}

void echo_config(std::ostream& os, const RunConfig& c) {
  os << "config:";
  for (const auto& in : c.inputs) os << " --input " << in;
  os << " --min-support " << c.min_support << " --max-depth " << c.max_depth << " --max-length " << c.max_length
     << " --max-width " << c.max_width << " --seed " << c.seed << " --workers " << c.workers
     << " --type-predicate " << c.type_predicate << " --modes-max " << c.modes_max << " --restarts " << c.restarts
     << " --text-coverage " << c.text_coverage << " --min-samples " << c.min_samples;
  if (!c.numeric_ranges) os << " --no-numeric";
  if (!c.temporal_ranges) os << " --no-temporal";
  if (!c.textual_ranges) os << " --no-textual";
  if (!c.redundancy_filter) os << " --keep-redundant";
  if (!c.search_prunes) os << " --no-search-prunes";
  if (c.lenient) os << " --lenient";
  os << " --out " << c.out << " --format ";
  os << (c.write_json ? "json" : "") << (c.write_json && c.write_rdf ? "," : "") << (c.write_rdf ? "rdf" : "") << "\n";
}

}  // namespace

std::string check_config(const RunConfig& c) {
  if (c.inputs.empty()) return "at least one --input is required";
  for (const auto& in : c.inputs) {
    if (!std::filesystem::is_regular_file(in)) return "input not found: " + in;
  }
  if (c.min_support < 1) return "--min-support must be at least 1";
  if (c.max_depth < 0) return "--max-depth must be non-negative";
  if (c.max_length < 1 || c.max_width < 1) return "--max-length and --max-width must be at least 1";
  if (c.workers < 1) return "--workers must be at least 1";
  if (c.modes_max < 1 || c.restarts < 1) return "--modes-max and --restarts must be at least 1";
  if (!(c.text_coverage > 0.0 && c.text_coverage <= 1.0)) return "--text-coverage must be in (0, 1]";
  if (!c.write_json && !c.write_rdf) return "--format must name json and/or rdf";
  if (c.out.empty()) return "--out must not be empty";
  return {};
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop) {
  auto started = std::chrono::steady_clock::now();
  if (auto problem = check_config(c); !problem.empty()) {
    err << "error: " << problem << "\n";
    return exit_config;
  }
  echo_config(out, c);

  DiscoveryRun record;
  std::vector<RawTriple> triples;
  for (const auto& path : c.inputs) {
    auto bytes = read_file(path);
    if (!bytes) {
      err << "error: cannot read " << path << "\n";
      return exit_io;
    }
    record.inputs.push_back({path, sha256_hex(*bytes)});
    try {
      auto parsed = parse_ntriples(*bytes, ParseOptions{c.lenient});
      if (parsed.skipped_lines > 0) {
        err << path << ": skipped " << parsed.skipped_lines << " malformed line(s), first at line "
            << parsed.first_bad_line << "\n";
      }
      for (auto& t : parsed.triples) triples.push_back(std::move(t));
    } catch (const ParseError& e) {
      err << "error: " << path << ": " << e.what() << "\n";
      return exit_parse;
    }
  }

  KnowledgeGraph g;
  try {
    g = build_graph(triples, c.type_predicate);
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    return exit_parse;
  }
  triples.clear();
  triples.shrink_to_fit();
  out << "graph: " << g.assertions().size() << " assertions, " << g.type_index().size() << " types, "
      << g.literals().size() << " literals\n";

  BaseOptions bo;
  bo.min_support = c.min_support;
  bo.numeric_ranges = c.numeric_ranges;
  bo.temporal_ranges = c.temporal_ranges;
  bo.textual_ranges = c.textual_ranges;
  bo.modes_max = c.modes_max;
  bo.restarts = c.restarts;
  bo.seed = c.seed;
  bo.min_samples = c.min_samples;
  bo.text_coverage = c.text_coverage;
  bo.workers = c.workers;
  BaseDiagnostics bd;
  PatternStore store = compute_base_patterns(g, bo, &bd);
  if (bd.unparseable_literals) err << "warning: " << bd.unparseable_literals << " unparseable literal value(s)\n";
  out << "generation 0: " << store.patterns.size() << " base patterns\n";

  MinerOptions mo;
  mo.min_support = c.min_support;
  mo.max_depth = c.max_depth;
  mo.max_length = c.max_length;
  mo.max_width = c.max_width;
  mo.workers = c.workers;
  mo.redundancy_filter = c.redundancy_filter;
  mo.search_prunes = c.search_prunes;
  mo.stop = stop;
  mo.log = c.quiet ? nullptr : &err;
  Telemetry telemetry;
  store = discover(g, std::move(store), mo, &telemetry);
  for (const auto& t : telemetry.generations) {
    out << "generation " << t.generation << ": " << t.emitted << " patterns (candidates " << t.candidates
        << ", duplicates " << t.count(PruneReason::Duplicate) << ", below support " << t.count(PruneReason::Support)
        << ", no reduction " << t.count(PruneReason::NoReduction) << ")\n";
  }

  record.min_support = c.min_support;
  record.max_depth = c.max_depth;
  record.max_length = c.max_length;
  record.max_width = c.max_width;
  record.seed = c.seed;
  record.type_predicate = c.type_predicate;
  record.numeric_ranges = c.numeric_ranges;
  record.temporal_ranges = c.temporal_ranges;
  record.textual_ranges = c.textual_ranges;
  record.modes_max = c.modes_max;
  record.restarts = c.restarts;
  record.min_samples = bo.effective_min_samples();
  record.redundancy_filter = c.redundancy_filter;
  record.last_complete_depth = store.last_complete_generation;
  record.partial = store.interrupted;

  try {
    if (c.write_json) {
      write_file_atomic(c.out + ".json", dump_document(pattern_document(store, record, g)));
      out << "wrote " << c.out << ".json\n";
    }
    if (c.write_rdf) {
      write_file_atomic(c.out + ".nt", pattern_ntriples(store, record, g));
      out << "wrote " << c.out << ".nt\n";
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_io;
  }

  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << "run " << record.run_id() << ": " << store.patterns.size() << " patterns, last complete generation "
      << store.last_complete_generation << (store.interrupted ? " (interrupted)" : "") << ", " << elapsed << " s\n";
  return store.interrupted ? exit_partial : exit_ok;
}

int run_cli(int argc, char** argv) {
  RunConfig c;
  c.workers = std::max(1u, std::thread::hardware_concurrency());
  std::string formats = "json,rdf";

  CLI::App app{"Mine generalized graph patterns from N-Triples knowledge graphs."};
  app.add_option("--input", c.inputs, "N-Triples input file (repeatable)")->required();
  app.add_option("--min-support", c.min_support, "Minimum number of root bindings")->capture_default_str();
  app.add_option("--max-depth", c.max_depth, "Number of extension generations")->capture_default_str();
  app.add_option("--max-length", c.max_length, "Maximum clauses per pattern")->capture_default_str();
  app.add_option("--max-width", c.max_width, "Maximum clauses sharing one head")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed for all randomized steps")->capture_default_str();
  app.add_option("--workers", c.workers, "Worker threads")->capture_default_str();
  app.add_option("--type-predicate", c.type_predicate, "Predicate that assigns types")->capture_default_str();
  app.add_flag_callback("--no-numeric", [&c] { c.numeric_ranges = false; }, "Disable numeric value ranges");
  app.add_flag_callback("--no-temporal", [&c] { c.temporal_ranges = false; }, "Disable temporal value ranges");
  app.add_flag_callback("--no-textual", [&c] { c.textual_ranges = false; }, "Disable textual value ranges");
  app.add_option("--modes-max", c.modes_max, "Largest mixture size tried")->capture_default_str();
  app.add_option("--restarts", c.restarts, "EM restarts per mixture size")->capture_default_str();
  app.add_option("--text-coverage", c.text_coverage, "Fraction of values a text range must match")
      ->capture_default_str();
  app.add_option("--min-samples", c.min_samples, "Smallest population a range is learned from (0: max(20, support))")
      ->capture_default_str();
  app.add_flag_callback("--keep-redundant", [&c] { c.redundancy_filter = false; },
                        "Also emit patterns with a clause that does not shrink its head's domain");
  app.add_flag_callback("--no-search-prunes", [&c] { c.search_prunes = false; },
                        "Only deduplicate; disable search-space pruning");
  app.add_option("--out", c.out, "Output path prefix (.json / .nt appended)")->capture_default_str();
  app.add_option("--format", formats, "Comma-separated output formats: json, rdf")->capture_default_str();
  app.add_flag("--lenient", c.lenient, "Skip malformed input lines instead of failing");
  app.add_flag("--quiet", c.quiet, "No per-generation telemetry on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  c.write_json = c.write_rdf = false;
  std::stringstream ss(formats);
  for (std::string f; std::getline(ss, f, ',');) {
    if (f == "json") c.write_json = true;
    else if (f == "rdf") c.write_rdf = true;
    else {
      std::cerr << "error: unknown format '" << f << "'\n";
      return exit_config;
    }
  }

  std::signal(SIGINT, on_sigint);
  return run(c, std::cout, std::cerr, &interrupt_requested);
}

}  // namespace kgpat
