#pragma once

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "kgpat/domain.hpp"
#include "kgpat/graph.hpp"
#include "kgpat/pattern.hpp"
#include "kgpat/range_model.hpp"
#include "kgpat/rdf.hpp"
#include "random_graph.hpp"

#ifndef KGPAT_FIXTURES_DIR
#error "KGPAT_FIXTURES_DIR must be defined"
#endif

namespace kgpat::testing {

inline std::string fixture_path(const std::string& name) { return std::string(KGPAT_FIXTURES_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::vector<RawTriple> fixture_triples(const std::string& name) {
  return parse_ntriples(read_text(fixture_path(name))).triples;
}

inline KnowledgeGraph certificate_graph() { return build_graph(fixture_triples("certificate.nt"), ex + "has_type"); }

inline ResourceId id_of(const KnowledgeGraph& g, const std::string& local) {
  auto id = g.find_iri(ex + local);
  if (!id) throw std::runtime_error("missing resource " + local);
  return *id;
}

inline std::shared_ptr<const RangeModel> normal_range(double mean, double variance, const std::string& datatype) {
  return std::make_shared<const RangeModel>(
      RangeModel{GaussianMixtureRange{{{1.0, mean, variance}}, mean, std::sqrt(variance), false, datatype}});
}

/// The five-clause certificate pattern: rooted at the certificate, with the
/// subject's gender and occupation and an age range N(24.5, 1.32).
inline GraphPattern certificate_pattern(const KnowledgeGraph& g) {
  GraphPattern p;
  VarIndex vj = p.add_variable({ObjectTypeVar{id_of(g, "Death_Certificate")}});
  VarIndex vi = p.add_variable({ObjectTypeVar{id_of(g, "Person")}});
  auto range = normal_range(24.5, 1.32, xsd::float_);
  VarIndex vk = p.add_variable({ValueRangeVar{range, std::make_shared<const IdSet>(kind_domain(g, {ValueRangeVar{range, nullptr}}))}});
  p.clauses.push_back({id_of(g, "has_subject"), vj, vi});
  p.clauses.push_back({id_of(g, "has_type"), vj, Constant{id_of(g, "Death_Certificate")}});
  p.clauses.push_back({id_of(g, "at_age"), vj, vk});
  p.clauses.push_back({id_of(g, "has_gender"), vi, Constant{id_of(g, "Female")}});
  p.clauses.push_back({id_of(g, "has_occupation"), vi, Constant{id_of(g, "H.0-2")}});
  p.domains = compute_domains(g, p);
  return p;
}

}  // namespace kgpat::testing
