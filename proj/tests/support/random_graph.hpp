#pragma once

#include <random>
#include <string>
#include <vector>

#include "kgpat/rdf.hpp"

namespace kgpat::testing {

inline const std::string ex = "http://example.org/";

struct RandomGraphShape {
  int entities = 30;     // typed or untyped subjects, at most 50
  int types = 3;         // 2..4
  int predicates = 3;
  int assertions = 150;  // total including type assertions, at most 200
  int constants = 3;     // untyped IRIs used as object values
  int literals = 3;      // small literal pool
};

/// Random typed graph with a small vocabulary so that exhaustive
/// enumeration stays tractable. Deterministic in the generator state.
inline std::vector<RawTriple> random_graph(std::mt19937_64& rng, const RandomGraphShape& s) {
  std::vector<RawTriple> out;
  auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto entity = [](int i) { return Resource::iri(ex + "e" + std::to_string(i)); };
  auto type_iri = [](int i) { return Resource::iri(ex + "T" + std::to_string(i)); };
  const Resource type_pred = Resource::iri(rdf::type);
  for (int i = 0; i < s.entities; ++i) {
    int roll = pick(10);
    if (roll == 0) continue;  // untyped
    out.push_back({entity(i), type_pred, type_iri(pick(s.types))});
    if (roll == 1) out.push_back({entity(i), type_pred, type_iri(pick(s.types))});
  }
  std::vector<Resource> literal_pool;
  for (int i = 0; i < s.literals; ++i) {
    literal_pool.push_back(i % 2 ? Resource::literal(std::to_string(i), std::string(xsd::integer))
                                 : Resource::literal(std::string(1, static_cast<char>('a' + i))));
  }
  while (static_cast<int>(out.size()) < s.assertions) {
    Resource p = Resource::iri(ex + "p" + std::to_string(pick(s.predicates)));
    Resource h = entity(pick(s.entities));
    int kind = pick(4);
    Resource t = kind <= 1               ? entity(pick(s.entities))
                 : kind == 2 && s.constants ? Resource::iri(ex + "c" + std::to_string(pick(s.constants)))
                 : s.literals           ? literal_pool[pick(s.literals)]
                                        : entity(pick(s.entities));
    out.push_back({h, p, t});
  }
  return out;
}

}  // namespace kgpat::testing
