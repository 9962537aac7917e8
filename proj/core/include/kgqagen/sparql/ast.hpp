#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kgqagen::sparql {

struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};

struct EntityIri {  // wd:Q…
  std::string qid;
  bool operator==(const EntityIri&) const = default;
};

struct PredicateIri {  // wdt:P…
  std::string pid;
  bool operator==(const PredicateIri&) const = default;
};

struct Lit {
  std::string value;
  bool operator==(const Lit&) const = default;
};

using PatternTerm = std::variant<Var, EntityIri, PredicateIri, Lit>;

struct TriplePattern {
  PatternTerm s;  // Var or EntityIri
  PatternTerm p;  // Var or PredicateIri
  PatternTerm o;  // any
  bool operator==(const TriplePattern&) const = default;
};

// The restricted query shape this system emits and checks: a basic graph
// pattern, optional DISTINCT and LIMIT, and at most one trailing
// SERVICE wikibase:label clause.
struct Query {
  std::vector<std::string> projected;
  std::vector<TriplePattern> patterns;
  bool label_service = false;
  bool distinct = false;
  std::optional<std::uint64_t> limit;
  bool operator==(const Query&) const = default;
};

std::string to_string(const PatternTerm& t);

// Canonical text form; parse(serialize(q)) == q on the accepted grammar.
std::string serialize(const Query& q);

}  // namespace kgqagen::sparql
