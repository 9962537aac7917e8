#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "kgqagen/rng.hpp"

namespace kgqagen {

// A labeled Wikidata-style entity. When the source graph has no label for
// an id, the id string itself is stored as the label; has_real_label()
// distinguishes the two so callers can deprioritize unlabeled nodes.
struct EntityRef {
  std::string label;
  std::string qid;

  bool has_real_label() const { return label != qid; }
  bool operator==(const EntityRef&) const = default;
};

struct PredicateRef {
  std::string label;
  std::string pid;

  bool operator==(const PredicateRef&) const = default;
};

enum class LiteralKind { Plain, Date, Number };

struct LiteralTerm {
  std::string value;
  LiteralKind kind = LiteralKind::Plain;

  bool operator==(const LiteralTerm&) const = default;
};

// Object position of a triple: an entity or a literal.
using Term = std::variant<EntityRef, LiteralTerm>;

bool term_is_entity(const Term& t);
const EntityRef* term_entity(const Term& t);
const LiteralTerm* term_literal(const Term& t);

// Key used for identity, dedup and deterministic ordering of object terms.
// Entities sort before literals.
std::string term_key(const Term& t);

struct Triple {
  EntityRef subject;
  PredicateRef predicate;
  Term object;

  bool operator==(const Triple&) const = default;
};

// Identity ignores labels: two triples with the same ids are the same fact.
std::string triple_key(const Triple& t);
bool triple_order_less(const Triple& a, const Triple& b);

// Surface serialization: "<label> (<Q-ID>)" for entities and predicates,
// the bare value for literals.
std::string entity_surface(const EntityRef& e);
std::string predicate_surface(const PredicateRef& p);
std::string term_surface(const Term& t);
std::array<std::string, 3> triple_surface(const Triple& t);

enum class Direction { Out, In, Both };

std::optional<Direction> direction_from_string(const std::string& s);
std::string to_string(Direction d);

// In-memory labeled triple store with subject/object indexes and a label
// table. Immutable once loaded; safe for concurrent reads.
class TripleStore {
 public:
  TripleStore() = default;

  // Adds a triple unless an id-identical one is already present.
  // Returns true when the triple was new.
  bool add(Triple t);

  std::size_t size() const { return triples_.size(); }
  const std::vector<Triple>& triples() const { return triples_; }
  bool contains(const Triple& t) const;

  // All triples incident to `qid` in the requested direction, in a fixed
  // order (subject id, predicate id, object key). A self-loop appears once
  // under Both. Unknown entities yield an empty list.
  std::vector<Triple> neighbors(const std::string& qid, Direction dir = Direction::Both) const;

  // Uniform sample without replacement of min(k, degree) neighbor triples.
  std::vector<Triple> sample_one_hop(const std::string& qid, std::size_t k, Rng& rng,
                                     Direction dir = Direction::Both) const;

  // English label for a Q/P id, when one was seen during ingestion.
  std::optional<std::string> label_of(const std::string& id) const;

  bool operator==(const TripleStore& other) const { return triples_ == other.triples_; }

 private:
  std::vector<Triple> triples_;
  std::unordered_set<std::string> keys_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_object_;
  std::unordered_map<std::string, std::string> labels_;

  void record_label(const std::string& id, const std::string& label);
};

// Loads a TSV fixture: six tab-separated fields per line
//   s_label  s_qid  p_label  p_pid  o_label  o_qid_or_literal
// where the last field is a Q-id or `lit:<kind>:<value>` with kind one of
// plain|date|number. Blank lines and lines starting with `#` are skipped.
// Duplicate facts collapse to one. Malformed input raises ConfigError
// naming the line and field.
TripleStore load_tsv(const std::string& path);
TripleStore parse_tsv(const std::string& content, const std::string& origin = "<string>");

// Inverse of load_tsv: one line per triple in insertion order.
std::string to_tsv(const TripleStore& store);
void save_tsv(const TripleStore& store, const std::string& path);

}  // namespace kgqagen
