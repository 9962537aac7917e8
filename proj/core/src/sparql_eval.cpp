#include "kgqagen/sparql/eval.hpp"

#include <algorithm>
#include <unordered_map>

namespace kgqagen::sparql {

namespace {

// Ground terms are joined on their identity keys: "E:<qid>" for entities,
// "P:<pid>" for predicates, "L:<kind>:<value>" for literals (same scheme as
// TripleStore::term_key, plus the predicate namespace).
using Binding = std::unordered_map<std::string, std::string>;

std::string subject_key(const Triple& t) { return "E:" + t.subject.qid; }
std::string predicate_key(const Triple& t) { return "P:" + t.predicate.pid; }

std::string literal_value_of(const std::string& key) {
  // key = "L:<kind>:<value>"
  const auto second = key.find(':', 2);
  return key.substr(second + 1);
}

bool unify(const PatternTerm& pt, const std::string& key, Binding& binding,
           std::vector<std::string>& trail) {
  if (const auto* e = std::get_if<EntityIri>(&pt)) return key == "E:" + e->qid;
  if (const auto* p = std::get_if<PredicateIri>(&pt)) return key == "P:" + p->pid;
  if (const auto* l = std::get_if<Lit>(&pt))
    return key.starts_with("L:") && literal_value_of(key) == l->value;
  const auto& var = std::get<Var>(pt);
  auto it = binding.find(var.name);
  if (it != binding.end()) return it->second == key;
  binding.emplace(var.name, key);
  trail.push_back(var.name);
  return true;
}

// Bound entity id a pattern position resolves to under the current binding,
// if any; used to pick an index for candidate triples.
std::optional<std::string> resolved_entity(const PatternTerm& pt, const Binding& binding) {
  if (const auto* e = std::get_if<EntityIri>(&pt)) return e->qid;
  if (const auto* v = std::get_if<Var>(&pt)) {
    auto it = binding.find(v->name);
    if (it != binding.end() && it->second.starts_with("E:")) return it->second.substr(2);
  }
  return std::nullopt;
}

class Evaluator {
 public:
  Evaluator(const Query& q, const TripleStore& store) : q_(q), store_(store) {}

  ResultSet run() {
    Binding binding;
    descend(0, binding);

    std::sort(rows_.begin(), rows_.end());
    if (q_.distinct) rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    if (q_.limit && rows_.size() > *q_.limit) rows_.resize(*q_.limit);

    ResultSet rs;
    rs.variables = q_.projected;
    rs.rows.reserve(rows_.size());
    for (const auto& keys : rows_) {
      std::map<std::string, BoundValue> row;
      for (std::size_t i = 0; i < keys.size(); ++i)
        row.emplace(q_.projected[i], materialize(keys[i]));
      rs.rows.push_back(std::move(row));
    }
    return rs;
  }

 private:
  void descend(std::size_t pattern_idx, Binding& binding) {
    if (pattern_idx == q_.patterns.size()) {
      std::vector<std::string> keys;
      keys.reserve(q_.projected.size());
      for (const auto& v : q_.projected) keys.push_back(binding.at(v));
      rows_.push_back(std::move(keys));
      return;
    }
    const TriplePattern& tp = q_.patterns[pattern_idx];

    std::vector<Triple> indexed;
    const std::vector<Triple>* candidates = nullptr;
    if (auto s = resolved_entity(tp.s, binding)) {
      indexed = store_.neighbors(*s, Direction::Out);
      candidates = &indexed;
    } else if (auto o = resolved_entity(tp.o, binding)) {
      indexed = store_.neighbors(*o, Direction::In);
      candidates = &indexed;
    } else {
      candidates = &store_.triples();
    }

    for (const Triple& t : *candidates) {
      std::vector<std::string> trail;
      if (unify(tp.s, subject_key(t), binding, trail) &&
          unify(tp.p, predicate_key(t), binding, trail) &&
          unify(tp.o, term_key(t.object), binding, trail)) {
        descend(pattern_idx + 1, binding);
      }
      for (const auto& name : trail) binding.erase(name);
    }
  }

  BoundValue materialize(const std::string& key) const {
    BoundValue bv;
    if (key.starts_with("L:")) {
      bv.literal = literal_value_of(key);
      return bv;
    }
    bv.qid = key.substr(2);  // "E:…" or "P:…"
    if (q_.label_service) {
      if (auto label = store_.label_of(*bv.qid)) bv.label = *label;
    }
    return bv;
  }

  const Query& q_;
  const TripleStore& store_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

ResultSet evaluate(const Query& query, const TripleStore& store) {
  return Evaluator(query, store).run();
}

}  // namespace kgqagen::sparql
