#pragma once

// Independent oracle for basic-graph-pattern evaluation: enumerate every
// assignment of query variables to store terms and keep the assignments
// under which all patterns are present in the store. No join machinery is
// shared with the implementation under test.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "kgqagen/kg_store.hpp"
#include "kgqagen/sparql/ast.hpp"
#include "kgqagen/sparql/eval.hpp"

namespace kgqagen::test {

namespace oracle_detail {

// Same key scheme the store uses for term identity.
inline std::string entity_key(const std::string& qid) { return "E:" + qid; }
inline std::string predicate_key(const std::string& pid) { return "P:" + pid; }

struct Domains {
  std::vector<std::string> subjects;    // entity keys
  std::vector<std::string> predicates;  // predicate keys
  std::vector<std::string> objects;     // entity + literal keys
};

inline Domains collect_domains(const TripleStore& store) {
  std::set<std::string> subjects, predicates, objects;
  for (const Triple& t : store.triples()) {
    subjects.insert(entity_key(t.subject.qid));
    objects.insert(entity_key(t.subject.qid));  // any entity may be an object term
    predicates.insert(predicate_key(t.predicate.pid));
    objects.insert(term_key(t.object));
    if (const auto* e = term_entity(t.object)) subjects.insert(entity_key(e->qid));
  }
  Domains d;
  d.subjects.assign(subjects.begin(), subjects.end());
  d.predicates.assign(predicates.begin(), predicates.end());
  d.objects.assign(objects.begin(), objects.end());
  return d;
}

inline std::string literal_value_of(const std::string& key) {
  return key.substr(key.find(':', 2) + 1);
}

inline bool term_matches(const sparql::PatternTerm& pt, const std::string& key,
                         const std::map<std::string, std::string>& assignment) {
  if (const auto* v = std::get_if<sparql::Var>(&pt)) return assignment.at(v->name) == key;
  if (const auto* e = std::get_if<sparql::EntityIri>(&pt)) return key == entity_key(e->qid);
  if (const auto* p = std::get_if<sparql::PredicateIri>(&pt))
    return key == predicate_key(p->pid);
  const auto& lit = std::get<sparql::Lit>(pt);
  return key.starts_with("L:") && literal_value_of(key) == lit.value;
}

inline sparql::BoundValue materialize(const std::string& key, bool label_service,
                                      const TripleStore& store) {
  sparql::BoundValue bv;
  if (key.starts_with("L:")) {
    bv.literal = literal_value_of(key);
    return bv;
  }
  bv.qid = key.substr(2);
  if (label_service) {
    if (auto label = store.label_of(*bv.qid)) bv.label = *label;
  }
  return bv;
}

}  // namespace oracle_detail

inline sparql::ResultSet brute_force_evaluate(const sparql::Query& q, const TripleStore& store) {
  using namespace oracle_detail;

  // Per-variable domain: intersection of the role domains of every
  // position the variable occupies. (An assignment outside a role domain
  // can never satisfy the pattern, so this only prunes dead branches.)
  const Domains domains = collect_domains(store);
  std::map<std::string, std::vector<std::string>> var_domains;
  auto restrict_domain = [&](const sparql::PatternTerm& pt, const std::vector<std::string>& role) {
    const auto* v = std::get_if<sparql::Var>(&pt);
    if (!v) return;
    auto it = var_domains.find(v->name);
    if (it == var_domains.end()) {
      var_domains.emplace(v->name, role);
      return;
    }
    std::vector<std::string> narrowed;
    for (const auto& key : it->second)
      if (std::find(role.begin(), role.end(), key) != role.end()) narrowed.push_back(key);
    it->second = std::move(narrowed);
  };
  for (const auto& p : q.patterns) {
    restrict_domain(p.s, domains.subjects);
    restrict_domain(p.p, domains.predicates);
    restrict_domain(p.o, domains.objects);
  }

  std::vector<std::string> var_names;
  for (const auto& [name, _] : var_domains) var_names.push_back(name);

  // Ground-triple membership test.
  std::unordered_set<std::string> facts;
  for (const Triple& t : store.triples())
    facts.insert(entity_key(t.subject.qid) + "|" + predicate_key(t.predicate.pid) + "|" +
                 term_key(t.object));

  std::vector<std::vector<std::string>> key_rows;
  std::map<std::string, std::string> assignment;

  auto ground = [&](const sparql::PatternTerm& pt) -> std::string {
    if (const auto* v = std::get_if<sparql::Var>(&pt)) return assignment.at(v->name);
    if (const auto* e = std::get_if<sparql::EntityIri>(&pt)) return entity_key(e->qid);
    if (const auto* p = std::get_if<sparql::PredicateIri>(&pt)) return predicate_key(p->pid);
    return "";  // literal patterns are checked by value, not grounded
  };

  std::function<void(std::size_t)> enumerate = [&](std::size_t vi) {
    if (vi == var_names.size()) {
      for (const auto& p : q.patterns) {
        const std::string sk = ground(p.s);
        const std::string pk = ground(p.p);
        if (std::holds_alternative<sparql::Lit>(p.o)) {
          // match any literal object with this value under (s, p)
          bool found = false;
          for (const Triple& t : store.triples()) {
            if (entity_key(t.subject.qid) != sk || predicate_key(t.predicate.pid) != pk) continue;
            if (term_matches(p.o, term_key(t.object), assignment)) {
              found = true;
              break;
            }
          }
          if (!found) return;
        } else {
          if (!facts.count(sk + "|" + pk + "|" + ground(p.o))) return;
        }
      }
      std::vector<std::string> row;
      for (const auto& name : q.projected) row.push_back(assignment.at(name));
      key_rows.push_back(std::move(row));
      return;
    }
    for (const auto& key : var_domains.at(var_names[vi])) {
      assignment[var_names[vi]] = key;
      enumerate(vi + 1);
    }
    assignment.erase(var_names[vi]);
  };
  enumerate(0);

  std::sort(key_rows.begin(), key_rows.end());
  if (q.distinct) key_rows.erase(std::unique(key_rows.begin(), key_rows.end()), key_rows.end());
  if (q.limit && key_rows.size() > *q.limit) key_rows.resize(*q.limit);

  sparql::ResultSet rs;
  rs.variables = q.projected;
  for (const auto& keys : key_rows) {
    std::map<std::string, sparql::BoundValue> row;
    for (std::size_t i = 0; i < keys.size(); ++i)
      row.emplace(q.projected[i], materialize(keys[i], q.label_service, store));
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

}  // namespace kgqagen::test
