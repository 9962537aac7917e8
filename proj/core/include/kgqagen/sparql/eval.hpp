#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgqagen/kg_store.hpp"
#include "kgqagen/sparql/ast.hpp"

namespace kgqagen::sparql {

// A single variable binding. `qid` holds the bound resource id (Q-id for
// entities, P-id when a predicate variable was bound), `literal` holds a
// bound literal value, and `label` carries the label-service enrichment.
struct BoundValue {
  std::optional<std::string> qid;
  std::optional<std::string> label;
  std::optional<std::string> literal;
  std::optional<std::string> datatype;  // remote literals only

  bool operator==(const BoundValue&) const = default;
};

struct ResultSet {
  std::vector<std::string> variables;
  std::vector<std::map<std::string, BoundValue>> rows;

  bool empty() const { return rows.empty(); }
  bool operator==(const ResultSet&) const = default;
};

// Basic-graph-pattern evaluation over the store: the multiset of projected
// bindings over all complete pattern assignments (nested-loop join with
// index lookups). DISTINCT deduplicates; rows come back sorted by their
// binding values; LIMIT truncates after the sort. With label_service set,
// id bindings are annotated from the store's label table.
ResultSet evaluate(const Query& query, const TripleStore& store);

}  // namespace kgqagen::sparql
