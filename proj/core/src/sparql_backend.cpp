#include "kgqagen/sparql/backend.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "kgqagen/sparql/parser.hpp"

namespace kgqagen::sparql {

ResultSet InMemoryBackend::run_query(const std::string& query_text) const {
  return evaluate(parse(query_text), *store_);
}

std::string RemoteBackend::one_hop_query(const std::string& qid) const {
  const std::string out_branch = "wd:" + qid + " ?p ?o . BIND(wd:" + qid + " AS ?s)";
  const std::string in_branch = "?s ?p wd:" + qid + " . BIND(wd:" + qid + " AS ?o)";

  std::ostringstream q;
  q << "SELECT ?s ?sLabel ?prop ?propLabel ?o ?oLabel WHERE {\n";
  switch (direction_) {
    case Direction::Out: q << "  " << out_branch << "\n"; break;
    case Direction::In: q << "  " << in_branch << "\n"; break;
    case Direction::Both:
      q << "  { " << out_branch << " }\n  UNION\n  { " << in_branch << " }\n";
      break;
  }
  q << "  ?prop wikibase:directClaim ?p .\n"
       "  SERVICE wikibase:label { bd:serviceParam wikibase:language \"en\". }\n"
       "}\nLIMIT "
    << fetch_cap_;
  return q.str();
}

namespace {

LiteralKind kind_from_datatype(const std::optional<std::string>& datatype) {
  if (!datatype) return LiteralKind::Plain;
  if (datatype->ends_with("#dateTime") || datatype->ends_with("#date"))
    return LiteralKind::Date;
  if (datatype->ends_with("#decimal") || datatype->ends_with("#integer") ||
      datatype->ends_with("#double") || datatype->ends_with("#float"))
    return LiteralKind::Number;
  return LiteralKind::Plain;
}

}  // namespace

std::vector<Triple> RemoteBackend::one_hop(const std::string& qid, std::size_t k,
                                           Rng& rng) const {
  const ResultSet rs = endpoint_.execute(one_hop_query(qid));

  std::vector<Triple> triples;
  std::unordered_set<std::string> seen;
  for (const auto& row : rs.rows) {
    auto cell = [&](const char* name) -> const BoundValue* {
      auto it = row.find(name);
      return it == row.end() ? nullptr : &it->second;
    };
    const BoundValue* s = cell("s");
    const BoundValue* prop = cell("prop");
    const BoundValue* o = cell("o");
    if (!s || !prop || !o || !s->qid || !prop->qid) continue;

    Triple t;
    t.subject = {s->label.value_or(*s->qid), *s->qid};
    t.predicate = {prop->label.value_or(*prop->qid), *prop->qid};
    if (o->qid) {
      t.object = EntityRef{o->label.value_or(*o->qid), *o->qid};
    } else if (o->literal) {
      t.object = LiteralTerm{*o->literal, kind_from_datatype(o->datatype)};
    } else {
      continue;
    }
    if (seen.insert(triple_key(t)).second) triples.push_back(std::move(t));
  }
  std::sort(triples.begin(), triples.end(), triple_order_less);
  return sample_without_replacement(std::move(triples), k, rng);
}

}  // namespace kgqagen::sparql
