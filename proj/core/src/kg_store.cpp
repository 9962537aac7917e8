#include "kgqagen/kg_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kgqagen/errors.hpp"
#include "kgqagen/ids.hpp"

namespace kgqagen {

namespace {

std::string literal_kind_name(LiteralKind k) {
  switch (k) {
    case LiteralKind::Plain: return "plain";
    case LiteralKind::Date: return "date";
    case LiteralKind::Number: return "number";
  }
  return "plain";
}

std::optional<LiteralKind> literal_kind_from(const std::string& s) {
  if (s == "plain") return LiteralKind::Plain;
  if (s == "date") return LiteralKind::Date;
  if (s == "number") return LiteralKind::Number;
  return std::nullopt;
}

}  // namespace

bool term_is_entity(const Term& t) { return std::holds_alternative<EntityRef>(t); }

const EntityRef* term_entity(const Term& t) { return std::get_if<EntityRef>(&t); }

const LiteralTerm* term_literal(const Term& t) { return std::get_if<LiteralTerm>(&t); }

std::string term_key(const Term& t) {
  if (const auto* e = term_entity(t)) return "E:" + e->qid;
  const auto* l = term_literal(t);
  return "L:" + literal_kind_name(l->kind) + ":" + l->value;
}

std::string triple_key(const Triple& t) {
  return t.subject.qid + "\t" + t.predicate.pid + "\t" + term_key(t.object);
}

bool triple_order_less(const Triple& a, const Triple& b) {
  if (a.subject.qid != b.subject.qid) return id_less(a.subject.qid, b.subject.qid);
  if (a.predicate.pid != b.predicate.pid) return id_less(a.predicate.pid, b.predicate.pid);
  const std::string ka = term_key(a.object), kb = term_key(b.object);
  if (ka.starts_with("E:") && kb.starts_with("E:"))
    return id_less(std::string_view(ka).substr(2), std::string_view(kb).substr(2));
  return ka < kb;
}

std::string entity_surface(const EntityRef& e) { return e.label + " (" + e.qid + ")"; }

std::string predicate_surface(const PredicateRef& p) { return p.label + " (" + p.pid + ")"; }

std::string term_surface(const Term& t) {
  if (const auto* e = term_entity(t)) return entity_surface(*e);
  return term_literal(t)->value;
}

std::array<std::string, 3> triple_surface(const Triple& t) {
  return {entity_surface(t.subject), predicate_surface(t.predicate), term_surface(t.object)};
}

std::optional<Direction> direction_from_string(const std::string& s) {
  if (s == "out") return Direction::Out;
  if (s == "in") return Direction::In;
  if (s == "both") return Direction::Both;
  return std::nullopt;
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Out: return "out";
    case Direction::In: return "in";
    case Direction::Both: return "both";
  }
  return "both";
}

bool TripleStore::add(Triple t) {
  const std::string key = triple_key(t);
  if (!keys_.insert(key).second) return false;
  const std::size_t idx = triples_.size();
  record_label(t.subject.qid, t.subject.label);
  record_label(t.predicate.pid, t.predicate.label);
  if (const auto* obj = term_entity(t.object)) {
    record_label(obj->qid, obj->label);
    by_object_[obj->qid].push_back(idx);
  }
  by_subject_[t.subject.qid].push_back(idx);
  triples_.push_back(std::move(t));
  return true;
}

void TripleStore::record_label(const std::string& id, const std::string& label) {
  if (label.empty() || label == id) return;  // missing label: id stands in
  labels_.emplace(id, label);                // first-seen label wins
}

bool TripleStore::contains(const Triple& t) const { return keys_.count(triple_key(t)) > 0; }

std::vector<Triple> TripleStore::neighbors(const std::string& qid, Direction dir) const {
  std::vector<std::size_t> idxs;
  if (dir == Direction::Out || dir == Direction::Both) {
    if (auto it = by_subject_.find(qid); it != by_subject_.end())
      idxs.insert(idxs.end(), it->second.begin(), it->second.end());
  }
  if (dir == Direction::In || dir == Direction::Both) {
    if (auto it = by_object_.find(qid); it != by_object_.end())
      idxs.insert(idxs.end(), it->second.begin(), it->second.end());
  }
  std::sort(idxs.begin(), idxs.end());
  idxs.erase(std::unique(idxs.begin(), idxs.end()), idxs.end());  // self-loops once

  std::vector<Triple> out;
  out.reserve(idxs.size());
  for (std::size_t i : idxs) out.push_back(triples_[i]);
  std::sort(out.begin(), out.end(), triple_order_less);
  return out;
}

std::vector<Triple> TripleStore::sample_one_hop(const std::string& qid, std::size_t k, Rng& rng,
                                                Direction dir) const {
  return sample_without_replacement(neighbors(qid, dir), k, rng);
}

std::optional<std::string> TripleStore::label_of(const std::string& id) const {
  if (auto it = labels_.find(id); it != labels_.end()) return it->second;
  return std::nullopt;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

[[noreturn]] void fail_line(const std::string& origin, std::size_t line_no,
                            const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line_no << ": " << what;
  throw ConfigError(os.str());
}

}  // namespace

TripleStore parse_tsv(const std::string& content, const std::string& origin) {
  TripleStore store;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const auto fields = split_tabs(line);
    if (fields.size() != 6)
      fail_line(origin, line_no,
                "expected 6 tab-separated fields, got " + std::to_string(fields.size()));
    if (!is_qid(fields[1]))
      fail_line(origin, line_no, "field 2: invalid entity id '" + fields[1] + "'");
    if (!is_pid(fields[3]))
      fail_line(origin, line_no, "field 4: invalid predicate id '" + fields[3] + "'");

    Triple t;
    t.subject = {fields[0].empty() ? fields[1] : fields[0], fields[1]};
    t.predicate = {fields[2].empty() ? fields[3] : fields[2], fields[3]};

    const std::string& obj = fields[5];
    if (obj.starts_with("lit:")) {
      const auto second = obj.find(':', 4);
      if (second == std::string::npos)
        fail_line(origin, line_no, "field 6: literal needs lit:<kind>:<value>");
      const auto kind = literal_kind_from(obj.substr(4, second - 4));
      if (!kind)
        fail_line(origin, line_no,
                  "field 6: unknown literal kind '" + obj.substr(4, second - 4) + "'");
      t.object = LiteralTerm{obj.substr(second + 1), *kind};
    } else if (is_qid(obj)) {
      t.object = EntityRef{fields[4].empty() ? obj : fields[4], obj};
    } else {
      fail_line(origin, line_no, "field 6: expected Q-id or lit:<kind>:<value>, got '" + obj + "'");
    }
    store.add(std::move(t));
  }
  return store;
}

TripleStore load_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open fixture file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tsv(buf.str(), path);
}

std::string to_tsv(const TripleStore& store) {
  std::ostringstream out;
  for (const Triple& t : store.triples()) {
    out << t.subject.label << '\t' << t.subject.qid << '\t' << t.predicate.label << '\t'
        << t.predicate.pid << '\t';
    if (const auto* e = term_entity(t.object)) {
      out << e->label << '\t' << e->qid;
    } else {
      const auto* l = term_literal(t.object);
      out << l->value << '\t' << "lit:" << literal_kind_name(l->kind) << ':' << l->value;
    }
    out << '\n';
  }
  return out.str();
}

void save_tsv(const TripleStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write fixture file: " + path);
  out << to_tsv(store);
}

}  // namespace kgqagen
