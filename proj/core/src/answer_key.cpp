#include "kgqagen/answer_key.hpp"

#include <algorithm>
#include <set>

#include "kgqagen/ids.hpp"

namespace kgqagen {

AnswerKey canonicalize_answer(const std::string& raw) {
  std::string rest;
  const std::string qid = strip_trailing_id(raw, 'Q', &rest);
  AnswerKey key;
  if (!qid.empty()) key.qid = qid;
  key.normalized_label = collapse_whitespace(to_lower(rest));
  return key;
}

std::vector<AnswerKey> resultset_to_answers(const sparql::ResultSet& rs) {
  std::vector<AnswerKey> keys;
  std::set<std::string> seen;
  for (const auto& row : rs.rows) {
    for (const auto& var : rs.variables) {
      auto it = row.find(var);
      if (it == row.end()) continue;
      const sparql::BoundValue& bv = it->second;
      AnswerKey key;
      std::string identity;
      if (bv.qid) {
        key.qid = bv.qid;
        key.normalized_label = collapse_whitespace(to_lower(bv.label.value_or("")));
        identity = "id:" + *bv.qid;
      } else if (bv.literal) {
        key.normalized_label = collapse_whitespace(to_lower(*bv.literal));
        identity = "lit:" + key.normalized_label;
      } else {
        continue;  // unbound cell
      }
      if (seen.insert(identity).second) keys.push_back(std::move(key));
    }
  }
  return keys;
}

namespace {

bool keys_match(const AnswerKey& a, const AnswerKey& b) {
  if (a.qid && b.qid) return *a.qid == *b.qid;
  return a.normalized_label == b.normalized_label;
}

// Kuhn's augmenting-path matching; answer sets are small.
bool try_augment(std::size_t i, const std::vector<std::vector<std::size_t>>& adj,
                 std::vector<int>& matched_b, std::vector<bool>& visited) {
  for (std::size_t j : adj[i]) {
    if (visited[j]) continue;
    visited[j] = true;
    if (matched_b[j] < 0 ||
        try_augment(static_cast<std::size_t>(matched_b[j]), adj, matched_b, visited)) {
      matched_b[j] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

}  // namespace

bool answers_equal(const std::vector<AnswerKey>& a, const std::vector<AnswerKey>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;

  std::vector<std::vector<std::size_t>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (keys_match(a[i], b[j])) adj[i].push_back(j);

  std::vector<int> matched_b(b.size(), -1);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<bool> visited(b.size(), false);
    if (try_augment(i, adj, matched_b, visited)) ++matched;
  }
  return matched == a.size();
}

}  // namespace kgqagen
