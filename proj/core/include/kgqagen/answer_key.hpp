#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgqagen/sparql/eval.hpp"

namespace kgqagen {

// Canonical form of one answer: entity id when known plus a normalized
// label. Qid equality dominates comparisons; the label matters only when a
// side has no id (literal answers).
struct AnswerKey {
  std::optional<std::string> qid;
  std::string normalized_label;

  bool operator==(const AnswerKey&) const = default;
  bool operator<(const AnswerKey& other) const {
    return std::tie(qid, normalized_label) < std::tie(other.qid, other.normalized_label);
  }
};

// "Johann Martin Schleyer (Q12712)" -> {Q12712, "johann martin schleyer"};
// "AUD" -> {nullopt, "aud"}.
AnswerKey canonicalize_answer(const std::string& raw);

// One key per distinct bound value across all rows and projected variables.
std::vector<AnswerKey> resultset_to_answers(const sparql::ResultSet& rs);

// True iff a perfect 1:1 matching exists where keys match on equal qids,
// or on equal labels when either side lacks a qid.
bool answers_equal(const std::vector<AnswerKey>& a, const std::vector<AnswerKey>& b);

}  // namespace kgqagen
