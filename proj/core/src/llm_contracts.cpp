#include "kgqagen/llm/contracts.hpp"

#include <json.hpp>

#include "kgqagen/ids.hpp"

namespace kgqagen::llm {

namespace {

using nlohmann::json;

json parse_strict_json(const std::string& text) {
  try {
    return json::parse(strip_code_fence(text));
  } catch (const json::exception& e) {
    throw FormatError(std::string("response is not valid JSON: ") + e.what());
  }
}

// Accepts "Q33541" as well as "Karakalpak (Q33541)"; returns the bare id.
std::string normalize_candidate_id(const std::string& raw) {
  const std::string trimmed = trim(raw);
  if (is_qid(trimmed)) return trimmed;
  std::string rest;
  const std::string id = strip_trailing_id(trimmed, 'Q', &rest);
  if (!id.empty()) return id;
  throw FormatError("candidate entry is not an entity id: '" + raw + "'");
}

std::string require_nonempty_string(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string())
    throw FormatError(std::string("missing or non-string key '") + key + "'");
  std::string value = doc[key].get<std::string>();
  if (trim(value).empty()) throw FormatError(std::string("key '") + key + "' is empty");
  return value;
}

}  // namespace

std::string strip_code_fence(const std::string& text) {
  std::string s = trim(text);
  if (!s.starts_with("```")) return s;
  const auto first_newline = s.find('\n');
  if (first_newline == std::string::npos) return s;
  const auto closing = s.rfind("```");
  if (closing <= first_newline) return s;
  return trim(s.substr(first_newline + 1, closing - first_newline - 1));
}

GenerationOutcome parse_generation_response(const std::string& text) {
  const json doc = parse_strict_json(text);
  if (!doc.is_object() || !doc.contains("sufficient") || !doc["sufficient"].is_boolean())
    throw FormatError("expected an object with boolean key 'sufficient'");

  if (!doc["sufficient"].get<bool>()) {
    if (!doc.contains("candidate") || !doc["candidate"].is_array())
      throw FormatError("insufficient response requires a 'candidate' array");
    Insufficient out;
    for (const auto& entry : doc["candidate"]) {
      if (!entry.is_string()) throw FormatError("candidate entries must be strings");
      out.candidates.push_back(normalize_candidate_id(entry.get<std::string>()));
    }
    if (out.candidates.empty()) throw FormatError("candidate list is empty");
    return out;
  }

  Sufficient out;
  out.question = require_nonempty_string(doc, "question");
  if (!doc.contains("answer") || !doc["answer"].is_array())
    throw FormatError("sufficient response requires an 'answer' array");
  for (const auto& entry : doc["answer"]) {
    if (!entry.is_string() || trim(entry.get<std::string>()).empty())
      throw FormatError("answer entries must be non-empty strings");
    out.answers.push_back(entry.get<std::string>());
  }
  if (out.answers.empty()) throw FormatError("answer list is empty");

  if (!doc.contains("proof") || !doc["proof"].is_array())
    throw FormatError("sufficient response requires a 'proof' array");
  for (const auto& entry : doc["proof"]) {
    if (!entry.is_array() || entry.size() != 3)
      throw FormatError("proof entries must be 3-item arrays");
    ProofTriple pt;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!entry[i].is_string()) throw FormatError("proof entries must contain strings");
      pt[i] = entry[i].get<std::string>();
    }
    out.proof.push_back(std::move(pt));
  }
  return out;
}

std::string serialize_generation_outcome(const GenerationOutcome& outcome) {
  nlohmann::ordered_json doc;
  if (const auto* insufficient = std::get_if<Insufficient>(&outcome)) {
    doc["sufficient"] = false;
    doc["candidate"] = insufficient->candidates;
  } else {
    const auto& s = std::get<Sufficient>(outcome);
    doc["sufficient"] = true;
    doc["question"] = s.question;
    doc["answer"] = s.answers;
    doc["proof"] = json::array();
    for (const auto& pt : s.proof) doc["proof"].push_back({pt[0], pt[1], pt[2]});
  }
  return doc.dump(2);
}

QueryRevision parse_revision_response(const std::string& text) {
  const json doc = parse_strict_json(text);
  if (!doc.is_object()) throw FormatError("expected a JSON object");
  if (!doc.contains("correct_sparql"))
    throw FormatError("missing key 'correct_sparql'");
  QueryRevision out{require_nonempty_string(doc, "correct_sparql")};
  return out;
}

}  // namespace kgqagen::llm
