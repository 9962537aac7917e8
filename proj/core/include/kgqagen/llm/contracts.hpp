#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kgqagen::llm {

// The model broke the strict-JSON contract. Callers treat this as a
// retryable LLM failure (one re-ask with the same prompt).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Surface-form proof triple as the model emits it:
// ["<label (QID)>", "<predicate (PID)>", "<label (QID)>"].
using ProofTriple = std::array<std::string, 3>;

struct Insufficient {
  std::vector<std::string> candidates;  // normalized to bare Q-ids
  bool operator==(const Insufficient&) const = default;
};

struct Sufficient {
  std::string question;
  std::vector<std::string> answers;  // raw "<label (QID)>" strings
  std::vector<ProofTriple> proof;
  bool operator==(const Sufficient&) const = default;
};

using GenerationOutcome = std::variant<Insufficient, Sufficient>;

// Parses the generator's strict-JSON reply. One leading/trailing markdown
// code fence is tolerated; anything else malformed raises FormatError.
GenerationOutcome parse_generation_response(const std::string& text);

// Inverse of parse_generation_response, in the documented output shape.
std::string serialize_generation_outcome(const GenerationOutcome& outcome);

struct QueryRevision {
  std::string correct_sparql;
  bool operator==(const QueryRevision&) const = default;
};

QueryRevision parse_revision_response(const std::string& text);

// Strips one ``` / ```json fence pair when present. Exposed for reuse by
// the judge-verdict parser.
std::string strip_code_fence(const std::string& text);

}  // namespace kgqagen::llm
