#pragma once

#include <string>
#include <variant>
#include <vector>

#include "kgqagen/answer_key.hpp"
#include "kgqagen/llm/provider.hpp"
#include "kgqagen/pipeline.hpp"
#include "kgqagen/sparql/backend.hpp"

namespace kgqagen {

enum class RejectReason { NonExecutable, Empty, Mismatch, Infrastructure };

std::string to_string(RejectReason reason);

struct Accepted {
  std::string final_sparql;  // the query that actually verified
  std::vector<AnswerKey> retrieved;
  std::size_t attempts = 0;  // revisions consumed; 0 = original query passed
};

struct Rejected {
  RejectReason reason;
  std::size_t attempts = 0;
  std::string detail;
};

using ValidationOutcome = std::variant<Accepted, Rejected>;

struct VerifierConfig {
  std::string revision_model = "gpt-4o-mini";  // lightweight reviser
  std::size_t max_attempts = 3;
};

// Symbolic validation: execute the instance's query, compare the retrieved
// set against the generated answers, and drive up to max_attempts LLM
// revisions on failure (non-executable, empty, or mismatched results all
// trigger revision). The first query whose result set matches is recorded
// as final_sparql. Question, answers and proof are never altered.
ValidationOutcome validate(const CandidateInstance& instance, const sparql::KgBackend& backend,
                           llm::Provider& provider, const VerifierConfig& cfg = {});

}  // namespace kgqagen
