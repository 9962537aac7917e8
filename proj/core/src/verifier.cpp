#include "kgqagen/verifier.hpp"

#include "kgqagen/errors.hpp"
#include "kgqagen/llm/prompts.hpp"
#include "kgqagen/sparql/parser.hpp"

namespace kgqagen {

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::NonExecutable: return "NonExecutable";
    case RejectReason::Empty: return "Empty";
    case RejectReason::Mismatch: return "Mismatch";
    case RejectReason::Infrastructure: return "Infrastructure";
  }
  return "Unknown";
}

namespace {

llm::QueryRevision ask_revision(llm::Provider& provider, const std::string& question,
                                const std::string& failing_query, const VerifierConfig& cfg) {
  llm::ChatRequest request;
  request.model = cfg.revision_model;
  request.messages = {
      {llm::Role::User,
       llm::render_validator_prompt(
           question, failing_query.empty() ? "# no executable query was produced" : failing_query)}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string reply = provider.complete(request);
    try {
      return llm::parse_revision_response(reply);
    } catch (const llm::FormatError&) {
      // one re-ask, then give up on this instance
    }
  }
  throw TransportError("revision reply violated the JSON contract twice");
}

}  // namespace

ValidationOutcome validate(const CandidateInstance& instance, const sparql::KgBackend& backend,
                           llm::Provider& provider, const VerifierConfig& cfg) {
  std::vector<AnswerKey> gold;
  gold.reserve(instance.answers.size());
  for (const auto& raw : instance.answers) gold.push_back(canonicalize_answer(raw));
  if (gold.empty()) return Rejected{RejectReason::Mismatch, 0, "instance has no answers"};

  std::string query = instance.sparql;
  RejectReason last = RejectReason::NonExecutable;
  std::string last_detail = "no query";

  for (std::size_t attempt = 0; attempt <= cfg.max_attempts; ++attempt) {
    if (attempt > 0) {
      try {
        query = ask_revision(provider, instance.question, query, cfg).correct_sparql;
      } catch (const TransportError& e) {
        return Rejected{RejectReason::Infrastructure, attempt, e.what()};
      }
    }
    if (query.empty()) {
      last = RejectReason::NonExecutable;
      last_detail = "empty query";
      continue;
    }

    sparql::ResultSet rs;
    try {
      rs = backend.run_query(query);
    } catch (const sparql::ParseError& e) {
      last = RejectReason::NonExecutable;
      last_detail = e.what();
      continue;
    } catch (const TransportError& e) {
      // Endpoint trouble (incl. query timeouts) counts as a failed attempt;
      // the loop may still recover with a cheaper revised query.
      last = RejectReason::Infrastructure;
      last_detail = e.what();
      continue;
    }

    const std::vector<AnswerKey> retrieved = resultset_to_answers(rs);
    if (retrieved.empty()) {
      last = RejectReason::Empty;
      last_detail = "query returned no results";
      continue;
    }
    if (answers_equal(retrieved, gold)) return Accepted{query, retrieved, attempt};
    last = RejectReason::Mismatch;
    last_detail = "retrieved set differs from generated answers";
  }
  return Rejected{last, cfg.max_attempts, last_detail};
}

}  // namespace kgqagen
