#include "kgqagen/llm/prompts.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kgqagen::llm {

namespace {

const std::string kGeneratorTemplate = R"PROMPT(You are given a small set of RDF triples from **Wikidata**.

Format:
Each triple is a 3-item array:
["<label> (<Q-ID>)", "<predicate> (<P-ID>)", "<label> (<Q-ID>)"]

Triples:
{triples}

Your task is to determine whether this subgraph is **sufficient to support a challenging and non-trivial question** for a knowledge graph question answering (KGQA) benchmark.

**Guidelines**:

1. **Reasoning Depth**
- Prefer questions requiring at least 2-hop reasoning.
- Avoid generic topics or subclass chains—focus on instance-level, specific entities.
- Use factual constraints (e.g., date, affiliation) only when needed to disambiguate the answer or add meaningful specificity.
- Do not over-constrain—include only what is necessary to yield a specific answer.

2. **Entity Selection and Expansion**
- Focus on concrete, instance-level entities (e.g., Q7186), not types like Q5 (human) or Q11424 (film).
- Avoid generic classes like “scientist”, “award”, or “event”, and relations like “subclass of” or “instance of”.
- Prefer entities and paths supporting deeper reasoning—e.g., affiliations, recognitions, or spatiotemporal links.

3. **Difficulty**
- Encourage inverse relations, comparative logic, date/number filters, or set membership.
- Ensure the answer cannot be derived from general knowledge alone.
- The subgraph must contain all supporting information to answer the question.

4. **Naturalness**
- Phrase the question as a fluent, self-contained query a user might ask.
- Avoid references to the input format (e.g., "triples", "given data").
- Do not use phrases like:
  - "from the given data"
  - "among these entities"
  - "listed here"

5. **Clarity**
- The question must be unambiguous and logically imply a unique, specific answer.
- Avoid vague or underspecified language.

**Output Format**:

If the graph is **not sufficient**, return:
{
  "sufficient": false,
  "candidate": [<QID>, ..., <QID>]
}

If **sufficient**, return:
{
  "sufficient": true,
  "question": "<natural-language question>",
  "answer": ["<answer-label (QID)>", "..."],
  "proof": [
    ["<label (QID)>", "<predicate (PID)>", "<label (QID)>"],
    ...
  ]
}

Return strict JSON only — no commentary.)PROMPT";

const std::string kValidatorTemplate = R"PROMPT(You are given a SPARQL query over Wikidata that returned no results.

**Question:**
{question}

**Original SPARQL:**
{sparql}

Your task is to revise the query so that it returns valid results from Wikidata.

**Revision Guidelines:**
- Use only essential triple patterns. Avoid OPTIONAL and FILTER clauses unless strictly necessary.
- The query must end with a single SERVICE wikibase:label clause to retrieve English labels.
- Ensure the query is syntactically valid and directly executable at https://query.wikidata.org.

**Output Format:**
Return a single JSON object in the exact format below — no commentary, no markdown:
{
  "correct_sparql": "<REVISED SPARQL QUERY HERE>"
})PROMPT";

std::string json_quote(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string render_generator_prompt(const std::vector<Triple>& subgraph_triples) {
  if (subgraph_triples.empty())
    throw std::invalid_argument("generator prompt requires a non-empty subgraph");

  std::ostringstream triples;
  triples << "[\n";
  for (std::size_t i = 0; i < subgraph_triples.size(); ++i) {
    const auto surface = triple_surface(subgraph_triples[i]);
    triples << "  [" << json_quote(surface[0]) << ", " << json_quote(surface[1]) << ", "
            << json_quote(surface[2]) << "]";
    if (i + 1 < subgraph_triples.size()) triples << ",";
    triples << "\n";
  }
  triples << "]";

  const auto pos = kGeneratorTemplate.find("{triples}");
  return kGeneratorTemplate.substr(0, pos) + triples.str() +
         kGeneratorTemplate.substr(pos + 9);
}

std::string render_validator_prompt(const std::string& question, const std::string& sparql) {
  if (question.empty() || sparql.empty())
    throw std::invalid_argument("validator prompt requires non-empty question and sparql");

  const auto qpos = kValidatorTemplate.find("{question}");
  const auto spos = kValidatorTemplate.find("{sparql}");
  std::string out;
  out.reserve(kValidatorTemplate.size() + question.size() + sparql.size());
  out += kValidatorTemplate.substr(0, qpos);
  out += question;
  out += kValidatorTemplate.substr(qpos + 10, spos - (qpos + 10));
  out += sparql;
  out += kValidatorTemplate.substr(spos + 8);
  return out;
}

std::string render_judge_prompt(const std::string& question, const std::string& prediction,
                                const std::string& gold) {
  std::ostringstream os;
  os << "For the question " << json_quote(question) << ", is the answer " << json_quote(prediction)
     << " semantically equivalent to " << json_quote(gold)
     << "? Reply with exactly one word: yes or no.";
  return os.str();
}

}  // namespace kgqagen::llm
