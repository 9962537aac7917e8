#pragma once

#include <string>
#include <vector>

#include "kgqagen/kg_store.hpp"

namespace kgqagen::llm {

// Unified generation prompt: sufficiency check, exploration-set selection
// and question generation in one template. `{triples}` is replaced by the
// subgraph serialized as a JSON array of 3-string arrays in insertion
// order. Rendering is byte-stable for a fixed subgraph.
std::string render_generator_prompt(const std::vector<Triple>& subgraph_triples);

// Query-revision prompt. Placeholders are spliced literally; content that
// happens to contain `{sparql}` or `{question}` is never re-expanded.
std::string render_validator_prompt(const std::string& question, const std::string& sparql);

// Judge prompt for semantic answer equivalence: a yes/no question with the
// instance's question text as context.
std::string render_judge_prompt(const std::string& question, const std::string& prediction,
                                const std::string& gold);

}  // namespace kgqagen::llm
