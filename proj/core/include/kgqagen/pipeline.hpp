#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "kgqagen/answer_key.hpp"
#include "kgqagen/kg_store.hpp"
#include "kgqagen/llm/contracts.hpp"
#include "kgqagen/llm/provider.hpp"
#include "kgqagen/sparql/backend.hpp"

namespace kgqagen {

// The evolving per-seed context. Triples keep insertion order and never
// shrink; iteration counts completed expansions.
class Subgraph {
 public:
  Subgraph() = default;
  explicit Subgraph(EntityRef seed) : seed_(std::move(seed)) {}

  bool add(Triple t);
  bool contains(const Triple& t) const { return keys_.count(triple_key(t)) > 0; }

  const EntityRef& seed() const { return seed_; }
  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  std::size_t iteration() const { return iteration_; }
  bool finalized() const { return finalized_; }

  void bump_iteration() { ++iteration_; }
  void finalize() { finalized_ = true; }

 private:
  EntityRef seed_;
  std::vector<Triple> triples_;
  std::unordered_set<std::string> keys_;
  std::size_t iteration_ = 0;
  bool finalized_ = false;
};

struct PipelineConfig {
  std::size_t init_k = 15;
  std::size_t expand_k = 12;
  std::size_t max_iterations = 5;
  std::size_t max_subgraph_triples = 200;
  std::uint64_t rng_seed = 0;
  std::string generator_model = "gpt-4.1";
  Direction direction = Direction::Both;
  // Set for reproducible runs; otherwise instances carry wall-clock time.
  std::optional<std::string> fixed_timestamp;
};

struct CandidateMeta {
  std::size_t iterations = 0;
  std::string model;
  std::string created_at;
};

struct CandidateInstance {
  std::string id;  // content hash of (seed qid, question, answer ids)
  EntityRef seed;
  std::string question;
  std::vector<std::string> answers;  // raw "<label (QID)>" strings
  std::vector<Triple> proof;
  std::string sparql;  // empty when synthesis failed; revision starts from scratch
  Subgraph subgraph;
  CandidateMeta meta;
};

enum class AbandonReason {
  SeedExhausted,
  IterationLimit,
  StepFailed,
  ProofResolutionFailed,
  Infrastructure,
};

std::string to_string(AbandonReason reason);

struct Abandoned {
  AbandonReason reason;
  std::string detail;
};

using SeedOutcome = std::variant<CandidateInstance, Abandoned>;

class SynthesisError : public std::runtime_error {
 public:
  explicit SynthesisError(const std::string& msg) : std::runtime_error(msg) {}
};

// Seed subgraph: up to init_k sampled one-hop triples. Empty optional when
// the seed has no neighbors at all.
std::optional<Subgraph> init_subgraph(const sparql::KgBackend& backend, const EntityRef& seed,
                                      const PipelineConfig& cfg, Rng& rng);

// One-hop expansion around each frontier entity: sample expand_k triples
// per entity and union them in. Growth is clipped at max_subgraph_triples
// by dropping the newest overflow. Iteration advances by exactly one.
Subgraph expand(Subgraph subgraph, const std::vector<std::string>& frontier,
                const sparql::KgBackend& backend, const PipelineConfig& cfg, Rng& rng);

// Renders the generator prompt, asks the model, parses the strict-JSON
// reply. One malformed reply earns one re-ask with the same prompt;
// a second is a failed step (nullopt).
std::optional<llm::GenerationOutcome> step(const Subgraph& subgraph, llm::Provider& provider,
                                           const PipelineConfig& cfg);

// Mechanical query synthesis from the proof: each proof triple becomes a
// pattern, answer entities become projected variables (?ans, or ?ansN when
// several), other entities wd: IRIs, predicates wdt: IRIs, literals quoted,
// label-service clause appended.
std::string synthesize_sparql(const std::vector<Triple>& proof,
                              const std::vector<AnswerKey>& answers);

// Full per-seed loop: init, judge, expand until sufficient or bounded out,
// then resolve the proof against the subgraph and assemble the candidate.
SeedOutcome generate_instance(const sparql::KgBackend& backend, llm::Provider& provider,
                              const EntityRef& seed, const PipelineConfig& cfg, Rng& rng);

// Worker-pool batch over seeds. Each seed gets a private rng seeded with
// rng_seed ^ index, so results do not depend on scheduling order.
std::vector<SeedOutcome> run_batch(const sparql::KgBackend& backend, llm::Provider& provider,
                                   const std::vector<EntityRef>& seeds, const PipelineConfig& cfg,
                                   std::size_t workers = 4);

}  // namespace kgqagen
