#include "kgqagen/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <thread>

#include "kgqagen/errors.hpp"
#include "kgqagen/ids.hpp"
#include "kgqagen/llm/prompts.hpp"
#include "kgqagen/sparql/ast.hpp"

namespace kgqagen {

std::string to_string(AbandonReason reason) {
  switch (reason) {
    case AbandonReason::SeedExhausted: return "SeedExhausted";
    case AbandonReason::IterationLimit: return "IterationLimit";
    case AbandonReason::StepFailed: return "StepFailed";
    case AbandonReason::ProofResolutionFailed: return "ProofResolutionFailed";
    case AbandonReason::Infrastructure: return "Infrastructure";
  }
  return "Unknown";
}

bool Subgraph::add(Triple t) {
  if (!keys_.insert(triple_key(t)).second) return false;
  triples_.push_back(std::move(t));
  return true;
}

namespace {

void add_clipped(Subgraph& g, std::vector<Triple> triples, std::size_t cap) {
  for (auto& t : triples) {
    if (g.size() >= cap) break;  // newest overflow dropped, old kept
    g.add(std::move(t));
  }
}

std::string now_utc_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string instance_id(const EntityRef& seed, const std::string& question,
                        const std::vector<std::string>& raw_answers) {
  std::vector<std::string> ids;
  ids.reserve(raw_answers.size());
  for (const auto& raw : raw_answers) {
    const AnswerKey key = canonicalize_answer(raw);
    ids.push_back(key.qid ? *key.qid : "lit:" + key.normalized_label);
  }
  std::sort(ids.begin(), ids.end());
  std::string material = seed.qid + "\n" + question + "\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) material += ",";
    material += ids[i];
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(material)));
  return std::string("kgqa-") + buf;
}

struct ResolvedProof {
  std::vector<Triple> triples;
  std::string failure;  // non-empty when a line could not be grounded
};

// Proof lines arrive as surface strings; they are grounded against the
// subgraph by ids (entities/predicates) or literal value, never by label
// text, so label drift in the model output is harmless.
ResolvedProof resolve_proof(const Subgraph& g, const std::vector<llm::ProofTriple>& proof) {
  ResolvedProof out;
  std::unordered_set<std::string> seen;
  for (const auto& line : proof) {
    const std::string s_qid = strip_trailing_id(line[0], 'Q');
    const std::string p_pid = strip_trailing_id(line[1], 'P');
    const std::string o_qid = strip_trailing_id(line[2], 'Q');
    const std::string o_literal = trim(line[2]);
    if (s_qid.empty() || p_pid.empty()) {
      out.failure = "proof line has no subject/predicate id: [" + line[0] + ", " + line[1] +
                    ", " + line[2] + "]";
      return out;
    }
    const Triple* found = nullptr;
    for (const Triple& t : g.triples()) {
      if (t.subject.qid != s_qid || t.predicate.pid != p_pid) continue;
      if (const auto* e = term_entity(t.object)) {
        if (!o_qid.empty() && e->qid == o_qid) {
          found = &t;
          break;
        }
      } else if (o_qid.empty() && term_literal(t.object)->value == o_literal) {
        found = &t;
        break;
      }
    }
    if (!found) {
      out.failure = "proof line not grounded in subgraph: [" + line[0] + ", " + line[1] + ", " +
                    line[2] + "]";
      return out;
    }
    if (seen.insert(triple_key(*found)).second) out.triples.push_back(*found);
  }
  return out;
}

}  // namespace

std::optional<Subgraph> init_subgraph(const sparql::KgBackend& backend, const EntityRef& seed,
                                      const PipelineConfig& cfg, Rng& rng) {
  auto sampled = backend.one_hop(seed.qid, cfg.init_k, rng);
  if (sampled.empty()) return std::nullopt;
  Subgraph g(seed);
  add_clipped(g, std::move(sampled), cfg.max_subgraph_triples);
  return g;
}

Subgraph expand(Subgraph subgraph, const std::vector<std::string>& frontier,
                const sparql::KgBackend& backend, const PipelineConfig& cfg, Rng& rng) {
  if (subgraph.finalized()) throw std::logic_error("expand on a finalized subgraph");
  for (const auto& qid : frontier)
    add_clipped(subgraph, backend.one_hop(qid, cfg.expand_k, rng), cfg.max_subgraph_triples);
  subgraph.bump_iteration();
  return subgraph;
}

std::optional<llm::GenerationOutcome> step(const Subgraph& subgraph, llm::Provider& provider,
                                           const PipelineConfig& cfg) {
  if (subgraph.triples().empty()) throw std::invalid_argument("step on an empty subgraph");
  llm::ChatRequest request;
  request.model = cfg.generator_model;
  request.messages = {{llm::Role::User, llm::render_generator_prompt(subgraph.triples())}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string reply = provider.complete(request);
    try {
      return llm::parse_generation_response(reply);
    } catch (const llm::FormatError&) {
      // one re-ask with the same prompt, then the step is abandoned
    }
  }
  return std::nullopt;
}

std::string synthesize_sparql(const std::vector<Triple>& proof,
                              const std::vector<AnswerKey>& answers) {
  if (proof.empty()) throw SynthesisError("proof is empty");
  if (answers.empty()) throw SynthesisError("answer set is empty");

  std::vector<std::string> answer_qids;  // distinct, in answer order
  for (const auto& key : answers) {
    if (!key.qid)
      throw SynthesisError("answer '" + key.normalized_label + "' carries no entity id");
    if (std::find(answer_qids.begin(), answer_qids.end(), *key.qid) == answer_qids.end())
      answer_qids.push_back(*key.qid);
  }

  std::map<std::string, std::string> var_of;
  for (std::size_t i = 0; i < answer_qids.size(); ++i)
    var_of[answer_qids[i]] = answers.size() == 1 ? "ans" : "ans" + std::to_string(i + 1);

  std::unordered_set<std::string> in_proof;
  for (const Triple& t : proof) {
    in_proof.insert(t.subject.qid);
    if (const auto* e = term_entity(t.object)) in_proof.insert(e->qid);
  }
  for (const auto& qid : answer_qids)
    if (!in_proof.count(qid))
      throw SynthesisError("answer entity " + qid + " does not occur in the proof");

  sparql::Query q;
  for (const auto& qid : answer_qids) q.projected.push_back(var_of[qid]);
  q.label_service = true;
  for (const Triple& t : proof) {
    sparql::TriplePattern tp;
    tp.s = var_of.count(t.subject.qid) ? sparql::PatternTerm(sparql::Var{var_of[t.subject.qid]})
                                       : sparql::PatternTerm(sparql::EntityIri{t.subject.qid});
    tp.p = sparql::PredicateIri{t.predicate.pid};
    if (const auto* e = term_entity(t.object)) {
      tp.o = var_of.count(e->qid) ? sparql::PatternTerm(sparql::Var{var_of[e->qid]})
                                  : sparql::PatternTerm(sparql::EntityIri{e->qid});
    } else {
      tp.o = sparql::Lit{term_literal(t.object)->value};
    }
    q.patterns.push_back(std::move(tp));
  }
  return sparql::serialize(q);
}

SeedOutcome generate_instance(const sparql::KgBackend& backend, llm::Provider& provider,
                              const EntityRef& seed, const PipelineConfig& cfg, Rng& rng) {
  try {
    auto init = init_subgraph(backend, seed, cfg, rng);
    if (!init) return Abandoned{AbandonReason::SeedExhausted, "seed has no neighbors"};
    Subgraph g = std::move(*init);

    std::unordered_set<std::string> expanded{seed.qid};
    while (true) {
      auto outcome = step(g, provider, cfg);
      if (!outcome)
        return Abandoned{AbandonReason::StepFailed, "model output unparseable twice"};

      if (const auto* sufficient = std::get_if<llm::Sufficient>(&*outcome)) {
        g.finalize();
        ResolvedProof resolved = resolve_proof(g, sufficient->proof);
        if (!resolved.failure.empty())
          return Abandoned{AbandonReason::ProofResolutionFailed, resolved.failure};
        if (resolved.triples.empty())
          return Abandoned{AbandonReason::ProofResolutionFailed, "proof is empty"};

        std::vector<AnswerKey> keys;
        keys.reserve(sufficient->answers.size());
        for (const auto& raw : sufficient->answers) keys.push_back(canonicalize_answer(raw));

        CandidateInstance instance;
        instance.seed = g.seed();
        instance.question = sufficient->question;
        instance.answers = sufficient->answers;
        instance.proof = std::move(resolved.triples);
        try {
          instance.sparql = synthesize_sparql(instance.proof, keys);
        } catch (const SynthesisError&) {
          instance.sparql.clear();  // verification will revise from scratch
        }
        instance.id = instance_id(instance.seed, instance.question, instance.answers);
        instance.meta.iterations = g.iteration();
        instance.meta.model = cfg.generator_model;
        instance.meta.created_at = cfg.fixed_timestamp.value_or(now_utc_iso8601());
        instance.subgraph = std::move(g);
        return instance;
      }

      const auto& insufficient = std::get<llm::Insufficient>(*outcome);
      std::vector<std::string> frontier;
      for (const auto& qid : insufficient.candidates)
        if (!expanded.count(qid)) frontier.push_back(qid);
      if (frontier.empty())
        return Abandoned{AbandonReason::IterationLimit, "all frontier entities already expanded"};
      if (g.iteration() >= cfg.max_iterations)
        return Abandoned{AbandonReason::IterationLimit,
                         "iteration limit " + std::to_string(cfg.max_iterations) + " reached"};
      g = expand(std::move(g), frontier, backend, cfg, rng);
      for (const auto& qid : frontier) expanded.insert(qid);
    }
  } catch (const TransportError& e) {
    return Abandoned{AbandonReason::Infrastructure, e.what()};
  }
}

std::vector<SeedOutcome> run_batch(const sparql::KgBackend& backend, llm::Provider& provider,
                                   const std::vector<EntityRef>& seeds, const PipelineConfig& cfg,
                                   std::size_t workers) {
  std::vector<SeedOutcome> results(seeds.size(),
                                   Abandoned{AbandonReason::Infrastructure, "not run"});
  if (seeds.empty()) return results;

  const std::size_t pool = std::max<std::size_t>(1, std::min(workers, seeds.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      Rng rng(cfg.rng_seed ^ static_cast<std::uint64_t>(i));
      results[i] = generate_instance(backend, provider, seeds[i], cfg, rng);
    }
  };

  if (pool == 1) {
    work();
    return results;
  }
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace kgqagen
