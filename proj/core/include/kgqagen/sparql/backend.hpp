#pragma once

#include <memory>
#include <string>

#include "kgqagen/kg_store.hpp"
#include "kgqagen/sparql/eval.hpp"
#include "kgqagen/sparql/remote.hpp"

namespace kgqagen::sparql {

// One KG interface for the pipeline and verifier: bounded one-hop neighbor
// sampling plus query execution. The in-memory variant is the deterministic
// test oracle; the remote variant talks to a live SPARQL endpoint.
class KgBackend {
 public:
  virtual ~KgBackend() = default;

  virtual std::vector<Triple> one_hop(const std::string& qid, std::size_t k, Rng& rng) const = 0;

  // Executes raw query text. In-memory backends parse with the restricted
  // grammar (ParseError propagates); remote backends pass text through.
  virtual ResultSet run_query(const std::string& query_text) const = 0;

  virtual std::optional<std::string> label_of(const std::string& id) const { return std::nullopt; }
};

class InMemoryBackend : public KgBackend {
 public:
  InMemoryBackend(std::shared_ptr<const TripleStore> store, Direction direction = Direction::Both)
      : store_(std::move(store)), direction_(direction) {}

  std::vector<Triple> one_hop(const std::string& qid, std::size_t k, Rng& rng) const override {
    return store_->sample_one_hop(qid, k, rng, direction_);
  }

  ResultSet run_query(const std::string& query_text) const override;

  std::optional<std::string> label_of(const std::string& id) const override {
    return store_->label_of(id);
  }

  const TripleStore& store() const { return *store_; }

 private:
  std::shared_ptr<const TripleStore> store_;
  Direction direction_;
};

class RemoteBackend : public KgBackend {
 public:
  RemoteBackend(RemoteConfig config, Direction direction = Direction::Both,
                std::size_t fetch_cap = 100)
      : endpoint_(std::move(config)), direction_(direction), fetch_cap_(fetch_cap) {}

  std::vector<Triple> one_hop(const std::string& qid, std::size_t k, Rng& rng) const override;

  ResultSet run_query(const std::string& query_text) const override {
    return endpoint_.execute(query_text);
  }

  const RemoteEndpoint& endpoint() const { return endpoint_; }

  // The fixed neighbor-fetch query for a seed entity; exposed for tests.
  std::string one_hop_query(const std::string& qid) const;

 private:
  RemoteEndpoint endpoint_;
  Direction direction_;
  std::size_t fetch_cap_;
};

}  // namespace kgqagen::sparql
