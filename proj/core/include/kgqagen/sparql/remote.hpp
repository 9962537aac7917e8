#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "kgqagen/net.hpp"
#include "kgqagen/sparql/eval.hpp"

namespace kgqagen::sparql {

struct RemoteConfig {
  std::string endpoint_url;  // e.g. https://query.wikidata.org/sparql
  std::string user_agent;    // Wikidata etiquette: descriptive, with contact
  int timeout_ms = 30000;
  int max_in_flight = 2;
  RetryPolicy retry;
};

// SPARQL 1.1 Protocol client: POSTs the raw query text, decodes
// application/sparql-results+json. Retries 429 and 5xx per policy, honoring
// Retry-After; 4xx other than 429 and decode failures surface immediately
// as TransportError. Usable concurrently; an internal semaphore caps
// in-flight requests.
class RemoteEndpoint {
 public:
  explicit RemoteEndpoint(RemoteConfig config);
  ~RemoteEndpoint();

  RemoteEndpoint(const RemoteEndpoint&) = delete;
  RemoteEndpoint& operator=(const RemoteEndpoint&) = delete;

  ResultSet execute(const std::string& query_text) const;

  // Requests attempted over the lifetime, including retries. Test hook.
  std::uint64_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Decodes a SPARQL results-JSON document. Entity URIs `…/entity/Q123`
// become qids; a `<var>Label` binding folds into <var>'s label. Exposed
// separately so the decode path is testable without a server.
ResultSet decode_results_json(const std::string& body);

}  // namespace kgqagen::sparql
