#include "kgqagen/sparql/remote.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "kgqagen/errors.hpp"
#include "kgqagen/ids.hpp"
#include "kgqagen/net.hpp"

namespace kgqagen::sparql {

namespace {

using nlohmann::json;

std::string id_from_uri(const std::string& uri) {
  const auto slash = uri.rfind('/');
  const std::string tail = slash == std::string::npos ? uri : uri.substr(slash + 1);
  if (is_qid(tail) || is_pid(tail)) return tail;
  return {};
}

}  // namespace

ResultSet decode_results_json(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed results document: ") + e.what());
  }
  if (!doc.contains("head") || !doc["head"].contains("vars") || !doc.contains("results") ||
      !doc["results"].contains("bindings"))
    throw TransportError("malformed results document: missing head/results");

  std::vector<std::string> all_vars;
  for (const auto& v : doc["head"]["vars"]) {
    if (!v.is_string()) throw TransportError("malformed results document: non-string var");
    all_vars.push_back(v.get<std::string>());
  }

  // A "<v>Label" column is the label-service companion of "<v>"; fold it.
  auto label_source_of = [&](const std::string& v) -> std::string {
    if (v.size() > 5 && v.ends_with("Label")) {
      const std::string stem = v.substr(0, v.size() - 5);
      if (std::find(all_vars.begin(), all_vars.end(), stem) != all_vars.end()) return stem;
    }
    return {};
  };

  ResultSet rs;
  for (const auto& v : all_vars)
    if (label_source_of(v).empty()) rs.variables.push_back(v);

  for (const auto& binding : doc["results"]["bindings"]) {
    if (!binding.is_object()) throw TransportError("malformed results document: binding");
    std::map<std::string, BoundValue> row;
    for (const auto& v : rs.variables) row.emplace(v, BoundValue{});
    for (const auto& [var, cell] : binding.items()) {
      if (!cell.contains("type") || !cell.contains("value"))
        throw TransportError("malformed results document: cell shape");
      const std::string type = cell["type"].get<std::string>();
      const std::string value = cell["value"].get<std::string>();

      const std::string stem = label_source_of(var);
      if (!stem.empty()) {
        row[stem].label = value;
        continue;
      }
      auto it = row.find(var);
      if (it == row.end()) continue;  // var not declared in head
      BoundValue& bv = it->second;
      if (type == "uri") {
        const std::string id = id_from_uri(value);
        if (!id.empty()) {
          bv.qid = id;
        } else {
          bv.literal = value;  // non-Wikidata-id URI: keep verbatim
        }
      } else {
        bv.literal = value;
        if (cell.contains("datatype")) bv.datatype = cell["datatype"].get<std::string>();
      }
    }
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

struct RemoteEndpoint::Impl {
  RemoteConfig cfg;
  SplitUrl url;
  mutable Semaphore in_flight;
  mutable std::atomic<std::uint64_t> requests{0};

  explicit Impl(RemoteConfig c)
      : cfg(std::move(c)), url(split_url(cfg.endpoint_url)), in_flight(std::max(1, cfg.max_in_flight)) {}
};

RemoteEndpoint::RemoteEndpoint(RemoteConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  if (impl_->cfg.user_agent.empty())
    throw ConfigError("remote SPARQL backend requires a descriptive user agent");
}

RemoteEndpoint::~RemoteEndpoint() = default;

std::uint64_t RemoteEndpoint::request_count() const { return impl_->requests.load(); }

ResultSet RemoteEndpoint::execute(const std::string& query_text) const {
  const RetryPolicy& retry = impl_->cfg.retry;
  std::string last_error;

  for (int attempt = 0; attempt < std::max(1, retry.max_attempts); ++attempt) {
    if (attempt > 0) {
      int delay = backoff_with_jitter_ms(retry, attempt - 1);
      if (!last_error.empty() && last_error.starts_with("retry-after:")) {
        delay = std::stoi(last_error.substr(12)) * 1000;
        last_error = "server busy (Retry-After honored)";
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    httplib::Result res;
    {
      SemaphoreGuard guard(impl_->in_flight);
      httplib::Client client(impl_->url.base);
      client.set_connection_timeout(0, impl_->cfg.timeout_ms * 1000LL);
      client.set_read_timeout(impl_->cfg.timeout_ms / 1000, (impl_->cfg.timeout_ms % 1000) * 1000);
      client.set_follow_location(true);
      httplib::Headers headers = {{"Accept", "application/sparql-results+json"},
                                  {"User-Agent", impl_->cfg.user_agent}};
      impl_->requests.fetch_add(1);
      res = client.Post(impl_->url.path, headers, query_text, "application/sparql-query");
    }

    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return decode_results_json(res->body);
    if (res->status == 429 || res->status >= 500) {
      const std::string retry_after = res->get_header_value("Retry-After");
      if (!retry_after.empty() && std::all_of(retry_after.begin(), retry_after.end(), ::isdigit))
        last_error = "retry-after:" + retry_after;
      else
        last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    throw TransportError("SPARQL endpoint returned HTTP " + std::to_string(res->status) + ": " +
                         res->body.substr(0, 200));
  }
  throw TransportError("SPARQL endpoint unreachable after " +
                       std::to_string(std::max(1, retry.max_attempts)) +
                       " attempts; last error: " + last_error);
}

}  // namespace kgqagen::sparql
