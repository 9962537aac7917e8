#include "kgqagen/llm/provider.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace kgqagen::llm {

namespace {
using nlohmann::json;
}

ScriptedProvider::ScriptedProvider(std::vector<std::string> responses) {
  for (auto& r : responses) queue_.push_back(std::move(r));
}

void ScriptedProvider::enqueue(std::string response) {
  std::lock_guard lock(mu_);
  queue_.push_back(std::move(response));
}

void ScriptedProvider::respond_when(std::string fingerprint, std::string response) {
  std::lock_guard lock(mu_);
  keyed_.emplace_back(std::move(fingerprint), std::move(response));
}

std::string ScriptedProvider::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  ++calls_;
  for (const auto& [fingerprint, response] : keyed_) {
    for (const auto& msg : request.messages)
      if (msg.content.find(fingerprint) != std::string::npos) return response;
  }
  if (queue_.empty())
    throw TransportError("scripted provider exhausted after " + std::to_string(calls_ - 1) +
                         " responses");
  std::string out = std::move(queue_.front());
  queue_.pop_front();
  return out;
}

std::uint64_t ScriptedProvider::call_count() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

// Token bucket: refills at `rate` per second up to a one-second burst.
class TokenBucket {
 public:
  explicit TokenBucket(double rate) : rate_(rate), tokens_(rate), last_(clock::now()) {}

  void take() {
    if (rate_ <= 0) return;
    std::unique_lock lock(mu_);
    while (true) {
      refill();
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
  }

 private:
  using clock = std::chrono::steady_clock;

  void refill() {
    const auto now = clock::now();
    tokens_ = std::min(rate_, tokens_ + rate_ * std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

  std::mutex mu_;
  double rate_;
  double tokens_;
  clock::time_point last_;
};

struct HttpProvider::Impl {
  HttpProviderConfig cfg;
  SplitUrl url;
  std::string api_key;
  Semaphore in_flight;
  TokenBucket bucket;
  std::atomic<std::uint64_t> calls{0};

  explicit Impl(HttpProviderConfig c)
      : cfg(std::move(c)),
        url(split_url(cfg.base_url)),
        in_flight(std::max(1, cfg.max_in_flight)),
        bucket(cfg.requests_per_second) {
    const char* key = cfg.api_key_env.empty() ? nullptr : std::getenv(cfg.api_key_env.c_str());
    if (!key || !*key)
      throw ConfigError("API key environment variable is unset: " + cfg.api_key_env);
    api_key = key;
  }
};

HttpProvider::HttpProvider(HttpProviderConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpProvider::~HttpProvider() = default;

std::uint64_t HttpProvider::call_count() const { return impl_->calls.load(); }

std::string HttpProvider::complete(const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["messages"] = json::array();
  for (const auto& msg : request.messages)
    body["messages"].push_back(
        {{"role", msg.role == Role::System ? "system" : "user"}, {"content", msg.content}});
  body["temperature"] = request.temperature;
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  const std::string payload = body.dump();

  std::string path = impl_->url.path;
  if (path == "/") path.clear();
  path += "/chat/completions";

  const RetryPolicy& retry = impl_->cfg.retry;
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, retry.max_attempts); ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(backoff_with_jitter_ms(retry, attempt - 1)));

    impl_->bucket.take();
    httplib::Result res;
    {
      SemaphoreGuard guard(impl_->in_flight);
      httplib::Client client(impl_->url.base);
      client.set_connection_timeout(0, impl_->cfg.timeout_ms * 1000LL);
      client.set_read_timeout(impl_->cfg.timeout_ms / 1000, (impl_->cfg.timeout_ms % 1000) * 1000);
      httplib::Headers headers = {{"Authorization", "Bearer " + impl_->api_key}};
      impl_->calls.fetch_add(1);
      res = client.Post(path, headers, payload, "application/json");
    }

    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      try {
        const json doc = json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const json::exception& e) {
        throw TransportError(std::string("malformed completion response: ") + e.what());
      }
    }
    if (res->status == 401 || res->status == 403)
      throw TransportError("authentication failed (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    throw TransportError("chat completion returned HTTP " + std::to_string(res->status) + ": " +
                         res->body.substr(0, 200));
  }
  throw TransportError("chat completion unreachable after " +
                       std::to_string(std::max(1, retry.max_attempts)) +
                       " attempts; last error: " + last_error);
}

}  // namespace kgqagen::llm
