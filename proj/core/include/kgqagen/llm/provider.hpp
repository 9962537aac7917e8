#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgqagen/errors.hpp"
#include "kgqagen/net.hpp"

namespace kgqagen::llm {

enum class Role { System, User };

struct ChatMessage {
  Role role = Role::User;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;  // deterministic by default
  std::optional<int> max_tokens;
};

// Chat-completion access. Implementations must be shareable across workers.
class Provider {
 public:
  virtual ~Provider() = default;

  // Returns the assistant message content.
  virtual std::string complete(const ChatRequest& request) = 0;

  virtual std::uint64_t call_count() const = 0;
};

// Scripted replies for deterministic tests and offline runs. Responses are
// served either from a fingerprint table (first fingerprint found as a
// substring of the request content wins) or from an ordered queue. An
// exhausted queue is an error, never a silent recycle.
class ScriptedProvider : public Provider {
 public:
  ScriptedProvider() = default;
  explicit ScriptedProvider(std::vector<std::string> responses);

  void enqueue(std::string response);
  void respond_when(std::string fingerprint, std::string response);

  std::string complete(const ChatRequest& request) override;
  std::uint64_t call_count() const override;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> queue_;
  std::vector<std::pair<std::string, std::string>> keyed_;
  std::uint64_t calls_ = 0;
};

struct HttpProviderConfig {
  std::string base_url;     // e.g. https://api.openai.com/v1
  std::string api_key_env;  // environment variable holding the key
  int timeout_ms = 120000;
  int max_in_flight = 4;
  double requests_per_second = 0;  // 0 = unlimited
  RetryPolicy retry;
};

// Speaks the common chat-completions JSON protocol. 401/403 fail
// immediately; 429/5xx/transport errors retry per policy. A token bucket
// plus an in-flight cap keep many workers within the provider's limits.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  ~HttpProvider() override;

  std::string complete(const ChatRequest& request) override;
  std::uint64_t call_count() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kgqagen::llm
