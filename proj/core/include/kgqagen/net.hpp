#pragma once

#include <condition_variable>
#include <mutex>
#include <string>

namespace kgqagen {

struct RetryPolicy {
  int max_attempts = 5;
  int base_delay_ms = 250;
  int max_delay_ms = 10000;
  // Exponential backoff with full jitter; Retry-After wins when present.
};

// Runtime-sized counting semaphore (std::counting_semaphore fixes its
// ceiling at compile time). Caps concurrent requests toward shared services.
class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return count_ > 0; });
    --count_;
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int count_;
};

struct SemaphoreGuard {
  explicit SemaphoreGuard(Semaphore& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  Semaphore& sem;
};

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // leading slash, "/" when absent
};

SplitUrl split_url(const std::string& url);

// Delay before retry `attempt` (0-based), uniformly jittered in
// [0, min(base * 2^attempt, max)].
int backoff_with_jitter_ms(const RetryPolicy& policy, int attempt);

}  // namespace kgqagen
