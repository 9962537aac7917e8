#include "kgqagen/net.hpp"

#include <cmath>
#include <random>

#include "kgqagen/errors.hpp"

namespace kgqagen {

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

int backoff_with_jitter_ms(const RetryPolicy& policy, int attempt) {
  const double exp = policy.base_delay_ms * std::pow(2.0, attempt);
  const int ceiling = static_cast<int>(std::min<double>(exp, policy.max_delay_ms));
  if (ceiling <= 0) return 0;
  thread_local std::mt19937 jitter(std::random_device{}());
  return static_cast<int>(jitter() % static_cast<unsigned>(ceiling + 1));
}

}  // namespace kgqagen
