#pragma once

#include <stdexcept>
#include <string>

namespace kgqagen {

// Network / HTTP / provider failures that survived the retry policy.
// Commands map these to the infrastructure exit code.
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: config files, flags, malformed fixtures.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kgqagen
