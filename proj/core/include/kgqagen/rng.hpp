#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace kgqagen {

// All randomized sampling in the project runs off explicitly seeded 64-bit
// Mersenne streams. Draws go through uniform_index below rather than
// std::uniform_int_distribution so that the byte-level output of a seeded
// run is pinned to this code, not to a particular stdlib.
using Rng = std::mt19937_64;

// Exact-uniform integer in [0, n) via rejection sampling. n must be > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % span);
}

// Uniform sample of min(k, items.size()) elements without replacement.
// Partial Fisher-Yates over a copy; result order is the draw order.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> items, std::size_t k, Rng& rng) {
  const std::size_t take = std::min(k, items.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + uniform_index(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(take);
  return items;
}

// In-place deterministic shuffle (used by the dataset splitter).
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace kgqagen
