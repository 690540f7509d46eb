#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace agora {

// std::shuffle and std::uniform_int_distribution are implementation-defined;
// these helpers only rely on mt19937_64's specified output sequence so that
// splits and training orders are identical across standard libraries.

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling on the top of the range to avoid modulo bias.
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

template <typename T>
void seeded_shuffle(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace agora
