#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace logmap {

using Rng = std::mt19937_64;

/// Deterministic engine for a (seed, stream...) tuple; streams give each
/// sweep job its own sequence independent of scheduling.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  for (auto s : stream) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq full(words.begin(), words.end());
  return Rng(full);
}

/// Uniform double strictly inside (0,1), built from the top 53 bits so the
/// sequence is identical across standard library implementations.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace logmap
