// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/rng.hpp"

#include <stdexcept>

namespace qsim {

uint64_t SplitMix64::uniform(uint64_t lo, uint64_t hi) {
  if (lo > hi) throw std::logic_error("uniform: empty range");
  uint64_t span = hi - lo + 1;
  if (span == 0) return next();  // full 64-bit range
  uint64_t reject_below = (0 - span) % span;
  for (;;) {
    uint64_t r = next();
    if (r >= reject_below) return lo + r % span;
  }
}

uint64_t derive_stream(uint64_t seed, std::string_view purpose, uint64_t a,
                       uint64_t b) {
  // FNV-1a over the purpose tag, then fold the numeric parts through
  // splitmix steps; collisions between distinct tuples are what matters.
  uint64_t h = 0xCBF29CE484222325ull;
  for (char c : purpose) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  SplitMix64 mix(seed ^ h);
  mix.next();
  SplitMix64 mix2(mix.next() ^ (a * 0x9E3779B97F4A7C15ull) ^
                  (b * 0xC2B2AE3D27D4EB4Full));
  return mix2.next();
}

}  // namespace qsim
