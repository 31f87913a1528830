// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace qsim {

// splitmix64. Chosen over <random> engines plus distributions because the
// standard does not pin distribution algorithms, and traces must be
// byte-identical across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : x_(seed) {}

  uint64_t next() {
    uint64_t z = (x_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], unbiased via bottom rejection.
  uint64_t uniform(uint64_t lo, uint64_t hi);

 private:
  uint64_t x_;
};

// Decorrelated child seed for a named stream, so each (purpose, a, b) tuple
// draws independently of every other and of draw order.
uint64_t derive_stream(uint64_t seed, std::string_view purpose, uint64_t a,
                       uint64_t b);

}  // namespace qsim
