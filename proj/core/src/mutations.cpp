// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/mutations.hpp"

namespace qsim {

namespace {
constexpr std::string_view kIds[kMutationCount] = {
    "raft-no-commit-term-guard",
    "paxos-no-term-rewrite",
    "paxos-pick-first-not-greatest",
    "raft-no-up-to-date-check",
    "raft-no-voted-for",
};
}  // namespace

std::string_view mutation_id(Mutation m) {
  return kIds[static_cast<size_t>(m)];
}

std::optional<Mutation> mutation_from_id(std::string_view id) {
  for (size_t i = 0; i < kMutationCount; ++i)
    if (kIds[i] == id) return static_cast<Mutation>(i);
  return std::nullopt;
}

const std::array<Mutation, kMutationCount>& all_mutations() {
  static const std::array<Mutation, kMutationCount> all = [] {
    std::array<Mutation, kMutationCount> a{};
    for (size_t i = 0; i < kMutationCount; ++i) a[i] = static_cast<Mutation>(i);
    return a;
  }();
  return all;
}

}  // namespace qsim
