// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bitset>
#include <optional>
#include <string>
#include <string_view>

namespace qsim {

// Deliberate single-rule breakages used to prove the checkers can see
// through the interface. All off by default.
enum class Mutation : uint8_t {
  RaftNoCommitTermGuard,     // commit any majority-replicated index
  PaxosNoTermRewrite,        // keep merged entries' original terms
  PaxosPickFirstNotGreatest, // merge picks the lowest-term entry
  RaftNoUpToDateCheck,       // grant votes regardless of log freshness
  RaftNoVotedFor,            // grant any number of votes per term
  kCount_,
};

constexpr size_t kMutationCount = static_cast<size_t>(Mutation::kCount_);

std::string_view mutation_id(Mutation m);
std::optional<Mutation> mutation_from_id(std::string_view id);
const std::array<Mutation, kMutationCount>& all_mutations();

class MutationSet {
 public:
  MutationSet() = default;

  MutationSet& enable(Mutation m) {
    bits_.set(static_cast<size_t>(m));
    return *this;
  }
  bool enabled(Mutation m) const { return bits_.test(static_cast<size_t>(m)); }
  bool any() const { return bits_.any(); }

  bool operator==(const MutationSet&) const = default;

 private:
  std::bitset<kMutationCount> bits_;
};

}  // namespace qsim
