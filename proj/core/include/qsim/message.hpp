// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "qsim/types.hpp"

namespace qsim {

struct AppendEntriesRequest {
  Term term = 0;
  ServerId leader_id = 0;
  LogIndex prev_log_index = 0;
  Term prev_log_term = 0;
  std::vector<LogEntry> entries;
  LogIndex leader_commit = 0;

  bool operator==(const AppendEntriesRequest&) const = default;
};

struct AppendEntriesResponse {
  Term term = 0;
  bool success = false;
  // Index of the last entry covered by a successful append; the leader sets
  // nextIndex past it. Meaningless when success is false.
  LogIndex last_appended = 0;

  bool operator==(const AppendEntriesResponse&) const = default;
};

// Vote solicitation without log information: the term alone decides.
struct PaxosVoteRequest {
  Term term = 0;
  ServerId candidate_id = 0;
  LogIndex leader_commit = 0;  // candidate's commit index; voters send entries above it

  bool operator==(const PaxosVoteRequest&) const = default;
};

struct PaxosVoteResponse {
  Term term = 0;
  bool vote_granted = false;
  // The voter's (index, entry) pairs above the candidate's commit index.
  std::vector<std::pair<LogIndex, LogEntry>> entries;

  bool operator==(const PaxosVoteResponse&) const = default;
};

struct RaftVoteRequest {
  Term term = 0;
  ServerId candidate_id = 0;
  LogIndex last_log_index = 0;
  Term last_log_term = 0;

  bool operator==(const RaftVoteRequest&) const = default;
};

struct RaftVoteResponse {
  Term term = 0;
  bool vote_granted = false;

  bool operator==(const RaftVoteResponse&) const = default;
};

using Message = std::variant<AppendEntriesRequest, AppendEntriesResponse,
                             PaxosVoteRequest, PaxosVoteResponse,
                             RaftVoteRequest, RaftVoteResponse>;

inline Term term_of(const Message& m) {
  return std::visit([](const auto& v) { return v.term; }, m);
}

}  // namespace qsim
