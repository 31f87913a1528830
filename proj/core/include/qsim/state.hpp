// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>

#include "qsim/types.hpp"

namespace qsim {

enum class Role { Follower, Candidate, Leader };

const char* role_name(Role r);

// The fields a server must write to stable storage before acknowledging
// anything that depends on them. voted_for is only meaningful under raft.
struct PersistentState {
  Term current_term = 0;
  std::optional<ServerId> voted_for;
  Log log;

  bool operator==(const PersistentState&) const = default;
};

// Per-candidacy bookkeeping for paxos elections. Reset on every new election.
struct PaxosCandidateState {
  std::set<ServerId> votes_received;
  // Everything voters reported above the candidate's commit index, keyed by
  // log index. Sets keep duplicate reports idempotent.
  std::map<LogIndex, std::set<LogEntry>> entries_seen;
  // commit_index frozen at election start; the merge domain hangs off it.
  LogIndex commit_snapshot = 0;

  bool operator==(const PaxosCandidateState&) const = default;
};

struct RaftCandidateState {
  std::set<ServerId> votes_received;

  bool operator==(const RaftCandidateState&) const = default;
};

using CandidateState =
    std::variant<std::monostate, PaxosCandidateState, RaftCandidateState>;

// Leader-only replication bookkeeping, discarded on step-down.
struct LeaderState {
  // next_index[p]: first log index to send to p next.
  // match_index[p]: highest index known replicated on p; self tracks own log.
  std::map<ServerId, LogIndex> next_index;
  std::map<ServerId, LogIndex> match_index;

  bool operator==(const LeaderState&) const = default;
};

struct NodeState {
  ServerId self = 0;

  // persistent
  Term current_term = 0;
  std::optional<ServerId> voted_for;
  Log log;

  // volatile
  Role role = Role::Follower;
  LogIndex commit_index = 0;
  LogIndex last_applied = 0;
  CandidateState candidate;
  std::optional<LeaderState> leader;

  PersistentState persistent() const {
    return PersistentState{current_term, voted_for, log};
  }

  bool operator==(const NodeState&) const = default;
};

}  // namespace qsim
