// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qsim/algorithm.hpp"
#include "qsim/trace.hpp"

namespace qsim {

enum class ViolationKind {
  StateMachineSafety,   // two servers applied different ops at one index
  LeaderCompleteness,   // a new leader is missing a committed entry
  ElectionSafety,       // two leaders in one term (or a foreign-term paxos
                        // candidacy)
  LogMatching,          // raft: same index+term but diverging entries
  CommittedOverwrite,   // paxos: a committed slot changed its operation
  VotePerTerm,          // raft: one voter granted two candidates in a term
  TermPurity,           // paxos: promoted with foreign-term entries above
                        // the commit point
  InternalInvariant,    // a step hit a protocol impossibility
};

const char* violation_kind_name(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::InternalInvariant;
  std::string description;
  // Indices into the trace that witness the violation (conflict pair, or
  // the single offending event).
  std::vector<size_t> witnesses;
};

std::string format_violation(const Violation& v);

// Each checker replays the whole trace and reports every conflict it finds.
std::vector<Violation> check_state_machine_safety(const Trace& t);
std::vector<Violation> check_leader_completeness(const Trace& t);
std::vector<Violation> check_election_safety(const Trace& t,
                                             AlgorithmKind kind, uint32_t n);
std::vector<Violation> check_log_matching(const Trace& t, uint32_t n);
std::vector<Violation> check_committed_overwrite(const Trace& t);
std::vector<Violation> check_vote_per_term(const Trace& t);
std::vector<Violation> check_term_purity(const Trace& t);

// The full battery appropriate for the algorithm.
std::vector<Violation> run_all_checks(const Trace& t, AlgorithmKind kind,
                                      uint32_t n);

}  // namespace qsim
