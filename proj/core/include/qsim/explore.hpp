// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qsim/algorithm.hpp"
#include "qsim/checks.hpp"
#include "qsim/trace.hpp"

namespace qsim {

// Bounds for exhaustive exploration. Everything here is part of the scope
// definition: "ok" means no reachable violation within these bounds.
struct SmallConfig {
  AlgorithmKind algorithm = AlgorithmKind::Raft;
  uint32_t n = 3;
  uint32_t max_ops = 2;       // client operations the workload may inject
  Term max_term = 4;          // no candidacy may exceed this term
  uint32_t max_crashes = 1;   // crash budget
  uint32_t max_restarts = 1;  // restart budget
  uint32_t channel_cap = 1;   // per-link in-flight message bound
  uint32_t max_depth = 96;    // steps along one path before truncation
  uint64_t max_states = 0;    // 0 = unlimited
  MutationSet mutations;
  // Dedup on full serialized states instead of 128-bit hashes. Slower and
  // hungrier, but immune to hash collisions.
  bool full_state_dedup = false;
};

enum class ExploreOutcome {
  Ok,              // exhausted every reachable state within bounds
  Counterexample,  // found a violating path; see trace and violations
  Inconclusive,    // hit max_depth or max_states before exhausting
};

const char* explore_outcome_name(ExploreOutcome o);

struct ExploreStats {
  uint64_t states_visited = 0;
  uint64_t transitions = 0;
  uint64_t dedup_hits = 0;
  uint64_t depth_truncations = 0;
  uint64_t max_depth_seen = 0;
};

struct ExploreResult {
  ExploreOutcome outcome = ExploreOutcome::Ok;
  ExploreStats stats;
  // Counterexample only: the violating path replayed as a trace, plus what
  // the checkers say about it.
  Trace counterexample;
  std::vector<Violation> violations;
};

ExploreResult explore(const SmallConfig& cfg);

std::string format_explore_stats(const ExploreStats& s);

}  // namespace qsim
