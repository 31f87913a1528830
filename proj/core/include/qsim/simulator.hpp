// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsim/algorithm.hpp"
#include "qsim/metrics.hpp"
#include "qsim/scenario.hpp"
#include "qsim/trace.hpp"

namespace qsim {

struct RunResult {
  Trace trace;
  RunMetrics metrics;
  std::vector<NodeState> final_states;
  std::vector<PersistentState> final_durable;
  std::vector<bool> final_alive;
  // Set when a protocol-impossibility assertion fired; the trace stops at
  // the offending step.
  std::optional<std::string> fault;
};

// Deterministic discrete-event run: same scenario, same bytes out.
RunResult run(const Scenario& scenario, AlgorithmKind kind);

}  // namespace qsim
