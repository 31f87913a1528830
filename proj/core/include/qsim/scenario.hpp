// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsim/algorithm.hpp"
#include "qsim/types.hpp"

namespace qsim {

struct DelayModel {
  // Fixed when min == max; otherwise uniform per message in [min, max].
  Tick min = 5;
  Tick max = 5;

  bool operator==(const DelayModel&) const = default;
};

struct Timeouts {
  Tick election_base = 150;
  // Election timeout = base + u, u uniform in [0, spread); spread 0 means
  // every timeout is exactly the base. Paxos has its own spread because the
  // term split already breaks symmetry and the default needs none.
  Tick election_spread = 150;
  Tick paxos_election_spread = 0;
  Tick heartbeat = 50;

  bool operator==(const Timeouts&) const = default;
};

struct FaultEvent {
  enum class Kind { Crash, Restart, PartitionSet, Heal };
  Tick at = 0;
  Kind kind = Kind::Crash;
  ServerId server = 0;                        // Crash/Restart
  std::vector<std::vector<ServerId>> groups;  // PartitionSet

  bool operator==(const FaultEvent&) const = default;
};

struct ClientOp {
  Tick at = 0;
  Operation op;

  bool operator==(const ClientOp&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  ClusterConfig cluster;
  uint64_t seed = 1;
  Tick duration = 10000;
  DelayModel delay;
  Timeouts timeouts;
  std::vector<ClientOp> workload;
  std::vector<FaultEvent> faults;
  std::optional<uint32_t> batch_cap;
  MutationSet mutations;

  Tick election_spread_for(AlgorithmKind kind) const {
    return kind == AlgorithmKind::Paxos ? timeouts.paxos_election_spread
                                        : timeouts.election_spread;
  }

  void validate() const;
};

// A scenario document. algorithm is empty for "both", which only the
// comparison command accepts.
struct ScenarioFile {
  Scenario scenario;
  std::optional<AlgorithmKind> algorithm;
  bool both = false;
};

// Strict parser: any unknown key is a ConfigError naming the key.
ScenarioFile parse_scenario(const std::string& json_text);
ScenarioFile load_scenario(const std::string& path);

}  // namespace qsim
