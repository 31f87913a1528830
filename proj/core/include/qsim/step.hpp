// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <variant>
#include <vector>

#include "qsim/message.hpp"
#include "qsim/state.hpp"
#include "qsim/types.hpp"

namespace qsim {

enum class TimerKind { Election, Heartbeat };

const char* timer_name(TimerKind k);

// ---- inputs ----------------------------------------------------------------

struct Deliver {
  ServerId from = 0;
  Message msg;
};

struct TimerFire {
  TimerKind kind = TimerKind::Election;
};

struct ClientRequest {
  Operation op;
};

// Reboot with the given stable storage contents; all volatile state is lost.
struct Restart {
  PersistentState durable;
};

using Input = std::variant<Deliver, TimerFire, ClientRequest, Restart>;

// ---- effects ---------------------------------------------------------------

struct Send {
  ServerId to = 0;
  Message msg;
};

struct BroadcastMsg {
  Message msg;  // to every peer except self
};

// Marks "persistent fields changed; write them out before any later Send".
// Carries the full snapshot so the environment needs no diffing.
struct Persist {
  PersistentState durable;
};

struct Apply {
  LogIndex index = 0;
  LogEntry entry;
};

struct RoleChange {
  Role role = Role::Follower;
};

struct ResetTimer {
  TimerKind kind = TimerKind::Election;
};

using Effect =
    std::variant<Send, BroadcastMsg, Persist, Apply, RoleChange, ResetTimer>;

struct StepResult {
  NodeState state;
  std::vector<Effect> effects;
};

}  // namespace qsim
