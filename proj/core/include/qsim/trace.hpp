// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qsim/message.hpp"
#include "qsim/state.hpp"
#include "qsim/step.hpp"

namespace qsim {

enum class TraceKind {
  SendMsg,
  DeliverMsg,
  DropMsg,
  TimerFired,
  RoleChangeEv,
  PersistWrite,
  ApplyOp,
  ClientSubmit,
  NotLeaderReject,
  CrashEv,
  RestartEv,
  PartitionEv,
};

const char* trace_kind_name(TraceKind k);

// One observable event. A flat record with per-kind fields keeps checker
// code to plain switches; unused fields stay at their defaults.
struct TraceEvent {
  Tick time = 0;
  uint64_t seq = 0;
  TraceKind kind = TraceKind::SendMsg;

  ServerId server = 0;  // the acting server
  ServerId peer = 0;    // to (SendMsg) or from (DeliverMsg/DropMsg)
  Message msg;          // SendMsg/DeliverMsg/DropMsg

  TimerKind timer = TimerKind::Election;  // TimerFired

  Role role = Role::Follower;  // RoleChangeEv
  Term term = 0;               // RoleChangeEv: term the role was taken in
  Log log_snapshot;            // RoleChangeEv to leader: log at promotion
  LogIndex commit_snapshot = 0;  // RoleChangeEv to leader

  LogIndex index = 0;  // ApplyOp
  LogEntry entry;      // ApplyOp

  PersistentState durable;  // PersistWrite/RestartEv

  Operation op;  // ClientSubmit/NotLeaderReject

  std::vector<uint32_t> groups;  // PartitionEv: group id per server

  std::string note;  // DropMsg reason and similar annotations
};

using Trace = std::vector<TraceEvent>;

std::string format_message(const Message& m);
std::string format_event(const TraceEvent& e);
// One event per line; byte-stable for a given trace.
std::string format_trace(const Trace& t);

}  // namespace qsim
