// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsim/algorithm.hpp"
#include "qsim/scenario.hpp"
#include "qsim/trace.hpp"

namespace qsim::test {

inline Log make_log(const std::vector<LogEntry>& entries) {
  Log log;
  for (const LogEntry& e : entries) log.append(e);
  return log;
}

// A follower in steady state: everything committed is already applied.
inline NodeState follower(ServerId self, Term term, Log log = {},
                          LogIndex commit = 0) {
  NodeState st;
  st.self = self;
  st.current_term = term;
  st.log = std::move(log);
  st.commit_index = commit;
  st.last_applied = commit;
  return st;
}

// A leader whose peers are assumed fully caught up on nextIndex and not yet
// confirmed on matchIndex, the state right after promotion plus appends.
inline NodeState leader(ServerId self, Term term, Log log, uint32_t n,
                        LogIndex commit = 0) {
  NodeState st = follower(self, term, std::move(log), commit);
  st.role = Role::Leader;
  LeaderState ls;
  for (ServerId p = 0; p < n; ++p) {
    ls.next_index[p] = st.log.last_index() + 1;
    ls.match_index[p] = 0;
  }
  ls.match_index[self] = st.log.last_index();
  st.leader = std::move(ls);
  return st;
}

template <typename T>
std::vector<T> effects_of(const StepResult& r) {
  std::vector<T> out;
  for (const Effect& e : r.effects)
    if (const T* v = std::get_if<T>(&e)) out.push_back(*v);
  return out;
}

// Direct sends of one message type, in emission order.
template <typename M>
std::vector<std::pair<ServerId, M>> sends_of(const StepResult& r) {
  std::vector<std::pair<ServerId, M>> out;
  for (const Effect& e : r.effects)
    if (const Send* s = std::get_if<Send>(&e))
      if (const M* m = std::get_if<M>(&s->msg)) out.emplace_back(s->to, *m);
  return out;
}

template <typename M>
std::vector<M> broadcasts_of(const StepResult& r) {
  std::vector<M> out;
  for (const Effect& e : r.effects)
    if (const BroadcastMsg* b = std::get_if<BroadcastMsg>(&e))
      if (const M* m = std::get_if<M>(&b->msg)) out.push_back(*m);
  return out;
}

inline std::optional<PersistentState> persisted(const StepResult& r) {
  for (const Effect& e : r.effects)
    if (const Persist* p = std::get_if<Persist>(&e)) return p->durable;
  return std::nullopt;
}

inline std::vector<std::pair<LogIndex, LogEntry>> applies_of(
    const StepResult& r) {
  std::vector<std::pair<LogIndex, LogEntry>> out;
  for (const Effect& e : r.effects)
    if (const Apply* a = std::get_if<Apply>(&e))
      out.emplace_back(a->index, a->entry);
  return out;
}

inline bool role_changed_to(const StepResult& r, Role role) {
  for (const Effect& e : r.effects)
    if (const RoleChange* rc = std::get_if<RoleChange>(&e))
      if (rc->role == role) return true;
  return false;
}

inline bool timer_reset(const StepResult& r, TimerKind k) {
  for (const Effect& e : r.effects)
    if (const ResetTimer* t = std::get_if<ResetTimer>(&e))
      if (t->kind == k) return true;
  return false;
}

// Position of the first effect of a type, or npos.
template <typename T>
size_t first_effect_at(const StepResult& r) {
  for (size_t i = 0; i < r.effects.size(); ++i)
    if (std::holds_alternative<T>(r.effects[i])) return i;
  return size_t(-1);
}

// Synthetic traces for checker and metrics tests. Times advance with every
// event so latency arithmetic stays visible at the call site.
struct TraceBuilder {
  Trace t;

  TraceEvent& push(Tick at, TraceKind kind) {
    TraceEvent e;
    e.time = at;
    e.seq = t.size();
    e.kind = kind;
    t.push_back(std::move(e));
    return t.back();
  }

  TraceBuilder& apply(Tick at, ServerId s, LogIndex idx, LogEntry entry) {
    TraceEvent& e = push(at, TraceKind::ApplyOp);
    e.server = s;
    e.index = idx;
    e.entry = std::move(entry);
    return *this;
  }

  TraceBuilder& persist(Tick at, ServerId s, Term term,
                        std::optional<ServerId> voted, Log log) {
    TraceEvent& e = push(at, TraceKind::PersistWrite);
    e.server = s;
    e.durable = PersistentState{term, voted, std::move(log)};
    return *this;
  }

  TraceBuilder& restart(Tick at, ServerId s, Term term,
                        std::optional<ServerId> voted, Log log) {
    TraceEvent& e = push(at, TraceKind::RestartEv);
    e.server = s;
    e.durable = PersistentState{term, voted, std::move(log)};
    return *this;
  }

  TraceBuilder& promote(Tick at, ServerId s, Term term, Log log,
                        LogIndex commit = 0) {
    TraceEvent& e = push(at, TraceKind::RoleChangeEv);
    e.server = s;
    e.role = Role::Leader;
    e.term = term;
    e.log_snapshot = std::move(log);
    e.commit_snapshot = commit;
    return *this;
  }

  TraceBuilder& campaign(Tick at, ServerId s, Term term) {
    TraceEvent& e = push(at, TraceKind::RoleChangeEv);
    e.server = s;
    e.role = Role::Candidate;
    e.term = term;
    return *this;
  }

  TraceBuilder& step_down(Tick at, ServerId s, Term term) {
    TraceEvent& e = push(at, TraceKind::RoleChangeEv);
    e.server = s;
    e.role = Role::Follower;
    e.term = term;
    return *this;
  }

  TraceBuilder& send(Tick at, ServerId from, ServerId to, Message m) {
    TraceEvent& e = push(at, TraceKind::SendMsg);
    e.server = from;
    e.peer = to;
    e.msg = std::move(m);
    return *this;
  }

  TraceBuilder& deliver(Tick at, ServerId to, ServerId from, Message m) {
    TraceEvent& e = push(at, TraceKind::DeliverMsg);
    e.server = to;
    e.peer = from;
    e.msg = std::move(m);
    return *this;
  }

  TraceBuilder& crash(Tick at, ServerId s) {
    push(at, TraceKind::CrashEv).server = s;
    return *this;
  }

  TraceBuilder& partition(Tick at, std::vector<uint32_t> groups) {
    push(at, TraceKind::PartitionEv).groups = std::move(groups);
    return *this;
  }
};

inline Scenario base_scenario(uint32_t n = 3, uint64_t seed = 1,
                              Tick duration = 5000) {
  Scenario sc;
  sc.cluster.n = n;
  sc.seed = seed;
  sc.duration = duration;
  return sc;
}

inline FaultEvent crash_at(Tick at, ServerId s) {
  FaultEvent f;
  f.at = at;
  f.kind = FaultEvent::Kind::Crash;
  f.server = s;
  return f;
}

inline FaultEvent restart_at(Tick at, ServerId s) {
  FaultEvent f;
  f.at = at;
  f.kind = FaultEvent::Kind::Restart;
  f.server = s;
  return f;
}

inline FaultEvent partition_at(Tick at,
                               std::vector<std::vector<ServerId>> groups) {
  FaultEvent f;
  f.at = at;
  f.kind = FaultEvent::Kind::PartitionSet;
  f.groups = std::move(groups);
  return f;
}

inline FaultEvent heal_at(Tick at) {
  FaultEvent f;
  f.at = at;
  f.kind = FaultEvent::Kind::Heal;
  return f;
}

}  // namespace qsim::test
