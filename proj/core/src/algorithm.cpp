// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/algorithm.hpp"

#include <algorithm>

namespace qsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

const char* role_name(Role r) {
  switch (r) {
    case Role::Follower: return "follower";
    case Role::Candidate: return "candidate";
    case Role::Leader: return "leader";
  }
  return "?";
}

const char* timer_name(TimerKind k) {
  switch (k) {
    case TimerKind::Election: return "election";
    case TimerKind::Heartbeat: return "heartbeat";
  }
  return "?";
}

const char* algorithm_name(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::Paxos: return "paxos";
    case AlgorithmKind::Raft: return "raft";
  }
  return "?";
}

// ---- Machine ----------------------------------------------------------------

void Algorithm::Machine::persist() {
  if (persist_at) return;
  persist_at = effects.size();
  effects.emplace_back(Persist{});  // snapshot patched in finalize()
}

void Algorithm::Machine::send(ServerId to, Message msg) {
  effects.emplace_back(Send{to, std::move(msg)});
}

void Algorithm::Machine::broadcast(Message msg) {
  effects.emplace_back(BroadcastMsg{std::move(msg)});
}

void Algorithm::Machine::apply(LogIndex index, const LogEntry& e) {
  effects.emplace_back(Apply{index, e});
}

void Algorithm::Machine::role_change(Role r) {
  effects.emplace_back(RoleChange{r});
}

void Algorithm::Machine::reset_timer(TimerKind k) {
  effects.emplace_back(ResetTimer{k});
}

LeaderState& Algorithm::Machine::leader_state() {
  if (!st.leader) throw InternalFault("leader bookkeeping missing");
  return *st.leader;
}

// ---- Algorithm --------------------------------------------------------------

Algorithm::Algorithm(ClusterConfig cfg, Options opts)
    : cfg_(cfg), opts_(std::move(opts)) {
  cfg_.validate();
  if (opts_.batch_cap && *opts_.batch_cap == 0)
    throw ConfigError("batch cap must be positive");
}

NodeState Algorithm::initial_state(ServerId self) const {
  if (self >= cfg_.n) throw ConfigError("server id out of range");
  NodeState st;
  st.self = self;
  return st;
}

StepResult Algorithm::step(const NodeState& state, const Input& input) const {
  Machine m{state, {}, std::nullopt};
  std::visit(
      overloaded{
          [&](const Deliver& d) { dispatch(m, d.from, d.msg); },
          [&](const TimerFire& t) { on_timer(m, t.kind); },
          [&](const ClientRequest& c) { handle_client_request(m, c.op); },
          [&](const Restart& r) { do_restart(m, r.durable); },
      },
      input);
  finalize(m, state, input);
  return StepResult{std::move(m.st), std::move(m.effects)};
}

void Algorithm::dispatch(Machine& m, ServerId from, const Message& msg) const {
  std::visit(overloaded{
                 [&](const AppendEntriesRequest& v) {
                   handle_append_entries(m, from, v);
                 },
                 [&](const AppendEntriesResponse& v) {
                   handle_append_entries_response(m, from, v);
                 },
                 [&](const auto& v) { handle_message(m, from, v); },
             },
             msg);
}

void Algorithm::on_timer(Machine& m, TimerKind kind) const {
  switch (kind) {
    case TimerKind::Election:
      // Leaders do not campaign; a late election timer is a no-op.
      if (m.st.role != Role::Leader) start_election(m);
      break;
    case TimerKind::Heartbeat:
      if (m.st.role == Role::Leader) {
        leader_tick(m);
        m.reset_timer(TimerKind::Heartbeat);
      }
      break;
  }
}

void Algorithm::do_restart(Machine& m, const PersistentState& durable) const {
  NodeState st;
  st.self = m.st.self;
  st.current_term = durable.current_term;
  st.voted_for = durable.voted_for;
  st.log = durable.log;
  m.st = std::move(st);
  m.reset_timer(TimerKind::Election);
}

void Algorithm::on_term_advanced(NodeState&) const {}

bool Algorithm::observe_term(Machine& m, Term msg_term) const {
  NodeState& st = m.st;
  if (msg_term <= st.current_term) return false;
  st.current_term = msg_term;
  on_term_advanced(st);
  m.persist();
  if (st.role != Role::Follower) become_follower(m);
  return true;
}

void Algorithm::become_follower(Machine& m) const {
  NodeState& st = m.st;
  if (st.role == Role::Follower) return;
  st.role = Role::Follower;
  st.candidate = std::monostate{};
  st.leader.reset();
  m.role_change(Role::Follower);
  m.reset_timer(TimerKind::Election);
}

void Algorithm::become_leader(Machine& m, LogIndex next_index_init) const {
  NodeState& st = m.st;
  st.role = Role::Leader;
  st.candidate = std::monostate{};
  LeaderState ls;
  for (ServerId p = 0; p < cfg_.n; ++p) {
    ls.next_index[p] = next_index_init;
    ls.match_index[p] = 0;
  }
  ls.match_index[st.self] = st.log.last_index();
  st.leader = std::move(ls);
  m.role_change(Role::Leader);
  m.reset_timer(TimerKind::Heartbeat);
  leader_tick(m);
  advance_commit(m);  // a cluster of one commits immediately
}

std::pair<LogIndex, Term> Algorithm::last_log_info(const NodeState& st) {
  return {st.log.last_index(), st.log.term_at(st.log.last_index())};
}

void Algorithm::on_same_term_append_entries(Machine& m) const {
  if (m.st.role == Role::Leader)
    throw InternalFault("second leader in term " +
                        std::to_string(m.st.current_term));
}

void Algorithm::handle_append_entries(Machine& m, ServerId from,
                                      const AppendEntriesRequest& req) const {
  observe_term(m, req.term);
  NodeState& st = m.st;

  // 1. Stale leader: tell it our term and nothing else.
  if (req.term < st.current_term) {
    m.send(from, AppendEntriesResponse{st.current_term, false, 0});
    return;
  }

  on_same_term_append_entries(m);

  // 2. Consistency check: our log must contain the leader's previous entry.
  if (req.prev_log_index > 0 &&
      (st.log.last_index() < req.prev_log_index ||
       st.log.term_at(req.prev_log_index) != req.prev_log_term)) {
    m.reset_timer(TimerKind::Election);  // the leader is live, just ahead of us
    m.send(from, AppendEntriesResponse{st.current_term, false, 0});
    return;
  }

  // 3+4. Drop conflicting suffix, append what is new. Existing entries with
  // matching terms are left alone so stale retransmissions are idempotent.
  bool log_changed = false;
  LogIndex idx = req.prev_log_index;
  for (const LogEntry& e : req.entries) {
    ++idx;
    if (idx <= st.log.last_index()) {
      if (st.log.term_at(idx) == e.term) continue;
      st.log.truncate_from(idx);
    }
    st.log.append(e);
    log_changed = true;
  }
  if (log_changed) m.persist();

  // 5. Advance (never retreat) the commit index to what the leader has
  // proven durable within the range this message covered.
  LogIndex last_new = req.prev_log_index + req.entries.size();
  if (req.leader_commit > st.commit_index) {
    LogIndex target = std::min(req.leader_commit, last_new);
    if (target > st.commit_index) {
      st.commit_index = target;
      apply_committed(m);
    }
  }

  m.reset_timer(TimerKind::Election);
  m.send(from, AppendEntriesResponse{st.current_term, true, last_new});
}

void Algorithm::handle_append_entries_response(
    Machine& m, ServerId from, const AppendEntriesResponse& resp) const {
  if (observe_term(m, resp.term)) return;  // stepped down
  NodeState& st = m.st;
  if (st.role != Role::Leader || resp.term != st.current_term) return;

  LeaderState& ls = m.leader_state();
  if (resp.success) {
    ls.next_index[from] = resp.last_appended + 1;
    ls.match_index[from] = std::max(ls.match_index[from], resp.last_appended);
    advance_commit(m);
  } else {
    if (ls.next_index[from] > 1) --ls.next_index[from];
    send_append_entries(m, from);
  }
}

void Algorithm::handle_client_request(Machine& m, const Operation& op) const {
  NodeState& st = m.st;
  // Non-leaders reject; the environment is responsible for redirecting.
  if (st.role != Role::Leader) return;
  st.log.append(LogEntry{op, st.current_term});
  m.persist();
  m.leader_state().match_index[st.self] = st.log.last_index();
  for (ServerId p = 0; p < cfg_.n; ++p)
    if (p != st.self) send_append_entries(m, p);
  advance_commit(m);  // a cluster of one has its majority already
}

void Algorithm::leader_tick(Machine& m) const {
  for (ServerId p = 0; p < cfg_.n; ++p)
    if (p != m.st.self) send_append_entries(m, p);
}

void Algorithm::send_append_entries(Machine& m, ServerId peer) const {
  NodeState& st = m.st;
  LeaderState& ls = m.leader_state();
  LogIndex next = ls.next_index.at(peer);
  if (next == 0 || next > st.log.last_index() + 1)
    throw InternalFault("nextIndex out of range");
  LogIndex last = st.log.last_index();
  if (opts_.batch_cap && last >= next)
    last = std::min<LogIndex>(last, next + *opts_.batch_cap - 1);
  AppendEntriesRequest req;
  req.term = st.current_term;
  req.leader_id = st.self;
  req.prev_log_index = next - 1;
  req.prev_log_term = st.log.term_at(next - 1);
  req.entries = st.log.slice(next, last);
  req.leader_commit = st.commit_index;
  m.send(peer, std::move(req));
}

void Algorithm::apply_committed(Machine& m) const {
  NodeState& st = m.st;
  if (st.commit_index > st.log.last_index())
    throw InternalFault("commit index beyond end of log");
  while (st.last_applied < st.commit_index) {
    ++st.last_applied;
    m.apply(st.last_applied, st.log.at(st.last_applied));
  }
}

void Algorithm::advance_commit_impl(Machine& m, bool require_current_term) const {
  NodeState& st = m.st;
  const LeaderState& ls = m.leader_state();
  for (LogIndex n = st.log.last_index(); n > st.commit_index; --n) {
    if (require_current_term && st.log.term_at(n) != st.current_term) {
      // Terms are non-decreasing along the log: nothing lower qualifies.
      break;
    }
    uint32_t count = 0;
    for (const auto& [p, idx] : ls.match_index)
      if (idx >= n) ++count;
    if (count >= cfg_.majority()) {
      st.commit_index = n;
      apply_committed(m);
      break;
    }
  }
}

void Algorithm::handle_message(Machine&, ServerId,
                               const PaxosVoteRequest&) const {
  throw InternalFault("paxos vote request under wrong algorithm");
}
void Algorithm::handle_message(Machine&, ServerId,
                               const PaxosVoteResponse&) const {
  throw InternalFault("paxos vote response under wrong algorithm");
}
void Algorithm::handle_message(Machine&, ServerId,
                               const RaftVoteRequest&) const {
  throw InternalFault("raft vote request under wrong algorithm");
}
void Algorithm::handle_message(Machine&, ServerId,
                               const RaftVoteResponse&) const {
  throw InternalFault("raft vote response under wrong algorithm");
}

// Every step must leave the state internally consistent, and durable
// changes must be covered by a Persist effect that precedes any Send.
void Algorithm::finalize(const Machine& m, const NodeState& before,
                         const Input& input) const {
  const NodeState& st = m.st;
  const bool restarted = std::holds_alternative<Restart>(input);

  if (st.last_applied > st.commit_index)
    throw InternalFault("lastApplied ran past commitIndex");
  if (!restarted && st.commit_index < before.commit_index)
    throw InternalFault("commit index moved backwards");
  if (!restarted && st.current_term < before.current_term)
    throw InternalFault("current term moved backwards");
  if ((st.role == Role::Leader) != st.leader.has_value())
    throw InternalFault("leader bookkeeping does not match role");
  if ((st.role == Role::Candidate) ==
      std::holds_alternative<std::monostate>(st.candidate))
    throw InternalFault("candidate bookkeeping does not match role");

  if (!restarted && !(st.persistent() == before.persistent())) {
    if (!m.persist_at)
      throw InternalFault("durable state changed without a persist");
    for (size_t i = 0; i < *m.persist_at; ++i) {
      if (std::holds_alternative<Send>(m.effects[i]) ||
          std::holds_alternative<BroadcastMsg>(m.effects[i]))
        throw InternalFault("send emitted before persist");
    }
  }
  if (m.persist_at) {
    auto& eff = const_cast<Machine&>(m).effects[*m.persist_at];
    std::get<Persist>(eff).durable = st.persistent();
  }
}

std::unique_ptr<Algorithm> make_algorithm(AlgorithmKind kind, ClusterConfig cfg,
                                          Algorithm::Options opts) {
  switch (kind) {
    case AlgorithmKind::Paxos:
      return std::make_unique<PaxosAlgorithm>(cfg, std::move(opts));
    case AlgorithmKind::Raft:
      return std::make_unique<RaftAlgorithm>(cfg, std::move(opts));
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace qsim
