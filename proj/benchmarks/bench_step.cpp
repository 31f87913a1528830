// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

// Single-step handler costs. A step copies the node state in and out, so
// every cost below scales with log length; the ranges make that visible.

#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <utility>

#include "qsim/algorithm.hpp"

namespace qsim {
namespace {

LogEntry numbered_entry(LogIndex i, Term term) {
  return LogEntry{"op" + std::to_string(i), term};
}

NodeState follower_with_log(const Algorithm& algo, ServerId self, Term term,
                            LogIndex len, LogIndex commit) {
  NodeState st = algo.initial_state(self);
  st.current_term = term;
  for (LogIndex i = 1; i <= len; ++i) st.log.append(numbered_entry(i, term));
  st.commit_index = commit;
  st.last_applied = commit;
  return st;
}

// Drives a fresh node to leadership and appends len entries, all through
// the public step interface so the bookkeeping is the algorithm's own.
NodeState leader_with_log(const Algorithm& algo, LogIndex len) {
  NodeState st = algo.initial_state(0);
  st = algo.step(st, TimerFire{TimerKind::Election}).state;
  for (ServerId peer = 1; peer < algo.config().n; ++peer) {
    Message grant;
    if (algo.kind() == AlgorithmKind::Paxos)
      grant = PaxosVoteResponse{st.current_term, true, {}};
    else
      grant = RaftVoteResponse{st.current_term, true};
    st = algo.step(st, Deliver{peer, std::move(grant)}).state;
  }
  for (LogIndex i = 1; i <= len; ++i)
    st = algo.step(st, ClientRequest{"op" + std::to_string(i)}).state;
  return st;
}

AlgorithmKind arg_kind(const benchmark::State& state) {
  return state.range(0) == 0 ? AlgorithmKind::Paxos : AlgorithmKind::Raft;
}

void set_kind_label(benchmark::State& state, LogIndex log_len) {
  state.SetLabel(std::string(algorithm_name(arg_kind(state))) +
                 " log=" + std::to_string(log_len));
}

// Follower appends one entry at the end of an already matching log.
void BM_FollowerAppendOne(benchmark::State& state) {
  auto algo = make_algorithm(arg_kind(state), ClusterConfig{3});
  const LogIndex len = static_cast<LogIndex>(state.range(1));
  const Term term = 3;
  NodeState st = follower_with_log(*algo, 0, term, len, len);
  AppendEntriesRequest req{term,
                           1,
                           len,
                           st.log.term_at(len),
                           {numbered_entry(len + 1, term)},
                           len};
  Input input = Deliver{1, req};
  for (auto _ : state) {
    StepResult r = algo->step(st, input);
    benchmark::DoNotOptimize(r.effects.data());
  }
  set_kind_label(state, len);
}
BENCHMARK(BM_FollowerAppendOne)
    ->ArgsProduct({{0, 1}, {0, 64, 512}})
    ->ArgNames({"algo", "log"});

// Follower acknowledges an empty AppendEntries whose prev matches its tip.
void BM_FollowerHeartbeat(benchmark::State& state) {
  auto algo = make_algorithm(arg_kind(state), ClusterConfig{3});
  const LogIndex len = static_cast<LogIndex>(state.range(1));
  const Term term = 3;
  NodeState st = follower_with_log(*algo, 0, term, len, len);
  AppendEntriesRequest req{term, 1, len, st.log.term_at(len), {}, len};
  Input input = Deliver{1, req};
  for (auto _ : state) {
    StepResult r = algo->step(st, input);
    benchmark::DoNotOptimize(r.effects.data());
  }
  set_kind_label(state, len);
}
BENCHMARK(BM_FollowerHeartbeat)
    ->ArgsProduct({{0, 1}, {0, 64, 512}})
    ->ArgNames({"algo", "log"});

// Raft voter checks freshness and grants; the persist snapshot dominates.
void BM_RaftVoteRequest(benchmark::State& state) {
  auto algo = make_algorithm(AlgorithmKind::Raft, ClusterConfig{3});
  const LogIndex len = static_cast<LogIndex>(state.range(0));
  NodeState st = follower_with_log(*algo, 0, 2, len, len);
  Input input = Deliver{1, RaftVoteRequest{3, 1, len + 1, 3}};
  for (auto _ : state) {
    StepResult r = algo->step(st, input);
    benchmark::DoNotOptimize(r.effects.data());
  }
  state.SetLabel("log=" + std::to_string(len));
}
BENCHMARK(BM_RaftVoteRequest)->Arg(0)->Arg(64)->Arg(512)->ArgName("log");

// Paxos voter grants and ships its whole uncommitted suffix in the reply.
void BM_PaxosVoteRequest(benchmark::State& state) {
  auto algo = make_algorithm(AlgorithmKind::Paxos, ClusterConfig{3});
  const LogIndex suffix = static_cast<LogIndex>(state.range(0));
  NodeState st = follower_with_log(*algo, 0, 3, suffix, 0);
  Input input = Deliver{1, PaxosVoteRequest{4, 1, 0}};
  for (auto _ : state) {
    StepResult r = algo->step(st, input);
    benchmark::DoNotOptimize(r.effects.data());
  }
  state.SetLabel("suffix=" + std::to_string(suffix));
}
BENCHMARK(BM_PaxosVoteRequest)->Arg(1)->Arg(16)->Arg(128)->ArgName("suffix");

// Leader takes the ack that completes a majority and advances the commit.
void BM_LeaderAckCommit(benchmark::State& state) {
  auto algo = make_algorithm(arg_kind(state), ClusterConfig{3});
  const LogIndex len = static_cast<LogIndex>(state.range(1));
  NodeState st = leader_with_log(*algo, len);
  st = algo->step(st, Deliver{1, AppendEntriesResponse{st.current_term, true,
                                                       len - 1}})
           .state;
  Input input =
      Deliver{2, AppendEntriesResponse{st.current_term, true, len}};
  for (auto _ : state) {
    StepResult r = algo->step(st, input);
    benchmark::DoNotOptimize(r.effects.data());
  }
  set_kind_label(state, len);
}
BENCHMARK(BM_LeaderAckCommit)
    ->ArgsProduct({{0, 1}, {64, 512}})
    ->ArgNames({"algo", "log"});

// Leader accepts one client operation: append, persist, broadcast.
void BM_LeaderSubmit(benchmark::State& state) {
  auto algo = make_algorithm(arg_kind(state), ClusterConfig{3});
  const LogIndex len = static_cast<LogIndex>(state.range(1));
  NodeState st = leader_with_log(*algo, len);
  Input input = ClientRequest{"next"};
  for (auto _ : state) {
    StepResult r = algo->step(st, input);
    benchmark::DoNotOptimize(r.effects.data());
  }
  set_kind_label(state, len);
}
BENCHMARK(BM_LeaderSubmit)
    ->ArgsProduct({{0, 1}, {0, 64, 512}})
    ->ArgNames({"algo", "log"});

}  // namespace
}  // namespace qsim
