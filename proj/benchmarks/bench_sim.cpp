// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

// Whole-run simulator costs: one iteration is one complete deterministic
// run, trace and metrics included.

#include <benchmark/benchmark.h>

#include <string>

#include "qsim/simulator.hpp"

namespace qsim {
namespace {

AlgorithmKind arg_kind(const benchmark::State& state) {
  return state.range(0) == 0 ? AlgorithmKind::Paxos : AlgorithmKind::Raft;
}

Scenario base_scenario(const std::string& name, Tick duration) {
  Scenario sc;
  sc.name = name;
  sc.cluster.n = 3;
  sc.seed = 1;
  sc.duration = duration;
  return sc;
}

// First promotion in a fault-free prefix; the failover scenario crashes
// whichever server that is so the cluster must elect twice.
ServerId first_leader(const Scenario& sc, AlgorithmKind kind) {
  RunResult r = run(sc, kind);
  for (const TraceEvent& e : r.trace)
    if (e.kind == TraceKind::RoleChangeEv && e.role == Role::Leader)
      return e.server;
  return 0;
}

void BM_SimColdStart(benchmark::State& state) {
  const AlgorithmKind kind = arg_kind(state);
  Scenario sc = base_scenario("cold-start", 1200);
  uint64_t events = 0;
  for (auto _ : state) {
    RunResult r = run(sc, kind);
    events += r.trace.size();
    benchmark::DoNotOptimize(r.metrics.elections_won);
  }
  state.SetItemsProcessed(static_cast<int64_t>(events));
  state.SetLabel(algorithm_name(kind));
}
BENCHMARK(BM_SimColdStart)->Arg(0)->Arg(1)->ArgName("algo");

void BM_SimFailover(benchmark::State& state) {
  const AlgorithmKind kind = arg_kind(state);
  Scenario sc = base_scenario("failover", 4000);
  sc.workload.push_back(ClientOp{1000, "acc"});
  const ServerId victim = first_leader(sc, kind);
  sc.faults.push_back(FaultEvent{1012, FaultEvent::Kind::Crash, victim, {}});
  sc.faults.push_back(FaultEvent{3000, FaultEvent::Kind::Restart, victim, {}});
  uint64_t events = 0;
  for (auto _ : state) {
    RunResult r = run(sc, kind);
    events += r.trace.size();
    benchmark::DoNotOptimize(r.metrics.elections_won);
  }
  state.SetItemsProcessed(static_cast<int64_t>(events));
  state.SetLabel(algorithm_name(kind));
}
BENCHMARK(BM_SimFailover)->Arg(0)->Arg(1)->ArgName("algo");

void BM_SimSteadyState(benchmark::State& state) {
  const AlgorithmKind kind = arg_kind(state);
  Scenario sc = base_scenario("steady-state", 4000);
  for (int i = 0; i < 20; ++i)
    sc.workload.push_back(
        ClientOp{static_cast<Tick>(1000 + 100 * i), "op" + std::to_string(i)});
  uint64_t committed = 0;
  for (auto _ : state) {
    RunResult r = run(sc, kind);
    committed += r.metrics.committed_ops;
    benchmark::DoNotOptimize(r.trace.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(committed));
  state.SetLabel(algorithm_name(kind));
}
BENCHMARK(BM_SimSteadyState)->Arg(0)->Arg(1)->ArgName("algo");

}  // namespace
}  // namespace qsim
