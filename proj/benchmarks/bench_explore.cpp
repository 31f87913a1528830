// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

// Explorer throughput: one iteration exhausts a small bounded space; items
// are visited states, so the rate reads as states per second.

#include <benchmark/benchmark.h>

#include "qsim/explore.hpp"

namespace qsim {
namespace {

AlgorithmKind arg_kind(const benchmark::State& state) {
  return state.range(0) == 0 ? AlgorithmKind::Paxos : AlgorithmKind::Raft;
}

SmallConfig tiny(AlgorithmKind kind) {
  SmallConfig cfg;
  cfg.algorithm = kind;
  cfg.n = 3;
  cfg.max_ops = 1;
  cfg.max_term = 2;
  cfg.max_crashes = 0;
  cfg.max_restarts = 0;
  cfg.channel_cap = 1;
  cfg.max_depth = 40;
  return cfg;
}

void BM_ExploreBounded(benchmark::State& state) {
  SmallConfig cfg = tiny(arg_kind(state));
  cfg.full_state_dedup = state.range(1) != 0;
  uint64_t states = 0;
  for (auto _ : state) {
    ExploreResult r = explore(cfg);
    states += r.stats.states_visited;
    benchmark::DoNotOptimize(r.stats.transitions);
  }
  state.SetItemsProcessed(static_cast<int64_t>(states));
  state.SetLabel(std::string(algorithm_name(cfg.algorithm)) +
                 (cfg.full_state_dedup ? " full-dedup" : " hash-dedup"));
}
BENCHMARK(BM_ExploreBounded)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"algo", "dedup"});

}  // namespace
}  // namespace qsim
