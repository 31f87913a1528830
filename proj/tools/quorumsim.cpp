// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

// Command line front end. Three subcommands share one binary:
//
//   run <file>      one scenario through one algorithm, checked
//   explore         bounded exhaustive search over a small cluster
//   bench <file>    paxos and raft side by side over paired seeds
//
// Exit statuses, all documented and all tested:
//   run      0 no violations, 1 usage or config error, 2 violations found
//   explore  0 ok, 1 usage or config error, 2 counterexample, 3 inconclusive
//   bench    0 table written, 1 usage or config error (including a scenario
//            whose repetitions fault and so cannot be compared)
//
// Identical invocations write byte-identical files: nothing below stamps
// time, hostnames or paths into the outputs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsim/checks.hpp"
#include "qsim/explore.hpp"
#include "qsim/metrics.hpp"
#include "qsim/mutations.hpp"
#include "qsim/scenario.hpp"
#include "qsim/simulator.hpp"
#include "qsim/trace.hpp"

namespace fs = std::filesystem;
using namespace qsim;

namespace {

const char* kind_name(AlgorithmKind k) {
  return k == AlgorithmKind::Paxos ? "paxos" : "raft";
}

AlgorithmKind kind_from_flag(const std::string& s) {
  if (s == "paxos") return AlgorithmKind::Paxos;
  if (s == "raft") return AlgorithmKind::Raft;
  throw ConfigError("--algorithm must be \"paxos\" or \"raft\"");
}

MutationSet mutations_from_flags(const std::vector<std::string>& ids) {
  MutationSet set;
  for (const std::string& id : ids) {
    auto m = mutation_from_id(id);
    if (!m) throw ConfigError("unknown mutation \"" + id + "\"");
    set.enable(*m);
  }
  return set;
}

MutationSet merge(MutationSet base, const MutationSet& extra) {
  for (Mutation m : all_mutations())
    if (extra.enabled(m)) base.enable(m);
  return base;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
  if (!out) throw ConfigError("cannot write " + path.string());
}

std::string fixed3(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << v;
  return os.str();
}

// ---- run ----

struct RunArgs {
  std::string file;
  std::string out = "out";
  std::string algorithm;  // empty: take the scenario file's choice
  std::optional<uint64_t> seed;
  std::optional<uint64_t> duration;
  std::vector<std::string> mutations;
};

std::string leader_history(const Trace& trace) {
  std::vector<std::string> rows;
  for (const TraceEvent& e : trace) {
    if (e.kind != TraceKind::RoleChangeEv || e.role != Role::Leader) continue;
    rows.push_back("t=" + std::to_string(e.time) + " s" +
                   std::to_string(e.server) + " term " +
                   std::to_string(e.term));
  }
  if (rows.empty()) return "none";
  constexpr size_t kShown = 8;
  std::string joined;
  for (size_t i = 0; i < rows.size() && i < kShown; ++i) {
    if (i) joined += "; ";
    joined += rows[i];
  }
  if (rows.size() > kShown)
    joined += " (+" + std::to_string(rows.size() - kShown) + " more)";
  return joined;
}

int cmd_run(const RunArgs& a) {
  ScenarioFile file = load_scenario(a.file);
  Scenario sc = file.scenario;
  if (a.seed) sc.seed = *a.seed;
  if (a.duration) sc.duration = *a.duration;
  sc.mutations = merge(sc.mutations, mutations_from_flags(a.mutations));

  AlgorithmKind kind;
  if (!a.algorithm.empty()) {
    kind = kind_from_flag(a.algorithm);
  } else if (file.algorithm) {
    kind = *file.algorithm;
  } else if (file.both) {
    throw ConfigError(
        "scenario says algorithm \"both\"; run wants one (pass --algorithm, "
        "or use bench)");
  } else {
    throw ConfigError("scenario names no algorithm; pass --algorithm");
  }
  sc.validate();

  RunResult r = run(sc, kind);
  std::vector<Violation> violations =
      run_all_checks(r.trace, kind, sc.cluster.n);
  if (r.fault) {
    Violation v;
    v.kind = ViolationKind::InternalInvariant;
    v.description = *r.fault;
    if (!r.trace.empty()) v.witnesses.push_back(r.trace.size() - 1);
    violations.push_back(std::move(v));
  }

  fs::create_directories(a.out);
  fs::path trace_path = fs::path(a.out) / "trace.txt";
  fs::path metrics_path = fs::path(a.out) / "metrics.txt";
  fs::path violations_path = fs::path(a.out) / "violations.txt";
  write_file(trace_path, format_trace(r.trace));
  write_file(metrics_path, format_metrics(r.metrics));
  if (violations.empty()) {
    fs::remove(violations_path);
  } else {
    std::string body;
    for (const Violation& v : violations) body += format_violation(v) + "\n";
    write_file(violations_path, body);
  }

  const RunMetrics& m = r.metrics;
  std::cout << "scenario    " << sc.name << " (" << kind_name(kind) << ", seed "
            << sc.seed << ", " << sc.cluster.n << " servers, " << sc.duration
            << " ticks)\n";
  std::cout << "leaders     " << leader_history(r.trace) << "\n";
  std::cout << "elections   " << m.elections_started << " started, "
            << m.elections_won << " won, " << m.split_vote_terms
            << " split terms\n";
  std::cout << "commits     " << m.committed_ops
            << " distinct operations applied\n";
  std::cout << "messages    " << m.messages_total << " total, "
            << m.append_entries_shipped << " append entries, "
            << m.vote_entries_shipped << " vote entries, "
            << m.duplicate_entry_transmissions << " duplicates\n";
  std::cout << "latency     " << m.election_latencies.size()
            << " samples, mean " << fixed3(m.latency_mean()) << ", variance "
            << fixed3(m.latency_variance()) << "\n";
  if (violations.empty()) {
    std::cout << "checks      clean\n";
  } else {
    std::cout << "checks      " << violations.size() << " violation(s)\n";
    constexpr size_t kShown = 5;
    for (size_t i = 0; i < violations.size() && i < kShown; ++i)
      std::cout << "  " << format_violation(violations[i]) << "\n";
    if (violations.size() > kShown)
      std::cout << "  (+" << std::to_string(violations.size() - kShown)
                << " more in " << violations_path.string() << ")\n";
  }
  std::cout << "outputs     " << trace_path.string() << " "
            << metrics_path.string();
  if (!violations.empty()) std::cout << " " << violations_path.string();
  std::cout << "\n";

  return violations.empty() ? 0 : 2;
}

// ---- explore ----

struct ExploreArgs {
  std::string algorithm = "raft";
  std::string out = "out";
  SmallConfig cfg;
  std::vector<std::string> mutations;
};

int cmd_explore(ExploreArgs& a) {
  a.cfg.algorithm = kind_from_flag(a.algorithm);
  a.cfg.mutations = mutations_from_flags(a.mutations);

  ExploreResult r = explore(a.cfg);
  std::cout << format_explore_stats(r.stats);
  std::cout << "outcome=" << explore_outcome_name(r.outcome) << "\n";
  for (const Violation& v : r.violations)
    std::cout << format_violation(v) << "\n";

  if (r.outcome == ExploreOutcome::Counterexample) {
    fs::create_directories(a.out);
    fs::path ce = fs::path(a.out) / "counterexample.txt";
    write_file(ce, format_trace(r.counterexample));
    std::cout << "counterexample written to " << ce.string() << "\n";
  }

  switch (r.outcome) {
    case ExploreOutcome::Ok: return 0;
    case ExploreOutcome::Counterexample: return 2;
    case ExploreOutcome::Inconclusive: return 3;
  }
  return 1;
}

// ---- bench ----

struct BenchArgs {
  std::string file;
  std::string out = "out";
  uint32_t reps = 500;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> duration;
};

struct BenchAggregate {
  RunMetrics pooled;  // election_latencies pooled over every repetition
  uint64_t started = 0;
  uint64_t won = 0;
  uint64_t split = 0;
  uint64_t vote_entries = 0;
  uint64_t duplicates = 0;
  uint64_t appends = 0;
  uint64_t messages = 0;
  uint64_t committed = 0;
};

int cmd_bench(const BenchArgs& a) {
  ScenarioFile file = load_scenario(a.file);
  if (!file.both)
    throw ConfigError(
        "bench wants a comparison scenario with algorithm \"both\"");
  if (a.reps == 0) throw ConfigError("--reps must be positive");

  Scenario base = file.scenario;
  if (a.seed) base.seed = *a.seed;
  if (a.duration) base.duration = *a.duration;
  base.validate();

  const AlgorithmKind kinds[2] = {AlgorithmKind::Paxos, AlgorithmKind::Raft};
  BenchAggregate agg[2];
  // Paired seeds: repetition r of both algorithms shares seed base+r, so
  // timer and delay draws match across the comparison. Repetitions are
  // aggregated in seed order, which keeps the output order-independent.
  for (uint32_t rep = 0; rep < a.reps; ++rep) {
    Scenario sc = base;
    sc.seed = base.seed + rep;
    for (int i = 0; i < 2; ++i) {
      RunResult r = run(sc, kinds[i]);
      if (r.fault)
        throw ConfigError("repetition faulted (" +
                          std::string(kind_name(kinds[i])) + ", seed " +
                          std::to_string(sc.seed) + "): " + *r.fault);
      const RunMetrics& m = r.metrics;
      BenchAggregate& g = agg[i];
      g.pooled.election_latencies.insert(g.pooled.election_latencies.end(),
                                         m.election_latencies.begin(),
                                         m.election_latencies.end());
      g.started += m.elections_started;
      g.won += m.elections_won;
      g.split += m.split_vote_terms;
      g.vote_entries += m.vote_entries_shipped;
      g.duplicates += m.duplicate_entry_transmissions;
      g.appends += m.append_entries_shipped;
      g.messages += m.messages_total;
      g.committed += m.committed_ops;
    }
  }

  std::ostringstream table;
  auto row = [&table](const std::string& name, const std::string& paxos,
                      const std::string& raft) {
    table << name;
    for (size_t i = name.size(); i < 32; ++i) table << ' ';
    for (size_t i = paxos.size(); i < 16; ++i) table << ' ';
    table << paxos;
    for (size_t i = raft.size(); i < 16; ++i) table << ' ';
    table << raft << "\n";
  };
  auto rate = [](const BenchAggregate& g) {
    return g.started ? static_cast<double>(g.split) /
                           static_cast<double>(g.started)
                     : 0.0;
  };
  row("metric", "paxos", "raft");
  row("election_latency_mean", fixed3(agg[0].pooled.latency_mean()),
      fixed3(agg[1].pooled.latency_mean()));
  row("election_latency_variance", fixed3(agg[0].pooled.latency_variance()),
      fixed3(agg[1].pooled.latency_variance()));
  row("election_latency_samples",
      std::to_string(agg[0].pooled.election_latencies.size()),
      std::to_string(agg[1].pooled.election_latencies.size()));
  row("split_vote_rate", fixed3(rate(agg[0])), fixed3(rate(agg[1])));
  row("elections_started", std::to_string(agg[0].started),
      std::to_string(agg[1].started));
  row("elections_won", std::to_string(agg[0].won),
      std::to_string(agg[1].won));
  row("vote_entries_shipped", std::to_string(agg[0].vote_entries),
      std::to_string(agg[1].vote_entries));
  row("duplicate_entry_transmissions", std::to_string(agg[0].duplicates),
      std::to_string(agg[1].duplicates));
  row("append_entries_shipped", std::to_string(agg[0].appends),
      std::to_string(agg[1].appends));
  row("messages_total", std::to_string(agg[0].messages),
      std::to_string(agg[1].messages));
  row("committed_ops", std::to_string(agg[0].committed),
      std::to_string(agg[1].committed));
  row("reps", std::to_string(a.reps), std::to_string(a.reps));

  fs::create_directories(a.out);
  fs::path table_path = fs::path(a.out) / "comparison.txt";
  write_file(table_path, table.str());
  std::cout << table.str();
  std::cout << "written to " << table_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quorumsim: a deterministic replicated-log laboratory"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd =
      app.add_subcommand("run", "run one scenario through one algorithm");
  run_cmd->add_option("file", run_args.file, "scenario file")->required();
  run_cmd->add_option("--seed", run_args.seed, "override the scenario seed");
  run_cmd->add_option("--algorithm", run_args.algorithm,
                      "override the scenario algorithm (paxos or raft)");
  run_cmd->add_option("--duration", run_args.duration,
                      "override the scenario duration in ticks");
  run_cmd->add_option("--out", run_args.out, "output directory (default out)");
  run_cmd->add_option("--mutation", run_args.mutations,
                      "enable a mutation by id (repeatable)");

  ExploreArgs ex_args;
  CLI::App* ex_cmd =
      app.add_subcommand("explore", "bounded exhaustive state search");
  ex_cmd->add_option("--algorithm", ex_args.algorithm, "paxos or raft");
  ex_cmd->add_option("--n", ex_args.cfg.n, "cluster size");
  ex_cmd->add_option("--ops", ex_args.cfg.max_ops, "client operation budget");
  ex_cmd->add_option("--max-term", ex_args.cfg.max_term, "highest term");
  ex_cmd->add_option("--depth", ex_args.cfg.max_depth, "path depth bound");
  ex_cmd->add_option("--max-states", ex_args.cfg.max_states,
                     "state budget, 0 = unlimited");
  ex_cmd->add_option("--crashes", ex_args.cfg.max_crashes, "crash budget");
  ex_cmd->add_option("--restarts", ex_args.cfg.max_restarts,
                     "restart budget");
  ex_cmd->add_option("--channel-cap", ex_args.cfg.channel_cap,
                     "per-link in-flight message bound");
  ex_cmd->add_flag("--full-dedup", ex_args.cfg.full_state_dedup,
                   "dedup on full states instead of hashes");
  ex_cmd->add_option("--mutation", ex_args.mutations,
                     "enable a mutation by id (repeatable)");
  ex_cmd->add_option("--out", ex_args.out, "output directory (default out)");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "compare paxos and raft on one scenario over paired seeds");
  bench_cmd->add_option("file", bench_args.file, "comparison scenario file")
      ->required();
  bench_cmd->add_option("--reps", bench_args.reps,
                        "repetitions per algorithm (default 500)");
  bench_cmd->add_option("--seed", bench_args.seed,
                        "override the scenario base seed");
  bench_cmd->add_option("--duration", bench_args.duration,
                        "override the scenario duration in ticks");
  bench_cmd->add_option("--out", bench_args.out,
                        "output directory (default out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11's own exit codes are remapped onto the documented contract:
    // help is success, any parse problem is a usage error.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (ex_cmd->parsed()) return cmd_explore(ex_args);
    return cmd_bench(bench_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InternalFault& e) {
    std::cerr << "internal fault: " << e.what() << "\n";
    return 2;
  }
}
