// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end coverage of the command line contract: every documented exit
// status, the output files, override precedence and byte determinism. The
// binary under test comes from the QSIM_CLI environment variable and the
// checked-in scenario files from QSIM_SCENARIOS.

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

const std::string& cli_path() {
  static std::string path = [] {
    const char* env = std::getenv("QSIM_CLI");
    return std::string(env ? env : "quorumsim");
  }();
  return path;
}

const fs::path& scenario_dir() {
  static fs::path dir = [] {
    const char* env = std::getenv("QSIM_SCENARIOS");
    return fs::path(env ? env : "scenarios");
  }();
  return dir;
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("qsim-cli-" + tag + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path capture = fs::temp_directory_path() /
                     ("qsim-cli-capture-" + std::to_string(counter++) + ".txt");
  std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" +
                    capture.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  CliResult r;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.output = slurp(capture);
  fs::remove(capture);
  return r;
}

std::string scenario(const std::string& name) {
  return "\"" + (scenario_dir() / name).string() + "\"";
}

fs::path write_scenario(const std::string& tag, const std::string& body) {
  fs::path path = fresh_dir(tag) / "scenario.json";
  std::ofstream out(path);
  out << body;
  return path;
}

uint64_t metric_value(const std::string& metrics, const std::string& key) {
  std::istringstream in(metrics);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0)
      return std::stoull(line.substr(key.size() + 1));
  FAIL("metric ", key, " not found");
  return 0;
}

}  // namespace

TEST_CASE("run: a clean scenario exits 0 and writes trace and metrics") {
  fs::path out = fresh_dir("run-clean");
  CliResult r = run_cli("run " + scenario("raft-kill-leader.json") +
                        " --out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("checks      clean") != std::string::npos);
  CHECK(fs::exists(out / "trace.txt"));
  CHECK(fs::exists(out / "metrics.txt"));
  CHECK(!fs::exists(out / "violations.txt"));
  std::string metrics = slurp(out / "metrics.txt");
  CHECK(metric_value(metrics, "elections_won") >= 2);
  CHECK(metric_value(metrics, "committed_ops") == 3);
  CHECK(metric_value(metrics, "vote_entries_shipped") == 0);
}

TEST_CASE("run: the paxos fixture ships vote entries and duplicates") {
  fs::path out = fresh_dir("run-paxos");
  CliResult r = run_cli("run " + scenario("paxos-suffix-carryover.json") +
                        " --out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  std::string metrics = slurp(out / "metrics.txt");
  CHECK(metric_value(metrics, "vote_entries_shipped") > 0);
  CHECK(metric_value(metrics, "duplicate_entry_transmissions") > 0);
  CHECK(metric_value(metrics, "committed_ops") == 3);
}

TEST_CASE("run: identical invocations write byte-identical outputs") {
  fs::path out1 = fresh_dir("run-det1");
  fs::path out2 = fresh_dir("run-det2");
  std::string base = "run " + scenario("raft-kill-leader.json") + " --out \"";
  CHECK(run_cli(base + out1.string() + "\"").exit_code == 0);
  CHECK(run_cli(base + out2.string() + "\"").exit_code == 0);
  CHECK(slurp(out1 / "trace.txt") == slurp(out2 / "trace.txt"));
  CHECK(slurp(out1 / "metrics.txt") == slurp(out2 / "metrics.txt"));
  CHECK(!slurp(out1 / "trace.txt").empty());
}

TEST_CASE("run: --seed shadows the file seed and changes the timeline") {
  fs::path out1 = fresh_dir("run-seed1");
  fs::path out2 = fresh_dir("run-seed7");
  std::string base = "run " + scenario("raft-kill-leader.json");
  CliResult r1 = run_cli(base + " --out \"" + out1.string() + "\"");
  CliResult r7 =
      run_cli(base + " --seed 7 --out \"" + out2.string() + "\"");
  CHECK(r1.exit_code == 0);
  CHECK(r7.exit_code == 0);
  CHECK(r7.output.find("seed 7") != std::string::npos);
  CHECK(slurp(out1 / "trace.txt") != slurp(out2 / "trace.txt"));
}

TEST_CASE("run: --duration shadows the file and revalidates the workload") {
  // The fixture's last operation arrives at t=6000; cutting the run short
  // must be rejected as a config error, not silently dropped.
  CliResult r = run_cli("run " + scenario("raft-kill-leader.json") +
                        " --duration 3000 --out \"" +
                        fresh_dir("run-dur").string() + "\"");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("config error") != std::string::npos);
}

TEST_CASE("run: a biting mutation exits 2 and writes the violation file") {
  fs::path sc = write_scenario("mut", R"({
    "name": "cold", "algorithm": "raft", "servers": 3, "duration": 2000,
    "timeouts": {"election_spread": 0}})");
  fs::path out = fresh_dir("run-mut");
  CliResult r = run_cli("run \"" + sc.string() +
                        "\" --mutation raft-no-voted-for --out \"" +
                        out.string() + "\"");
  CHECK(r.exit_code == 2);
  CHECK(fs::exists(out / "violations.txt"));
  std::string body = slurp(out / "violations.txt");
  CHECK(body.find("vote-per-term") != std::string::npos);
  CHECK(r.output.find("violation") != std::string::npos);
}

TEST_CASE("run: usage and config problems exit 1") {
  SUBCASE("missing file") {
    CliResult r = run_cli("run /nonexistent/scenario.json");
    CHECK(r.exit_code == 1);
  }
  SUBCASE("unknown key is named") {
    fs::path sc = write_scenario("badkey", R"({"algorithm": "raft",
      "servrs": 3})");
    CliResult r = run_cli("run \"" + sc.string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("servrs") != std::string::npos);
  }
  SUBCASE("comparison scenario wants one algorithm") {
    CliResult r = run_cli("run " + scenario("compare-coldstart.json") +
                          " --out \"" + fresh_dir("run-both").string() +
                          "\"");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("--algorithm") != std::string::npos);
  }
  SUBCASE("unknown mutation id") {
    CliResult r = run_cli("run " + scenario("raft-kill-leader.json") +
                          " --mutation not-a-mutation --out \"" +
                          fresh_dir("run-badmut").string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("not-a-mutation") != std::string::npos);
  }
  SUBCASE("no subcommand is a usage error") {
    CliResult r = run_cli("");
    CHECK(r.exit_code == 1);
  }
}

TEST_CASE("run: --algorithm makes a comparison scenario runnable") {
  fs::path out = fresh_dir("run-override");
  CliResult r = run_cli("run " + scenario("compare-coldstart.json") +
                        " --algorithm paxos --out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("(paxos") != std::string::npos);
}

TEST_CASE("explore: a tiny clean space exits 0 and prints its stats") {
  CliResult r = run_cli(
      "explore --algorithm raft --n 1 --ops 1 --max-term 1 --depth 10 "
      "--crashes 0 --restarts 0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("states_visited=") != std::string::npos);
  CHECK(r.output.find("outcome=ok") != std::string::npos);
}

TEST_CASE("explore: a mutation yields exit 2 and a counterexample file") {
  fs::path out = fresh_dir("explore-mut");
  CliResult r = run_cli(
      "explore --algorithm raft --n 3 --ops 0 --max-term 2 --depth 40 "
      "--crashes 0 --restarts 0 --mutation raft-no-voted-for --out \"" +
      out.string() + "\"");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("outcome=counterexample") != std::string::npos);
  CHECK(r.output.find("vote-per-term") != std::string::npos);
  CHECK(fs::exists(out / "counterexample.txt"));
  CHECK(!slurp(out / "counterexample.txt").empty());
}

TEST_CASE("explore: too shallow a depth exits 3") {
  CliResult r = run_cli("explore --algorithm raft --depth 1");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("outcome=inconclusive") != std::string::npos);
}

TEST_CASE("explore: a bad algorithm name exits 1") {
  CliResult r = run_cli("explore --algorithm zab");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("config error") != std::string::npos);
}

TEST_CASE("bench: the comparison fixture lands the headline contrasts") {
  fs::path out = fresh_dir("bench");
  CliResult r = run_cli("bench " + scenario("compare-leader-crash.json") +
                        " --reps 10 --out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "comparison.txt"));
  std::string table = slurp(out / "comparison.txt");
  CHECK(table.find("metric") != std::string::npos);
  CHECK(table.find("election_latency_mean") != std::string::npos);
  CHECK(table.find("split_vote_rate") != std::string::npos);
  CHECK(table.find("vote_entries_shipped") != std::string::npos);
  CHECK(table.find("duplicate_entry_transmissions") != std::string::npos);
  CHECK(table.find("messages_total") != std::string::npos);

  // Ten repetitions of a leader crash with an uncommitted suffix: paxos
  // ships entries inside votes on every one of them, raft never does.
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("vote_entries_shipped", 0) == 0) break;
  std::istringstream row(line);
  std::string name, paxos_col, raft_col;
  row >> name >> paxos_col >> raft_col;
  CHECK(std::stoull(paxos_col) >= 10);
  CHECK(raft_col == "0");
}

TEST_CASE("bench: identical invocations write byte-identical tables") {
  fs::path out1 = fresh_dir("bench-det1");
  fs::path out2 = fresh_dir("bench-det2");
  std::string base =
      "bench " + scenario("compare-leader-crash.json") + " --reps 5 --out \"";
  CHECK(run_cli(base + out1.string() + "\"").exit_code == 0);
  CHECK(run_cli(base + out2.string() + "\"").exit_code == 0);
  std::string t1 = slurp(out1 / "comparison.txt");
  CHECK(t1 == slurp(out2 / "comparison.txt"));
  CHECK(!t1.empty());
}

TEST_CASE("bench: misuse exits 1") {
  SUBCASE("single-algorithm scenario") {
    CliResult r = run_cli("bench " + scenario("raft-kill-leader.json") +
                          " --reps 2 --out \"" +
                          fresh_dir("bench-single").string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("both") != std::string::npos);
  }
  SUBCASE("zero repetitions") {
    CliResult r = run_cli("bench " + scenario("compare-leader-crash.json") +
                          " --reps 0");
    CHECK(r.exit_code == 1);
  }
}
