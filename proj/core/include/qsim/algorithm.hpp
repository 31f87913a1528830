// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "qsim/mutations.hpp"
#include "qsim/step.hpp"

namespace qsim {

enum class AlgorithmKind { Paxos, Raft };

const char* algorithm_name(AlgorithmKind k);

// A replicated-log consensus algorithm as a pure transition function:
// step(state, input) -> (state', effects). No clocks, no randomness, no
// hidden state; everything a step may do is in the returned effects.
//
// The AppendEntries pipeline (replication, consistency check, commit,
// apply) is shared. Subclasses supply leader election and the commit rule.
class Algorithm {
 public:
  struct Options {
    MutationSet mutations;
    // Max entries per AppendEntries message; unset means "full suffix".
    std::optional<uint32_t> batch_cap;
  };

  Algorithm(ClusterConfig cfg, Options opts);
  virtual ~Algorithm() = default;

  virtual AlgorithmKind kind() const = 0;

  const ClusterConfig& config() const { return cfg_; }
  const MutationSet& mutations() const { return opts_.mutations; }

  NodeState initial_state(ServerId self) const;
  StepResult step(const NodeState& state, const Input& input) const;

  static std::pair<LogIndex, Term> last_log_info(const NodeState& st);

 protected:
  // Working copy of one step: mutate st freely, record effects in order.
  struct Machine {
    NodeState st;
    std::vector<Effect> effects;
    // Index of the step's Persist placeholder in effects, patched with the
    // final snapshot when the step completes. One persist point per step is
    // enough because every flow finishes its durable writes before it sends.
    std::optional<size_t> persist_at;

    void persist();
    void send(ServerId to, Message msg);
    void broadcast(Message msg);
    void apply(LogIndex index, const LogEntry& e);
    void role_change(Role r);
    void reset_timer(TimerKind k);

    LeaderState& leader_state();
  };

  // Shared pipeline.
  bool observe_term(Machine& m, Term msg_term) const;
  void become_follower(Machine& m) const;
  void become_leader(Machine& m, LogIndex next_index_init) const;
  void handle_append_entries(Machine& m, ServerId from,
                             const AppendEntriesRequest& req) const;
  void handle_append_entries_response(Machine& m, ServerId from,
                                      const AppendEntriesResponse& resp) const;
  void handle_client_request(Machine& m, const Operation& op) const;
  void leader_tick(Machine& m) const;
  void send_append_entries(Machine& m, ServerId peer) const;
  void apply_committed(Machine& m) const;
  // Largest majority-replicated index becomes the commit index. Raft
  // additionally requires the entry to carry the current term.
  void advance_commit_impl(Machine& m, bool require_current_term) const;

  // Election hooks.
  virtual void start_election(Machine& m) const = 0;
  virtual void advance_commit(Machine& m) const = 0;
  // Called when observe_term adopts a higher term, before persisting.
  virtual void on_term_advanced(NodeState& st) const;
  // An AppendEntries at exactly our term arrived while we are candidate or
  // leader. Raft candidates defer to the new leader; everything else is a
  // protocol impossibility.
  virtual void on_same_term_append_entries(Machine& m) const;

  // Vote message dispatch; algorithms override their own pair.
  virtual void handle_message(Machine& m, ServerId from,
                              const PaxosVoteRequest& req) const;
  virtual void handle_message(Machine& m, ServerId from,
                              const PaxosVoteResponse& resp) const;
  virtual void handle_message(Machine& m, ServerId from,
                              const RaftVoteRequest& req) const;
  virtual void handle_message(Machine& m, ServerId from,
                              const RaftVoteResponse& resp) const;

  ClusterConfig cfg_;
  Options opts_;

 private:
  void dispatch(Machine& m, ServerId from, const Message& msg) const;
  void on_timer(Machine& m, TimerKind kind) const;
  void do_restart(Machine& m, const PersistentState& durable) const;
  void finalize(const Machine& m, const NodeState& before,
                const Input& input) const;
};

class PaxosAlgorithm final : public Algorithm {
 public:
  PaxosAlgorithm(ClusterConfig cfg, Options opts = {})
      : Algorithm(cfg, std::move(opts)) {}
  AlgorithmKind kind() const override { return AlgorithmKind::Paxos; }

  // Smallest term above current owned by this server: t % n == self.
  static Term next_candidate_term(Term current, uint32_t n, ServerId self);

 protected:
  void start_election(Machine& m) const override;
  void advance_commit(Machine& m) const override;
  void on_same_term_append_entries(Machine& m) const override;
  void handle_message(Machine& m, ServerId from,
                      const PaxosVoteRequest& req) const override;
  void handle_message(Machine& m, ServerId from,
                      const PaxosVoteResponse& resp) const override;

 private:
  void merge_and_promote(Machine& m) const;
};

class RaftAlgorithm final : public Algorithm {
 public:
  RaftAlgorithm(ClusterConfig cfg, Options opts = {})
      : Algorithm(cfg, std::move(opts)) {}
  AlgorithmKind kind() const override { return AlgorithmKind::Raft; }

  // True when (last_index, last_term) is at least as fresh as our own log.
  static bool up_to_date(LogIndex last_index, Term last_term,
                         const NodeState& st);

 protected:
  void start_election(Machine& m) const override;
  void advance_commit(Machine& m) const override;
  void on_term_advanced(NodeState& st) const override;
  void on_same_term_append_entries(Machine& m) const override;
  void handle_message(Machine& m, ServerId from,
                      const RaftVoteRequest& req) const override;
  void handle_message(Machine& m, ServerId from,
                      const RaftVoteResponse& resp) const override;
};

std::unique_ptr<Algorithm> make_algorithm(AlgorithmKind kind, ClusterConfig cfg,
                                          Algorithm::Options opts = {});

}  // namespace qsim
