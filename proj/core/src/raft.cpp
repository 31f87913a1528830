// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/algorithm.hpp"

namespace qsim {

bool RaftAlgorithm::up_to_date(LogIndex last_index, Term last_term,
                               const NodeState& st) {
  auto [own_index, own_term] = last_log_info(st);
  if (last_term != own_term) return last_term > own_term;
  return last_index >= own_index;
}

void RaftAlgorithm::start_election(Machine& m) const {
  NodeState& st = m.st;
  st.current_term += 1;
  st.voted_for = st.self;
  st.role = Role::Candidate;
  RaftCandidateState cand;
  cand.votes_received.insert(st.self);
  st.candidate = std::move(cand);
  st.leader.reset();

  m.persist();
  m.role_change(Role::Candidate);
  auto [last_index, last_term] = last_log_info(st);
  m.broadcast(RaftVoteRequest{st.current_term, st.self, last_index, last_term});
  m.reset_timer(TimerKind::Election);

  if (1 >= cfg_.majority()) become_leader(m, st.log.last_index() + 1);
}

void RaftAlgorithm::advance_commit(Machine& m) const {
  advance_commit_impl(m,
                      !mutations().enabled(Mutation::RaftNoCommitTermGuard));
}

void RaftAlgorithm::on_term_advanced(NodeState& st) const {
  st.voted_for.reset();  // a new term means a fresh vote
}

void RaftAlgorithm::on_same_term_append_entries(Machine& m) const {
  if (m.st.role == Role::Leader)
    throw InternalFault("second leader in term " +
                        std::to_string(m.st.current_term));
  // Someone else won our term; fall in line behind them.
  if (m.st.role == Role::Candidate) become_follower(m);
}

void RaftAlgorithm::handle_message(Machine& m, ServerId from,
                                   const RaftVoteRequest& req) const {
  observe_term(m, req.term);
  NodeState& st = m.st;

  bool granted = req.term == st.current_term;
  if (granted && !mutations().enabled(Mutation::RaftNoVotedFor))
    granted = !st.voted_for || *st.voted_for == req.candidate_id;
  if (granted && !mutations().enabled(Mutation::RaftNoUpToDateCheck))
    granted = up_to_date(req.last_log_index, req.last_log_term, st);

  if (granted) {
    if (st.voted_for != std::optional<ServerId>(req.candidate_id)) {
      st.voted_for = req.candidate_id;
      m.persist();
    }
    m.reset_timer(TimerKind::Election);
  }
  m.send(from, RaftVoteResponse{st.current_term, granted});
}

void RaftAlgorithm::handle_message(Machine& m, ServerId from,
                                   const RaftVoteResponse& resp) const {
  if (observe_term(m, resp.term)) return;  // someone is past us; stand down
  NodeState& st = m.st;
  if (st.role != Role::Candidate || resp.term != st.current_term) return;
  if (!resp.vote_granted) return;

  auto& cand = std::get<RaftCandidateState>(st.candidate);
  cand.votes_received.insert(from);
  if (cand.votes_received.size() >= cfg_.majority())
    become_leader(m, st.log.last_index() + 1);
}

}  // namespace qsim
