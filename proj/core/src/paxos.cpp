// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "qsim/algorithm.hpp"

namespace qsim {

Term PaxosAlgorithm::next_candidate_term(Term current, uint32_t n,
                                         ServerId self) {
  // Disjoint term spaces: server s may only use terms t with t % n == s.
  Term t = current + 1;
  Term r = t % n;
  return t + (self >= r ? self - r : n - r + self);
}

void PaxosAlgorithm::start_election(Machine& m) const {
  NodeState& st = m.st;
  st.current_term = next_candidate_term(st.current_term, cfg_.n, st.self);
  st.role = Role::Candidate;

  PaxosCandidateState cand;
  cand.votes_received.insert(st.self);
  cand.commit_snapshot = st.commit_index;
  // Seed the merge with our own uncommitted suffix; voters add theirs.
  for (LogIndex i = st.commit_index + 1; i <= st.log.last_index(); ++i)
    cand.entries_seen[i].insert(st.log.at(i));
  st.candidate = std::move(cand);
  st.leader.reset();

  m.persist();
  m.role_change(Role::Candidate);
  m.broadcast(PaxosVoteRequest{st.current_term, st.self, st.commit_index});
  m.reset_timer(TimerKind::Election);

  if (1 >= cfg_.majority()) merge_and_promote(m);
}

void PaxosAlgorithm::advance_commit(Machine& m) const {
  advance_commit_impl(m, false);
}

void PaxosAlgorithm::on_same_term_append_entries(Machine& m) const {
  // Terms are partitioned by server id, so while we lead or campaign in a
  // term, an AppendEntries at that same term means someone forged it.
  if (m.st.role != Role::Follower)
    throw InternalFault("append entries from a foreign leader in term " +
                        std::to_string(m.st.current_term));
}

void PaxosAlgorithm::handle_message(Machine& m, ServerId from,
                                    const PaxosVoteRequest& req) const {
  // Grant exactly when the candidate's term beats ours; observe_term has
  // already adopted it and stepped us down in that case.
  bool granted = observe_term(m, req.term);
  PaxosVoteResponse resp;
  resp.term = m.st.current_term;
  resp.vote_granted = granted;
  if (granted) {
    for (LogIndex i = req.leader_commit + 1; i <= m.st.log.last_index(); ++i)
      resp.entries.emplace_back(i, m.st.log.at(i));
    m.reset_timer(TimerKind::Election);
  }
  m.send(from, std::move(resp));
}

void PaxosAlgorithm::handle_message(Machine& m, ServerId from,
                                    const PaxosVoteResponse& resp) const {
  if (observe_term(m, resp.term)) return;  // someone is past us; stand down
  NodeState& st = m.st;
  if (st.role != Role::Candidate || resp.term != st.current_term) return;
  if (!resp.vote_granted) return;

  auto& cand = std::get<PaxosCandidateState>(st.candidate);
  cand.votes_received.insert(from);
  for (const auto& [idx, entry] : resp.entries) {
    if (idx <= cand.commit_snapshot)
      throw InternalFault("voter reported an entry at or below our commit");
    cand.entries_seen[idx].insert(entry);
  }
  if (cand.votes_received.size() >= cfg_.majority()) merge_and_promote(m);
}

void PaxosAlgorithm::merge_and_promote(Machine& m) const {
  NodeState& st = m.st;
  auto& cand = std::get<PaxosCandidateState>(st.candidate);
  if (cand.commit_snapshot != st.commit_index)
    throw InternalFault("commit index moved during a paxos candidacy");

  if (!cand.entries_seen.empty()) {
    // The reported indices must form a contiguous run right above the
    // commit snapshot, otherwise the merged log would have holes.
    LogIndex expect = cand.commit_snapshot;
    for (const auto& [idx, seen] : cand.entries_seen) {
      if (idx != expect + 1)
        throw InternalFault("gap in merged entries at index " +
                            std::to_string(expect + 1));
      expect = idx;
      if (seen.empty()) throw InternalFault("empty candidate entry set");
    }

    st.log.truncate_from(cand.commit_snapshot + 1);
    for (const auto& [idx, seen] : cand.entries_seen) {
      (void)idx;
      // Highest term wins. A term tie between different operations would
      // mean two leaders shared a term, which the term split rules out.
      const LogEntry& pick =
          mutations().enabled(Mutation::PaxosPickFirstNotGreatest)
              ? *seen.begin()
              : *seen.rbegin();
      if (seen.size() >= 2) {
        auto second = std::next(seen.rbegin());
        if (second->term == seen.rbegin()->term)
          throw InternalFault("conflicting entries share term " +
                              std::to_string(second->term));
      }
      Term t = mutations().enabled(Mutation::PaxosNoTermRewrite)
                   ? pick.term
                   : st.current_term;
      st.log.append(LogEntry{pick.op, t});
    }
    m.persist();
  }

  become_leader(m, st.commit_index + 1);
}

}  // namespace qsim
