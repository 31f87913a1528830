// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/checks.hpp"

#include <map>
#include <sstream>

namespace qsim {

namespace {

std::string entry_str(const LogEntry& e) {
  return e.op + "@" + std::to_string(e.term);
}

// Any apply is commit evidence: commit indices only ever cover
// majority-replicated prefixes.
struct Committed {
  Operation op;
  size_t witness;  // trace index of the first apply
};

}  // namespace

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::StateMachineSafety: return "state-machine-safety";
    case ViolationKind::LeaderCompleteness: return "leader-completeness";
    case ViolationKind::ElectionSafety: return "election-safety";
    case ViolationKind::LogMatching: return "log-matching";
    case ViolationKind::CommittedOverwrite: return "committed-overwrite";
    case ViolationKind::VotePerTerm: return "vote-per-term";
    case ViolationKind::TermPurity: return "term-purity";
    case ViolationKind::InternalInvariant: return "internal-invariant";
  }
  return "?";
}

std::string format_violation(const Violation& v) {
  std::ostringstream os;
  os << violation_kind_name(v.kind) << ": " << v.description;
  if (!v.witnesses.empty()) {
    os << " (events";
    for (size_t w : v.witnesses) os << ' ' << w;
    os << ')';
  }
  return os.str();
}

std::vector<Violation> check_state_machine_safety(const Trace& t) {
  std::vector<Violation> out;
  std::map<LogIndex, std::pair<LogEntry, size_t>> applied;
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind != TraceKind::ApplyOp) continue;
    auto [it, fresh] = applied.emplace(e.index, std::make_pair(e.entry, i));
    if (!fresh && it->second.first.op != e.entry.op) {
      Violation v;
      v.kind = ViolationKind::StateMachineSafety;
      v.description = "index " + std::to_string(e.index) + " applied as " +
                      entry_str(it->second.first) + " by s" +
                      std::to_string(t[it->second.second].server) +
                      " and as " + entry_str(e.entry) + " by s" +
                      std::to_string(e.server);
      v.witnesses = {it->second.second, i};
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<Violation> check_leader_completeness(const Trace& t) {
  std::vector<Violation> out;
  struct CommittedIn {
    Operation op;
    Term term;       // term the committing leader held when it applied
    size_t witness;  // trace index of the first apply
  };
  std::map<LogIndex, CommittedIn> committed;
  // A server's term at any event is the term of its latest durable write:
  // every term change persists before anything else in the same step.
  std::map<ServerId, Term> current_term;
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind == TraceKind::PersistWrite || e.kind == TraceKind::RestartEv) {
      current_term[e.server] = e.durable.current_term;
      continue;
    }
    if (e.kind == TraceKind::ApplyOp) {
      // The first apply of a slot is the committing leader's own apply: a
      // follower only learns the commit from a later message of that leader.
      committed.emplace(e.index,
                        CommittedIn{e.entry.op, current_term[e.server], i});
      continue;
    }
    if (e.kind != TraceKind::RoleChangeEv || e.role != Role::Leader) continue;
    // Every slot committed in an earlier term must be present, with the same
    // operation, in the new leader's promotion-time log. Slots committed in
    // this term or later are exempt: a candidate holding stale grants may
    // win a term that the rest of the cluster has already moved past, and
    // such a leader can never commit anything in that term.
    for (const auto& [idx, c] : committed) {
      if (c.term >= e.term) continue;
      bool ok = idx <= e.log_snapshot.last_index() &&
                e.log_snapshot.at(idx).op == c.op;
      if (!ok) {
        Violation v;
        v.kind = ViolationKind::LeaderCompleteness;
        v.description = "s" + std::to_string(e.server) + " promoted in term " +
                        std::to_string(e.term) + " without committed op " +
                        c.op + " at index " + std::to_string(idx);
        v.witnesses = {c.witness, i};
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

std::vector<Violation> check_election_safety(const Trace& t,
                                             AlgorithmKind kind, uint32_t n) {
  std::vector<Violation> out;
  std::map<Term, std::pair<ServerId, size_t>> winners;
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind != TraceKind::RoleChangeEv) continue;
    if (e.role == Role::Candidate && kind == AlgorithmKind::Paxos &&
        e.term % n != e.server) {
      Violation v;
      v.kind = ViolationKind::ElectionSafety;
      v.description = "s" + std::to_string(e.server) +
                      " campaigned in foreign term " + std::to_string(e.term);
      v.witnesses = {i};
      out.push_back(std::move(v));
    }
    if (e.role != Role::Leader) continue;
    auto [it, fresh] = winners.emplace(e.term, std::make_pair(e.server, i));
    if (!fresh && it->second.first != e.server) {
      Violation v;
      v.kind = ViolationKind::ElectionSafety;
      v.description = "term " + std::to_string(e.term) + " has leaders s" +
                      std::to_string(it->second.first) + " and s" +
                      std::to_string(e.server);
      v.witnesses = {it->second.second, i};
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<Violation> check_log_matching(const Trace& t, uint32_t n) {
  std::vector<Violation> out;
  std::vector<Log> logs(n);
  std::vector<bool> known(n, false);
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind != TraceKind::PersistWrite) continue;
    logs[e.server] = e.durable.log;
    known[e.server] = true;
    for (ServerId r = 0; r < n; ++r) {
      if (r == e.server || !known[r]) continue;
      const Log& a = logs[e.server];
      const Log& b = logs[r];
      LogIndex top = std::min(a.last_index(), b.last_index());
      for (LogIndex idx = top; idx >= 1; --idx) {
        if (a.term_at(idx) != b.term_at(idx)) continue;
        // Terms agree here, so everything at and below must be identical.
        for (LogIndex j = idx; j >= 1; --j) {
          if (a.at(j) == b.at(j)) continue;
          Violation v;
          v.kind = ViolationKind::LogMatching;
          v.description = "s" + std::to_string(e.server) + " and s" +
                          std::to_string(r) + " agree on term at index " +
                          std::to_string(idx) + " but diverge at index " +
                          std::to_string(j) + ": " + entry_str(a.at(j)) +
                          " vs " + entry_str(b.at(j));
          v.witnesses = {i};
          out.push_back(std::move(v));
          return out;  // one witness per trace is plenty
        }
        break;  // checked the longest matching point; lower ones are covered
      }
    }
  }
  return out;
}

std::vector<Violation> check_committed_overwrite(const Trace& t) {
  std::vector<Violation> out;
  std::map<ServerId, Log> logs;
  std::map<LogIndex, Committed> committed;
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind == TraceKind::ApplyOp) {
      committed.emplace(e.index, Committed{e.entry.op, i});
      continue;
    }
    if (e.kind != TraceKind::PersistWrite) continue;
    const Log& prev = logs[e.server];
    const Log& next = e.durable.log;
    // Only slots that already agreed with the committed operation are
    // protected; a straggler converging onto the committed value is fine.
    for (const auto& [idx, c] : committed) {
      if (idx > prev.last_index() || prev.at(idx).op != c.op) continue;
      if (idx > next.last_index()) {
        Violation v;
        v.kind = ViolationKind::CommittedOverwrite;
        v.description = "s" + std::to_string(e.server) +
                        " truncated committed index " + std::to_string(idx) +
                        " (" + c.op + ")";
        v.witnesses = {c.witness, i};
        out.push_back(std::move(v));
      } else if (next.at(idx).op != c.op) {
        Violation v;
        v.kind = ViolationKind::CommittedOverwrite;
        v.description = "s" + std::to_string(e.server) +
                        " overwrote committed index " + std::to_string(idx) +
                        " (" + c.op + ") with " + entry_str(next.at(idx));
        v.witnesses = {c.witness, i};
        out.push_back(std::move(v));
      }
    }
    logs[e.server] = next;
  }
  return out;
}

std::vector<Violation> check_vote_per_term(const Trace& t) {
  std::vector<Violation> out;
  // (voter, term) -> (candidate granted, witness)
  std::map<std::pair<ServerId, Term>, std::pair<ServerId, size_t>> grants;
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind != TraceKind::SendMsg) continue;
    const auto* resp = std::get_if<RaftVoteResponse>(&e.msg);
    if (!resp || !resp->vote_granted) continue;
    auto key = std::make_pair(e.server, resp->term);
    auto [it, fresh] = grants.emplace(key, std::make_pair(e.peer, i));
    if (!fresh && it->second.first != e.peer) {
      Violation v;
      v.kind = ViolationKind::VotePerTerm;
      v.description = "s" + std::to_string(e.server) + " granted term " +
                      std::to_string(resp->term) + " to both s" +
                      std::to_string(it->second.first) + " and s" +
                      std::to_string(e.peer);
      v.witnesses = {it->second.second, i};
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<Violation> check_term_purity(const Trace& t) {
  std::vector<Violation> out;
  for (size_t i = 0; i < t.size(); ++i) {
    const TraceEvent& e = t[i];
    if (e.kind != TraceKind::RoleChangeEv || e.role != Role::Leader) continue;
    for (LogIndex idx = e.commit_snapshot + 1; idx <= e.log_snapshot.last_index();
         ++idx) {
      if (e.log_snapshot.at(idx).term == e.term) continue;
      Violation v;
      v.kind = ViolationKind::TermPurity;
      v.description = "s" + std::to_string(e.server) + " promoted in term " +
                      std::to_string(e.term) + " holding " +
                      entry_str(e.log_snapshot.at(idx)) + " at index " +
                      std::to_string(idx) + " above commit " +
                      std::to_string(e.commit_snapshot);
      v.witnesses = {i};
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<Violation> run_all_checks(const Trace& t, AlgorithmKind kind,
                                      uint32_t n) {
  std::vector<Violation> out = check_state_machine_safety(t);
  auto add = [&](std::vector<Violation> more) {
    for (Violation& v : more) out.push_back(std::move(v));
  };
  add(check_leader_completeness(t));
  add(check_election_safety(t, kind, n));
  if (kind == AlgorithmKind::Raft) {
    add(check_log_matching(t, n));
    add(check_vote_per_term(t));
  } else {
    add(check_committed_overwrite(t));
    add(check_term_purity(t));
  }
  return out;
}

}  // namespace qsim
