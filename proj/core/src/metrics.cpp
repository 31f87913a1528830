// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/metrics.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace qsim {

double RunMetrics::latency_mean() const {
  if (election_latencies.empty()) return 0.0;
  double sum = 0;
  for (Tick t : election_latencies) sum += static_cast<double>(t);
  return sum / static_cast<double>(election_latencies.size());
}

double RunMetrics::latency_variance() const {
  if (election_latencies.empty()) return 0.0;
  double mean = latency_mean();
  double acc = 0;
  for (Tick t : election_latencies) {
    double d = static_cast<double>(t) - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(election_latencies.size());
}

RunMetrics measure(const Trace& trace, uint32_t n) {
  RunMetrics m;

  // Reception counts of (receiver, index, operation) over AppendEntries
  // payloads; anything past the first reception is a duplicate shipment.
  std::map<std::tuple<ServerId, LogIndex, Operation>, uint64_t> receptions;
  std::set<Operation> applied_ops;

  // Split-vote bookkeeping: who campaigned in each term, who won it.
  std::map<Term, std::set<ServerId>> candidates_by_term;
  std::set<Term> won_terms;

  // Election latency bookkeeping.
  std::optional<ServerId> current_leader;
  std::optional<Tick> leaderless_since = 0;  // measuring from cluster start
  std::vector<uint32_t> group(n, 0);

  auto leader_failed = [&](Tick at) {
    current_leader.reset();
    if (!leaderless_since) leaderless_since = at;
  };

  for (const TraceEvent& e : trace) {
    switch (e.kind) {
      case TraceKind::SendMsg: {
        ++m.messages_total;
        if (const auto* ae = std::get_if<AppendEntriesRequest>(&e.msg))
          m.append_entries_shipped += ae->entries.size();
        if (const auto* pv = std::get_if<PaxosVoteResponse>(&e.msg))
          m.vote_entries_shipped += pv->entries.size();
        break;
      }
      case TraceKind::DeliverMsg: {
        if (const auto* ae = std::get_if<AppendEntriesRequest>(&e.msg)) {
          LogIndex idx = ae->prev_log_index;
          for (const LogEntry& entry : ae->entries) {
            ++idx;
            if (++receptions[{e.server, idx, entry.op}] > 1)
              ++m.duplicate_entry_transmissions;
          }
        }
        break;
      }
      case TraceKind::ApplyOp:
        applied_ops.insert(e.entry.op);
        break;
      case TraceKind::RoleChangeEv:
        switch (e.role) {
          case Role::Candidate:
            ++m.elections_started;
            candidates_by_term[e.term].insert(e.server);
            break;
          case Role::Leader:
            ++m.elections_won;
            won_terms.insert(e.term);
            current_leader = e.server;
            if (leaderless_since) {
              m.election_latencies.push_back(e.time - *leaderless_since);
              leaderless_since.reset();
            }
            break;
          case Role::Follower:
            if (current_leader == e.server) current_leader.reset();
            break;
        }
        break;
      case TraceKind::CrashEv:
        if (current_leader == e.server) leader_failed(e.time);
        break;
      case TraceKind::PartitionEv: {
        if (!e.groups.empty()) group = e.groups;
        else group.assign(n, 0);
        if (current_leader) {
          uint32_t g = group[*current_leader];
          uint32_t members = 0;
          for (ServerId s = 0; s < n; ++s)
            if (group[s] == g) ++members;
          if (members < n / 2 + 1) leader_failed(e.time);
        }
        break;
      }
      default:
        break;
    }
  }

  for (const auto& [term, who] : candidates_by_term)
    if (who.size() >= 2 && !won_terms.count(term)) ++m.split_vote_terms;
  m.committed_ops = applied_ops.size();
  return m;
}

std::string format_metrics(const RunMetrics& m) {
  std::ostringstream os;
  os << "messages_total=" << m.messages_total << '\n';
  os << "append_entries_shipped=" << m.append_entries_shipped << '\n';
  os << "vote_entries_shipped=" << m.vote_entries_shipped << '\n';
  os << "duplicate_entry_transmissions=" << m.duplicate_entry_transmissions
     << '\n';
  os << "elections_started=" << m.elections_started << '\n';
  os << "elections_won=" << m.elections_won << '\n';
  os << "split_vote_terms=" << m.split_vote_terms << '\n';
  os << "committed_ops=" << m.committed_ops << '\n';
  os << "election_latencies=";
  for (size_t i = 0; i < m.election_latencies.size(); ++i) {
    if (i) os << ',';
    os << m.election_latencies[i];
  }
  os << '\n';
  return os.str();
}

}  // namespace qsim
