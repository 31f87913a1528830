// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/trace.hpp"

#include <sstream>

namespace qsim {

namespace {

void put_entry(std::ostream& os, const LogEntry& e) {
  os << e.op << '@' << e.term;
}

void put_log(std::ostream& os, const Log& log) {
  os << '[';
  for (LogIndex i = 1; i <= log.last_index(); ++i) {
    if (i > 1) os << ' ';
    put_entry(os, log.at(i));
  }
  os << ']';
}

void put_durable(std::ostream& os, const PersistentState& d) {
  os << "term=" << d.current_term << " voted=";
  if (d.voted_for)
    os << *d.voted_for;
  else
    os << '-';
  os << " log=";
  put_log(os, d.log);
}

struct MessagePrinter {
  std::ostream& os;

  void operator()(const AppendEntriesRequest& m) {
    os << "ae_req{t=" << m.term << " ldr=" << m.leader_id << " prev="
       << m.prev_log_index << '/' << m.prev_log_term << " lc="
       << m.leader_commit << " e=[";
    for (size_t i = 0; i < m.entries.size(); ++i) {
      if (i) os << ' ';
      put_entry(os, m.entries[i]);
    }
    os << "]}";
  }
  void operator()(const AppendEntriesResponse& m) {
    os << "ae_resp{t=" << m.term << " ok=" << (m.success ? 1 : 0)
       << " last=" << m.last_appended << '}';
  }
  void operator()(const PaxosVoteRequest& m) {
    os << "pax_vote_req{t=" << m.term << " cand=" << m.candidate_id
       << " lc=" << m.leader_commit << '}';
  }
  void operator()(const PaxosVoteResponse& m) {
    os << "pax_vote_resp{t=" << m.term << " g=" << (m.vote_granted ? 1 : 0)
       << " e=[";
    bool first = true;
    for (const auto& [idx, e] : m.entries) {
      if (!first) os << ' ';
      first = false;
      os << idx << ':';
      put_entry(os, e);
    }
    os << "]}";
  }
  void operator()(const RaftVoteRequest& m) {
    os << "raft_vote_req{t=" << m.term << " cand=" << m.candidate_id
       << " last=" << m.last_log_index << '/' << m.last_log_term << '}';
  }
  void operator()(const RaftVoteResponse& m) {
    os << "raft_vote_resp{t=" << m.term << " g=" << (m.vote_granted ? 1 : 0)
       << '}';
  }
};

}  // namespace

const char* trace_kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::SendMsg: return "send";
    case TraceKind::DeliverMsg: return "deliver";
    case TraceKind::DropMsg: return "drop";
    case TraceKind::TimerFired: return "timer";
    case TraceKind::RoleChangeEv: return "role";
    case TraceKind::PersistWrite: return "persist";
    case TraceKind::ApplyOp: return "apply";
    case TraceKind::ClientSubmit: return "submit";
    case TraceKind::NotLeaderReject: return "reject";
    case TraceKind::CrashEv: return "crash";
    case TraceKind::RestartEv: return "restart";
    case TraceKind::PartitionEv: return "partition";
  }
  return "?";
}

std::string format_message(const Message& m) {
  std::ostringstream os;
  std::visit(MessagePrinter{os}, m);
  return os.str();
}

std::string format_event(const TraceEvent& e) {
  std::ostringstream os;
  os << e.time << '\t' << e.seq << '\t' << trace_kind_name(e.kind) << '\t';
  switch (e.kind) {
    case TraceKind::SendMsg:
      os << 's' << e.server << ">s" << e.peer << ' ';
      std::visit(MessagePrinter{os}, e.msg);
      break;
    case TraceKind::DeliverMsg:
      os << 's' << e.server << "<s" << e.peer << ' ';
      std::visit(MessagePrinter{os}, e.msg);
      break;
    case TraceKind::DropMsg:
      os << 's' << e.server << "<s" << e.peer << ' ';
      std::visit(MessagePrinter{os}, e.msg);
      os << " reason=" << e.note;
      break;
    case TraceKind::TimerFired:
      os << 's' << e.server << ' ' << timer_name(e.timer);
      break;
    case TraceKind::RoleChangeEv:
      os << 's' << e.server << ' ' << role_name(e.role) << " t=" << e.term;
      if (e.role == Role::Leader) {
        os << " commit=" << e.commit_snapshot << " log=";
        put_log(os, e.log_snapshot);
      }
      break;
    case TraceKind::PersistWrite:
      os << 's' << e.server << ' ';
      put_durable(os, e.durable);
      break;
    case TraceKind::ApplyOp:
      os << 's' << e.server << ' ' << e.index << ':';
      put_entry(os, e.entry);
      break;
    case TraceKind::ClientSubmit:
    case TraceKind::NotLeaderReject:
      os << 's' << e.server << ' ' << e.op;
      if (!e.note.empty()) os << " reason=" << e.note;
      break;
    case TraceKind::CrashEv:
      os << 's' << e.server;
      break;
    case TraceKind::RestartEv:
      os << 's' << e.server << ' ';
      put_durable(os, e.durable);
      break;
    case TraceKind::PartitionEv: {
      os << "groups=";
      for (size_t s = 0; s < e.groups.size(); ++s) {
        if (s) os << ',';
        os << e.groups[s];
      }
      if (!e.note.empty()) os << " note=" << e.note;
      break;
    }
  }
  return os.str();
}

std::string format_trace(const Trace& t) {
  std::string out;
  for (const TraceEvent& e : t) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

}  // namespace qsim
