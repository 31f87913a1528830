// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/explore.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qsim {

namespace {

// The complete state of one interleaving point: node states, stable
// storage, channel contents, fault budgets, and the safety monitors.
// Monitors are part of the state on purpose: two worlds that agree on
// everything except their committed history must not be deduplicated, or
// a violation reachable from one of them could be skipped.
struct World {
  std::vector<NodeState> nodes;
  std::vector<PersistentState> durable;
  std::vector<char> alive;
  std::vector<std::vector<Message>> channels;  // [from * n + to], FIFO
  uint32_t crashes_used = 0;
  uint32_t restarts_used = 0;
  uint32_t ops_submitted = 0;

  // Monitors live in sorted flat vectors: worlds are copied once per
  // transition, and these stay small enough that linear shifts beat node
  // allocation by a wide margin.
  // slot -> (operation, term the committing leader held when it applied)
  std::vector<std::pair<LogIndex, std::pair<Operation, Term>>> committed;
  std::vector<std::pair<Term, ServerId>> leaders;
  std::vector<std::pair<std::pair<Term, ServerId>, ServerId>> votes;
  std::vector<std::pair<std::pair<Term, LogIndex>, Operation>> pairs;
};

// Sorted-vector emplace with map semantics: finds or inserts key, reports
// whether the insert was fresh.
template <typename Vec, typename Key, typename Mapped>
std::pair<typename Vec::iterator, bool> flat_emplace(Vec& v, const Key& key,
                                                     const Mapped& mapped) {
  auto it = std::lower_bound(
      v.begin(), v.end(), key,
      [](const auto& elem, const Key& k) { return elem.first < k; });
  if (it != v.end() && it->first == key) return {it, false};
  return {v.insert(it, {key, mapped}), true};
}

struct Choice {
  enum Kind : uint8_t {
    DeliverHead,
    ElectionFire,
    HeartbeatFire,
    SubmitOp,
    CrashServer,
    RestartServer,
  };
  Kind kind = DeliverHead;
  ServerId a = 0;  // acting server (receiver for DeliverHead)
  ServerId b = 0;  // sender for DeliverHead
};

// ---- canonical serialization (doubles as identity for dedup) --------------

void ser_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

void ser_str(std::string& out, const std::string& s) {
  ser_u64(out, s.size());
  out += s;
}

void ser_entry(std::string& out, const LogEntry& e) {
  ser_str(out, e.op);
  ser_u64(out, e.term);
}

void ser_log(std::string& out, const Log& log) {
  ser_u64(out, log.last_index());
  for (const LogEntry& e : log.entries()) ser_entry(out, e);
}

void ser_msg(std::string& out, const Message& m) {
  ser_u64(out, m.index());
  if (const auto* v = std::get_if<AppendEntriesRequest>(&m)) {
    ser_u64(out, v->term);
    ser_u64(out, v->leader_id);
    ser_u64(out, v->prev_log_index);
    ser_u64(out, v->prev_log_term);
    ser_u64(out, v->entries.size());
    for (const LogEntry& e : v->entries) ser_entry(out, e);
    ser_u64(out, v->leader_commit);
  } else if (const auto* v = std::get_if<AppendEntriesResponse>(&m)) {
    ser_u64(out, v->term);
    ser_u64(out, v->success);
    ser_u64(out, v->last_appended);
  } else if (const auto* v = std::get_if<PaxosVoteRequest>(&m)) {
    ser_u64(out, v->term);
    ser_u64(out, v->candidate_id);
    ser_u64(out, v->leader_commit);
  } else if (const auto* v = std::get_if<PaxosVoteResponse>(&m)) {
    ser_u64(out, v->term);
    ser_u64(out, v->vote_granted);
    ser_u64(out, v->entries.size());
    for (const auto& [idx, e] : v->entries) {
      ser_u64(out, idx);
      ser_entry(out, e);
    }
  } else if (const auto* v = std::get_if<RaftVoteRequest>(&m)) {
    ser_u64(out, v->term);
    ser_u64(out, v->candidate_id);
    ser_u64(out, v->last_log_index);
    ser_u64(out, v->last_log_term);
  } else if (const auto* v = std::get_if<RaftVoteResponse>(&m)) {
    ser_u64(out, v->term);
    ser_u64(out, v->vote_granted);
  }
}

void ser_node(std::string& out, const NodeState& st) {
  ser_u64(out, st.current_term);
  ser_u64(out, st.voted_for ? *st.voted_for + 1 : 0);
  ser_log(out, st.log);
  ser_u64(out, static_cast<uint64_t>(st.role));
  ser_u64(out, st.commit_index);
  ser_u64(out, st.last_applied);
  ser_u64(out, st.candidate.index());
  if (const auto* c = std::get_if<PaxosCandidateState>(&st.candidate)) {
    ser_u64(out, c->votes_received.size());
    for (ServerId v : c->votes_received) ser_u64(out, v);
    ser_u64(out, c->commit_snapshot);
    ser_u64(out, c->entries_seen.size());
    for (const auto& [idx, seen] : c->entries_seen) {
      ser_u64(out, idx);
      ser_u64(out, seen.size());
      for (const LogEntry& e : seen) ser_entry(out, e);
    }
  } else if (const auto* c = std::get_if<RaftCandidateState>(&st.candidate)) {
    ser_u64(out, c->votes_received.size());
    for (ServerId v : c->votes_received) ser_u64(out, v);
  }
  ser_u64(out, st.leader.has_value());
  if (st.leader) {
    for (const auto& [p, idx] : st.leader->next_index) {
      ser_u64(out, p);
      ser_u64(out, idx);
    }
    for (const auto& [p, idx] : st.leader->match_index) {
      ser_u64(out, p);
      ser_u64(out, idx);
    }
  }
}

void ser_world(std::string& out, const World& w) {
  out.clear();
  for (const NodeState& st : w.nodes) ser_node(out, st);
  for (const PersistentState& d : w.durable) {
    ser_u64(out, d.current_term);
    ser_u64(out, d.voted_for ? *d.voted_for + 1 : 0);
    ser_log(out, d.log);
  }
  for (char a : w.alive) out.push_back(a);
  for (const auto& ch : w.channels) {
    ser_u64(out, ch.size());
    for (const Message& m : ch) ser_msg(out, m);
  }
  ser_u64(out, w.crashes_used);
  ser_u64(out, w.restarts_used);
  ser_u64(out, w.ops_submitted);
  ser_u64(out, w.committed.size());
  for (const auto& [idx, c] : w.committed) {
    ser_u64(out, idx);
    ser_str(out, c.first);
    ser_u64(out, c.second);
  }
  ser_u64(out, w.leaders.size());
  for (const auto& [t, s] : w.leaders) {
    ser_u64(out, t);
    ser_u64(out, s);
  }
  ser_u64(out, w.votes.size());
  for (const auto& [k, cand] : w.votes) {
    ser_u64(out, k.first);
    ser_u64(out, k.second);
    ser_u64(out, cand);
  }
  ser_u64(out, w.pairs.size());
  for (const auto& [k, op] : w.pairs) {
    ser_u64(out, k.first);
    ser_u64(out, k.second);
    ser_str(out, op);
  }
}

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::pair<uint64_t, uint64_t> hash128(const std::string& s) {
  uint64_t h1 = 0x9E3779B97F4A7C15ull, h2 = 0xC2B2AE3D27D4EB4Full;
  size_t i = 0;
  for (; i + 8 <= s.size(); i += 8) {
    uint64_t chunk = 0;
    for (int k = 0; k < 8; ++k)
      chunk |= uint64_t(uint8_t(s[i + k])) << (8 * k);
    h1 = mix64(h1 ^ chunk);
    h2 = mix64(h2 + chunk * 0xFF51AFD7ED558CCDull);
  }
  uint64_t tail = s.size();
  for (; i < s.size(); ++i) tail = tail * 257 + uint8_t(s[i]);
  return {mix64(h1 ^ tail), mix64(h2 + tail)};
}

struct PairHash {
  size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
    return p.first;
  }
};

// ---- transition application -------------------------------------------------

struct StepOutcome {
  bool pruned = false;  // transition exceeds a channel bound; not a state
  std::optional<Violation> violation;
};

class Explorer {
 public:
  explicit Explorer(const SmallConfig& cfg)
      : cfg_(cfg),
        algo_(make_algorithm(cfg.algorithm, ClusterConfig{cfg.n},
                             {cfg.mutations, std::nullopt})),
        n_(cfg.n) {
    if (cfg_.n < 1) throw ConfigError("explore: n must be at least 1");
    if (cfg_.max_depth < 1) throw ConfigError("explore: depth must be positive");
  }

  ExploreResult run() {
    if (!cfg_.full_state_dedup) seen_hash_.reserve(1u << 21);
    World root = initial_world();
    remember(root, 0);  // counts the root as the first visited state

    struct Frame {
      World w;
      std::vector<Choice> choices;
      size_t next = 0;
    };
    std::vector<Frame> stack;
    std::vector<Choice> path;
    stack.push_back(Frame{root, gen_choices(root), 0});

    bool budget_hit = false;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.choices.size()) {
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      Choice c = f.choices[f.next++];
      ++stats_.transitions;

      World child = f.w;
      StepOutcome so = apply_choice(child, c, nullptr);
      if (so.violation) {
        path.push_back(c);
        return counterexample(path, *so.violation);
      }
      if (so.pruned) continue;

      // Path length equals stack.size() - 1, so the child sits at depth
      // stack.size(). Beyond the bound coverage is lost only if nobody ever
      // reaches this state within the bound, so unknown states park in a
      // pending set that visits retire; leftovers are the real truncations.
      uint32_t depth = static_cast<uint32_t>(stack.size());
      if (depth > cfg_.max_depth) {
        if (known(child))
          ++stats_.dedup_hits;
        else
          park(child);
        continue;
      }
      if (!remember(child, depth)) {
        ++stats_.dedup_hits;
        continue;
      }
      if (stats_.max_depth_seen < depth) stats_.max_depth_seen = depth;
      std::vector<Choice> choices = gen_choices(child);
      stack.push_back(Frame{std::move(child), std::move(choices), 0});
      path.push_back(c);

      if (cfg_.max_states && stats_.states_visited >= cfg_.max_states) {
        budget_hit = true;
        break;
      }
    }

    stats_.depth_truncations = cfg_.full_state_dedup
                                   ? uint64_t(pending_full_.size())
                                   : uint64_t(pending_hash_.size());
    ExploreResult res;
    res.stats = stats_;
    res.outcome = (budget_hit || stats_.depth_truncations > 0)
                      ? ExploreOutcome::Inconclusive
                      : ExploreOutcome::Ok;
    return res;
  }

 private:
  World initial_world() {
    World w;
    for (ServerId s = 0; s < n_; ++s) {
      w.nodes.push_back(algo_->initial_state(s));
      w.durable.push_back(w.nodes.back().persistent());
    }
    w.alive.assign(n_, 1);
    w.channels.assign(size_t(n_) * n_, {});
    return w;
  }

  // Records w as expanded at the given depth. Returns false when w was
  // already expanded at this depth or shallower; a strictly shallower
  // revisit re-expands so that depth-bounded search stays complete (the
  // subtree can now reach deeper than it could the first time).
  bool remember(const World& w, uint32_t depth) {
    ser_world(buf_, w);
    if (cfg_.full_state_dedup) {
      auto [it, fresh] = seen_full_.emplace(buf_, depth);
      if (fresh) {
        ++stats_.states_visited;
        pending_full_.erase(buf_);
      }
      if (!fresh && it->second <= depth) return false;
      it->second = depth;
      return true;
    }
    auto key = hash128(buf_);
    auto [it, fresh] = seen_hash_.emplace(key, depth);
    if (fresh) {
      ++stats_.states_visited;
      pending_hash_.erase(key);
    }
    if (!fresh && it->second <= depth) return false;
    it->second = depth;
    return true;
  }

  bool known(const World& w) {
    ser_world(buf_, w);
    if (cfg_.full_state_dedup) return seen_full_.count(buf_) > 0;
    return seen_hash_.count(hash128(buf_)) > 0;
  }

  // Marks a state first met beyond the depth bound; a later visit within
  // the bound retires the entry via remember().
  void park(const World& w) {
    ser_world(buf_, w);
    if (cfg_.full_state_dedup)
      pending_full_.insert(buf_);
    else
      pending_hash_.insert(hash128(buf_));
  }

  Term prospective_term(const NodeState& st) const {
    if (cfg_.algorithm == AlgorithmKind::Paxos)
      return PaxosAlgorithm::next_candidate_term(st.current_term, n_, st.self);
    return st.current_term + 1;
  }

  // Timer retries (heartbeats, new candidacies) repeat until answered, so
  // firing one while the server's previous round still sits undelivered in
  // some link adds interleavings without adding behaviors: the retry
  // becomes interesting only after those links drain or drop. Client
  // submissions are gated the same way; their broadcast would overflow an
  // undrained link anyway under small channel bounds.
  bool outlinks_drained(const World& w, ServerId s) const {
    for (ServerId p = 0; p < n_; ++p)
      if (p != s && w.alive[p] && !w.channels[size_t(s) * n_ + p].empty())
        return false;
    return true;
  }

  std::vector<Choice> gen_choices(const World& w) const {
    std::vector<Choice> out;
    for (ServerId from = 0; from < n_; ++from)
      for (ServerId to = 0; to < n_; ++to)
        if (from != to && !w.channels[size_t(from) * n_ + to].empty())
          out.push_back({Choice::DeliverHead, to, from});
    for (ServerId s = 0; s < n_; ++s)
      if (w.alive[s] && w.nodes[s].role != Role::Leader &&
          prospective_term(w.nodes[s]) <= cfg_.max_term &&
          outlinks_drained(w, s))
        out.push_back({Choice::ElectionFire, s, 0});
    for (ServerId s = 0; s < n_; ++s)
      if (w.alive[s] && w.nodes[s].role == Role::Leader &&
          outlinks_drained(w, s))
        out.push_back({Choice::HeartbeatFire, s, 0});
    if (w.ops_submitted < cfg_.max_ops)
      for (ServerId s = 0; s < n_; ++s)
        if (w.alive[s] && w.nodes[s].role == Role::Leader &&
            outlinks_drained(w, s))
          out.push_back({Choice::SubmitOp, s, 0});
    if (w.crashes_used < cfg_.max_crashes)
      for (ServerId s = 0; s < n_; ++s)
        if (w.alive[s]) out.push_back({Choice::CrashServer, s, 0});
    if (w.restarts_used < cfg_.max_restarts)
      for (ServerId s = 0; s < n_; ++s)
        if (!w.alive[s]) out.push_back({Choice::RestartServer, s, 0});
    return out;
  }

  TraceEvent* emit(Trace* sink, TraceKind kind, ServerId server) {
    if (!sink) return nullptr;
    TraceEvent e;
    e.time = sink_time_;
    e.seq = sink_seq_++;
    e.kind = kind;
    e.server = server;
    sink->push_back(std::move(e));
    return &sink->back();
  }

  StepOutcome apply_choice(World& w, const Choice& c, Trace* sink) {
    if (sink) ++sink_time_;
    StepOutcome so;
    switch (c.kind) {
      case Choice::DeliverHead: {
        auto& ch = w.channels[size_t(c.b) * n_ + c.a];
        Message msg = ch.front();
        ch.erase(ch.begin());
        if (TraceEvent* e = emit(sink, TraceKind::DeliverMsg, c.a)) {
          e->peer = c.b;
          e->msg = msg;
        }
        run_step(w, c.a, Deliver{c.b, msg}, sink, so);
        break;
      }
      case Choice::ElectionFire: {
        if (TraceEvent* e = emit(sink, TraceKind::TimerFired, c.a))
          e->timer = TimerKind::Election;
        run_step(w, c.a, TimerFire{TimerKind::Election}, sink, so);
        break;
      }
      case Choice::HeartbeatFire: {
        if (TraceEvent* e = emit(sink, TraceKind::TimerFired, c.a))
          e->timer = TimerKind::Heartbeat;
        run_step(w, c.a, TimerFire{TimerKind::Heartbeat}, sink, so);
        break;
      }
      case Choice::SubmitOp: {
        Operation op = "op" + std::to_string(w.ops_submitted);
        ++w.ops_submitted;
        if (TraceEvent* e = emit(sink, TraceKind::ClientSubmit, c.a))
          e->op = op;
        run_step(w, c.a, ClientRequest{op}, sink, so);
        break;
      }
      case Choice::CrashServer: {
        w.alive[c.a] = 0;
        w.nodes[c.a] = algo_->initial_state(c.a);  // volatile state is gone
        ++w.crashes_used;
        emit(sink, TraceKind::CrashEv, c.a);
        // Messages to a dead server can only ever be dropped, so drop them
        // now instead of enumerating every order of dropping them later.
        for (ServerId from = 0; from < n_; ++from) {
          auto& ch = w.channels[size_t(from) * n_ + c.a];
          for (const Message& msg : ch) {
            if (TraceEvent* e = emit(sink, TraceKind::DropMsg, c.a)) {
              e->peer = from;
              e->msg = msg;
              e->note = "down";
            }
          }
          ch.clear();
        }
        break;
      }
      case Choice::RestartServer: {
        w.alive[c.a] = 1;
        ++w.restarts_used;
        if (TraceEvent* e = emit(sink, TraceKind::RestartEv, c.a))
          e->durable = w.durable[c.a];
        run_step(w, c.a, Restart{w.durable[c.a]}, sink, so);
        break;
      }
    }
    if (so.violation) return so;
    for (const auto& ch : w.channels)
      if (ch.size() > cfg_.channel_cap) {
        so.pruned = true;
        return so;
      }
    return so;
  }

  void run_step(World& w, ServerId s, const Input& input, Trace* sink,
                StepOutcome& so) {
    Log pre_log = w.nodes[s].log;
    StepResult r;
    try {
      r = algo_->step(w.nodes[s], input);
    } catch (const InternalFault& f) {
      so.violation = Violation{ViolationKind::InternalInvariant, f.what(), {}};
      return;
    }
    w.nodes[s] = std::move(r.state);
    for (const Effect& eff : r.effects) {
      process_effect(w, s, eff, sink, so);
      if (so.violation) return;
    }
    check_log_change(w, s, pre_log, so);
  }

  void push_message(World& w, ServerId from, ServerId to, const Message& msg,
                    Trace* sink, StepOutcome& so) {
    if (TraceEvent* e = emit(sink, TraceKind::SendMsg, from)) {
      e->peer = to;
      e->msg = msg;
    }
    if (!w.alive[to]) {
      // Dead target: the send happened, the delivery never will.
      if (TraceEvent* e = emit(sink, TraceKind::DropMsg, to)) {
        e->peer = from;
        e->msg = msg;
        e->note = "down";
      }
    } else {
      w.channels[size_t(from) * n_ + to].push_back(msg);
    }
    // Vote-per-term monitor: one voter, one candidate per raft term.
    if (const auto* resp = std::get_if<RaftVoteResponse>(&msg);
        resp && resp->vote_granted) {
      auto key = std::make_pair(resp->term, from);
      auto [it, fresh] = flat_emplace(w.votes, key, to);
      if (!fresh && it->second != to)
        so.violation = Violation{
            ViolationKind::VotePerTerm,
            "s" + std::to_string(from) + " granted term " +
                std::to_string(resp->term) + " to both s" +
                std::to_string(it->second) + " and s" + std::to_string(to),
            {}};
    }
  }

  void process_effect(World& w, ServerId s, const Effect& eff, Trace* sink,
                      StepOutcome& so) {
    if (const auto* send = std::get_if<Send>(&eff)) {
      push_message(w, s, send->to, send->msg, sink, so);
    } else if (const auto* bc = std::get_if<BroadcastMsg>(&eff)) {
      for (ServerId p = 0; p < n_; ++p) {
        if (p == s) continue;
        push_message(w, s, p, bc->msg, sink, so);
        if (so.violation) return;
      }
    } else if (const auto* per = std::get_if<Persist>(&eff)) {
      w.durable[s] = per->durable;
      if (TraceEvent* e = emit(sink, TraceKind::PersistWrite, s))
        e->durable = per->durable;
    } else if (const auto* ap = std::get_if<Apply>(&eff)) {
      if (TraceEvent* e = emit(sink, TraceKind::ApplyOp, s)) {
        e->index = ap->index;
        e->entry = ap->entry;
      }
      // The applier's post-step term equals its term at the apply: a step
      // only ever raises its term before advancing the commit index.
      auto [it, fresh] = flat_emplace(
          w.committed, ap->index,
          std::make_pair(ap->entry.op, w.nodes[s].current_term));
      if (!fresh && it->second.first != ap->entry.op)
        so.violation =
            Violation{ViolationKind::StateMachineSafety,
                      "index " + std::to_string(ap->index) + " applied as " +
                          it->second.first + " and as " + ap->entry.op,
                      {}};
    } else if (const auto* rc = std::get_if<RoleChange>(&eff)) {
      const NodeState& st = w.nodes[s];
      if (TraceEvent* e = emit(sink, TraceKind::RoleChangeEv, s)) {
        e->role = rc->role;
        e->term = st.current_term;
        if (rc->role == Role::Leader) {
          e->log_snapshot = st.log;
          e->commit_snapshot = st.commit_index;
        }
      }
      if (rc->role == Role::Candidate &&
          cfg_.algorithm == AlgorithmKind::Paxos &&
          st.current_term % n_ != s) {
        so.violation = Violation{ViolationKind::ElectionSafety,
                                 "s" + std::to_string(s) +
                                     " campaigned in foreign term " +
                                     std::to_string(st.current_term),
                                 {}};
      } else if (rc->role == Role::Leader) {
        check_promotion(w, s, so);
      }
    }
    // ResetTimer is moot here: timer fires are explicit choices.
  }

  void check_promotion(World& w, ServerId s, StepOutcome& so) {
    const NodeState& st = w.nodes[s];
    auto [it, fresh] = flat_emplace(w.leaders, st.current_term, s);
    if (!fresh && it->second != s) {
      so.violation = Violation{
          ViolationKind::ElectionSafety,
          "term " + std::to_string(st.current_term) + " has leaders s" +
              std::to_string(it->second) + " and s" + std::to_string(s),
          {}};
      return;
    }
    // Only slots committed in an earlier term bind this leader: a candidate
    // holding stale grants may win a term the cluster has already moved
    // past, and such a leader can never commit anything in that term.
    for (const auto& [idx, c] : w.committed) {
      if (c.second >= st.current_term) continue;
      if (idx <= st.log.last_index() && st.log.at(idx).op == c.first) continue;
      so.violation = Violation{
          ViolationKind::LeaderCompleteness,
          "s" + std::to_string(s) + " promoted in term " +
              std::to_string(st.current_term) + " without committed op " +
              c.first + " at index " + std::to_string(idx),
          {}};
      return;
    }
    if (cfg_.algorithm == AlgorithmKind::Paxos) {
      for (LogIndex i = st.commit_index + 1; i <= st.log.last_index(); ++i) {
        if (st.log.at(i).term == st.current_term) continue;
        so.violation = Violation{
            ViolationKind::TermPurity,
            "s" + std::to_string(s) + " promoted in term " +
                std::to_string(st.current_term) + " holding " +
                st.log.at(i).op + "@" + std::to_string(st.log.at(i).term) +
                " at index " + std::to_string(i),
            {}};
        return;
      }
    }
  }

  void check_log_change(World& w, ServerId s, const Log& pre,
                        StepOutcome& so) {
    const Log& post = w.nodes[s].log;
    // A slot that held the committed operation must keep holding it.
    for (const auto& [idx, c] : w.committed) {
      if (idx > pre.last_index() || pre.at(idx).op != c.first) continue;
      if (idx <= post.last_index() && post.at(idx).op == c.first) continue;
      so.violation = Violation{
          ViolationKind::CommittedOverwrite,
          "s" + std::to_string(s) + " lost committed op " + c.first +
              " at index " + std::to_string(idx),
          {}};
      return;
    }
    if (cfg_.algorithm != AlgorithmKind::Raft) return;
    // Raft: one operation per (term, index), across all time.
    for (LogIndex i = 1; i <= post.last_index(); ++i) {
      auto key = std::make_pair(post.at(i).term, i);
      auto [it, fresh] = flat_emplace(w.pairs, key, post.at(i).op);
      if (!fresh && it->second != post.at(i).op) {
        so.violation = Violation{
            ViolationKind::LogMatching,
            "two entries share term " + std::to_string(key.first) +
                " at index " + std::to_string(i) + ": " + it->second +
                " vs " + post.at(i).op,
            {}};
        return;
      }
    }
    // Raft terms are immutable in place: same op may not change term.
    LogIndex top = std::min(pre.last_index(), post.last_index());
    for (LogIndex i = 1; i <= top; ++i) {
      if (pre.at(i).op == post.at(i).op && pre.at(i).term != post.at(i).term) {
        so.violation = Violation{
            ViolationKind::LogMatching,
            "s" + std::to_string(s) + " rewrote the term of " + pre.at(i).op +
                " at index " + std::to_string(i),
            {}};
        return;
      }
    }
  }

  ExploreResult counterexample(const std::vector<Choice>& path,
                               Violation primary) {
    ExploreResult res;
    res.outcome = ExploreOutcome::Counterexample;
    res.stats = stats_;

    // Replay the path against a fresh world, this time writing the trace.
    Trace trace;
    sink_time_ = 0;
    sink_seq_ = 0;
    World w = initial_world();
    for (const Choice& c : path) {
      StepOutcome so = apply_choice(w, c, &trace);
      if (so.violation) break;  // the final step reproduces the violation
    }
    res.counterexample = std::move(trace);
    // The offline checkers re-derive the conflict with full witness pairs.
    // The monitor's own record only stands in when no checker can see the
    // fault from the trace (stepper invariant faults).
    res.violations = run_all_checks(res.counterexample, cfg_.algorithm, n_);
    if (res.violations.empty()) {
      primary.witnesses.clear();
      if (!res.counterexample.empty())
        primary.witnesses.push_back(res.counterexample.size() - 1);
      res.violations.push_back(std::move(primary));
    }
    return res;
  }

  SmallConfig cfg_;
  std::unique_ptr<Algorithm> algo_;
  uint32_t n_;
  ExploreStats stats_;
  std::string buf_;
  // Canonical identity -> shallowest depth expanded so far.
  std::unordered_map<std::pair<uint64_t, uint64_t>, uint32_t, PairHash>
      seen_hash_;
  std::unordered_map<std::string, uint32_t> seen_full_;
  // States met only beyond the depth bound so far.
  std::unordered_set<std::pair<uint64_t, uint64_t>, PairHash> pending_hash_;
  std::unordered_set<std::string> pending_full_;
  Tick sink_time_ = 0;
  uint64_t sink_seq_ = 0;
};

}  // namespace

const char* explore_outcome_name(ExploreOutcome o) {
  switch (o) {
    case ExploreOutcome::Ok: return "ok";
    case ExploreOutcome::Counterexample: return "counterexample";
    case ExploreOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string format_explore_stats(const ExploreStats& s) {
  std::ostringstream os;
  os << "states_visited=" << s.states_visited << '\n'
     << "transitions=" << s.transitions << '\n'
     << "dedup_hits=" << s.dedup_hits << '\n'
     << "depth_truncations=" << s.depth_truncations << '\n'
     << "max_depth_seen=" << s.max_depth_seen << '\n';
  return os.str();
}

ExploreResult explore(const SmallConfig& cfg) {
  return Explorer(cfg).run();
}

}  // namespace qsim
