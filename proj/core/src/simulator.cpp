// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/simulator.hpp"

#include <array>
#include <queue>
#include <variant>

#include "qsim/rng.hpp"

namespace qsim {

namespace {

struct EvDeliver {
  ServerId from, to;
  Message msg;
};
struct EvTimer {
  ServerId server;
  TimerKind kind;
  uint64_t gen;
};
struct EvFault {
  size_t index;
};
struct EvSubmit {
  size_t op_index;
  uint32_t attempt;
};

using Payload = std::variant<EvDeliver, EvTimer, EvFault, EvSubmit>;

struct Event {
  Tick time;
  uint64_t seq;  // total order among same-time events: FIFO by schedule order
  Payload payload;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Sim {
 public:
  Sim(const Scenario& sc, AlgorithmKind kind)
      : sc_(sc),
        kind_(kind),
        algo_(make_algorithm(kind, sc.cluster,
                             {sc.mutations, sc.batch_cap})),
        n_(sc.cluster.n),
        group_(n_, 0),
        alive_(n_, true),
        timer_gen_(n_) {
    for (ServerId s = 0; s < n_; ++s) {
      states_.push_back(algo_->initial_state(s));
      durable_.push_back(states_.back().persistent());
      election_rng_.emplace_back(derive_stream(sc.seed, "election", s, 0));
    }
    for (ServerId a = 0; a < n_; ++a)
      for (ServerId b = 0; b < n_; ++b)
        link_rng_.emplace_back(derive_stream(sc.seed, "delay", a, b));
    link_clock_.assign(static_cast<size_t>(n_) * n_, 0);
  }

  RunResult go() {
    for (ServerId s = 0; s < n_; ++s) arm_timer(s, TimerKind::Election);
    for (size_t i = 0; i < sc_.faults.size(); ++i)
      schedule(sc_.faults[i].at, EvFault{i});
    for (size_t i = 0; i < sc_.workload.size(); ++i)
      schedule(sc_.workload[i].at, EvSubmit{i, 0});
    accepted_.assign(sc_.workload.size(), false);

    while (!queue_.empty() && !fault_) {
      Event ev = queue_.top();
      if (ev.time > sc_.duration) break;
      queue_.pop();
      now_ = ev.time;
      try {
        std::visit([&](const auto& p) { dispatch(p); }, ev.payload);
      } catch (const InternalFault& f) {
        fault_ = f.what();
      }
    }

    RunResult res;
    res.trace = std::move(trace_);
    res.metrics = measure(res.trace, n_);
    res.final_states = std::move(states_);
    res.final_durable = std::move(durable_);
    res.final_alive.assign(alive_.begin(), alive_.end());
    res.fault = fault_;
    return res;
  }

 private:
  void schedule(Tick at, Payload p) {
    queue_.push(Event{at, next_seq_++, std::move(p)});
  }

  TraceEvent& emit(TraceKind kind) {
    TraceEvent e;
    e.time = now_;
    e.seq = trace_seq_++;
    e.kind = kind;
    trace_.push_back(std::move(e));
    return trace_.back();
  }

  Tick sample_delay(ServerId from, ServerId to) {
    if (sc_.delay.min == sc_.delay.max) return sc_.delay.min;
    return link_rng_[from * n_ + to].uniform(sc_.delay.min, sc_.delay.max);
  }

  Tick sample_timeout(ServerId s, TimerKind kind) {
    if (kind == TimerKind::Heartbeat) return sc_.timeouts.heartbeat;
    Tick spread = sc_.election_spread_for(kind_);
    Tick t = sc_.timeouts.election_base;
    if (spread > 0) t += election_rng_[s].uniform(0, spread - 1);
    return t;
  }

  void arm_timer(ServerId s, TimerKind kind) {
    uint64_t gen = ++timer_gen_[s][static_cast<int>(kind)];
    schedule(now_ + sample_timeout(s, kind), EvTimer{s, kind, gen});
  }

  void send_message(ServerId from, ServerId to, const Message& msg) {
    TraceEvent& t = emit(TraceKind::SendMsg);
    t.server = from;
    t.peer = to;
    t.msg = msg;
    // Per-link FIFO: a message never overtakes an earlier one on its link.
    Tick& clock = link_clock_[from * n_ + to];
    Tick at = std::max(now_ + sample_delay(from, to), clock);
    clock = at;
    schedule(at, EvDeliver{from, to, msg});
  }

  void apply_effects(ServerId s, const std::vector<Effect>& effects) {
    for (const Effect& eff : effects) {
      if (const auto* send = std::get_if<Send>(&eff)) {
        send_message(s, send->to, send->msg);
      } else if (const auto* bc = std::get_if<BroadcastMsg>(&eff)) {
        for (ServerId p = 0; p < n_; ++p)
          if (p != s) send_message(s, p, bc->msg);
      } else if (const auto* per = std::get_if<Persist>(&eff)) {
        durable_[s] = per->durable;
        TraceEvent& t = emit(TraceKind::PersistWrite);
        t.server = s;
        t.durable = per->durable;
      } else if (const auto* ap = std::get_if<Apply>(&eff)) {
        TraceEvent& t = emit(TraceKind::ApplyOp);
        t.server = s;
        t.index = ap->index;
        t.entry = ap->entry;
      } else if (const auto* rc = std::get_if<RoleChange>(&eff)) {
        TraceEvent& t = emit(TraceKind::RoleChangeEv);
        t.server = s;
        t.role = rc->role;
        t.term = states_[s].current_term;
        if (rc->role == Role::Leader) {
          t.log_snapshot = states_[s].log;
          t.commit_snapshot = states_[s].commit_index;
        }
      } else if (const auto* rt = std::get_if<ResetTimer>(&eff)) {
        arm_timer(s, rt->kind);
      }
    }
  }

  void step_server(ServerId s, const Input& input) {
    StepResult r = algo_->step(states_[s], input);
    states_[s] = std::move(r.state);
    apply_effects(s, r.effects);
  }

  void dispatch(const EvDeliver& d) {
    if (!alive_[d.to]) {
      TraceEvent& t = emit(TraceKind::DropMsg);
      t.server = d.to;
      t.peer = d.from;
      t.msg = d.msg;
      t.note = "down";
      return;
    }
    if (group_[d.from] != group_[d.to]) {
      TraceEvent& t = emit(TraceKind::DropMsg);
      t.server = d.to;
      t.peer = d.from;
      t.msg = d.msg;
      t.note = "partition";
      return;
    }
    TraceEvent& t = emit(TraceKind::DeliverMsg);
    t.server = d.to;
    t.peer = d.from;
    t.msg = d.msg;
    step_server(d.to, Deliver{d.from, d.msg});
  }

  void dispatch(const EvTimer& tm) {
    if (!alive_[tm.server]) return;
    if (timer_gen_[tm.server][static_cast<int>(tm.kind)] != tm.gen)
      return;  // superseded by a reset
    TraceEvent& t = emit(TraceKind::TimerFired);
    t.server = tm.server;
    t.timer = tm.kind;
    // Timers are one-shot and purely effect-driven: whoever needs another
    // fire emits ResetTimer in its step (elections rearm themselves,
    // leaders rearm their own heartbeat).
    step_server(tm.server, TimerFire{tm.kind});
  }

  void dispatch(const EvFault& f) {
    const FaultEvent& fe = sc_.faults[f.index];
    switch (fe.kind) {
      case FaultEvent::Kind::Crash: {
        if (!alive_[fe.server])
          throw ConfigError("fault crashes a server that is already down");
        alive_[fe.server] = false;
        ++timer_gen_[fe.server][0];
        ++timer_gen_[fe.server][1];
        emit(TraceKind::CrashEv).server = fe.server;
        break;
      }
      case FaultEvent::Kind::Restart: {
        if (alive_[fe.server])
          throw ConfigError("fault restarts a server that is not down");
        alive_[fe.server] = true;
        TraceEvent& t = emit(TraceKind::RestartEv);
        t.server = fe.server;
        t.durable = durable_[fe.server];
        step_server(fe.server, Restart{durable_[fe.server]});
        break;
      }
      case FaultEvent::Kind::PartitionSet: {
        for (uint32_t g = 0; g < fe.groups.size(); ++g)
          for (ServerId s : fe.groups[g]) group_[s] = g;
        TraceEvent& t = emit(TraceKind::PartitionEv);
        t.groups.assign(group_.begin(), group_.end());
        break;
      }
      case FaultEvent::Kind::Heal: {
        group_.assign(n_, 0);
        TraceEvent& t = emit(TraceKind::PartitionEv);
        t.groups.assign(group_.begin(), group_.end());
        t.note = "heal";
        break;
      }
    }
  }

  void dispatch(const EvSubmit& sub) {
    if (accepted_[sub.op_index]) return;
    const ClientOp& c = sc_.workload[sub.op_index];
    ServerId target = (target_hint_ + sub.attempt) % n_;
    TraceEvent& t = emit(TraceKind::ClientSubmit);
    t.server = target;
    t.op = c.op;
    if (alive_[target] && states_[target].role == Role::Leader) {
      accepted_[sub.op_index] = true;
      target_hint_ = target;
      step_server(target, ClientRequest{c.op});
      return;
    }
    TraceEvent& r = emit(TraceKind::NotLeaderReject);
    r.server = target;
    r.op = c.op;
    r.note = alive_[target] ? "not-leader" : "down";
    // Try the next server after a heartbeat's worth of waiting; a fresh
    // leader announces itself within one interval.
    schedule(now_ + sc_.timeouts.heartbeat,
             EvSubmit{sub.op_index, sub.attempt + 1});
  }

  const Scenario& sc_;
  AlgorithmKind kind_;
  std::unique_ptr<Algorithm> algo_;
  uint32_t n_;

  std::vector<NodeState> states_;
  std::vector<PersistentState> durable_;
  std::vector<uint32_t> group_;
  std::vector<char> alive_;
  std::vector<std::array<uint64_t, 2>> timer_gen_;
  std::vector<SplitMix64> election_rng_;
  std::vector<SplitMix64> link_rng_;
  std::vector<Tick> link_clock_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  uint64_t next_seq_ = 0;
  uint64_t trace_seq_ = 0;
  Tick now_ = 0;
  Trace trace_;
  std::vector<bool> accepted_;
  ServerId target_hint_ = 0;
  std::optional<std::string> fault_;
};

}  // namespace

RunResult run(const Scenario& scenario, AlgorithmKind kind) {
  scenario.validate();
  return Sim(scenario, kind).go();
}

}  // namespace qsim
