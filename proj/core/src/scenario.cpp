// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qsim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      bad(std::string("unknown key \"") + it.key() + "\" in " + where);
  }
}

uint64_t get_uint(const json& obj, const char* key, uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned())
    bad(std::string("\"") + key + "\" must be a non-negative integer");
  return v.get<uint64_t>();
}

DelayModel parse_delay(const json& v) {
  if (!v.is_object()) bad("\"delay\" must be an object");
  require_keys(v, "delay", {"fixed", "min", "max"});
  DelayModel d;
  if (v.contains("fixed")) {
    if (v.contains("min") || v.contains("max"))
      bad("\"delay\" takes either \"fixed\" or \"min\"/\"max\", not both");
    d.min = d.max = get_uint(v, "fixed", 5);
  } else {
    if (!v.contains("min") || !v.contains("max"))
      bad("\"delay\" needs both \"min\" and \"max\"");
    d.min = get_uint(v, "min", 1);
    d.max = get_uint(v, "max", 10);
  }
  return d;
}

Timeouts parse_timeouts(const json& v) {
  if (!v.is_object()) bad("\"timeouts\" must be an object");
  require_keys(v, "timeouts",
               {"election_base", "election_spread", "paxos_election_spread",
                "heartbeat"});
  Timeouts t;
  t.election_base = get_uint(v, "election_base", t.election_base);
  t.election_spread = get_uint(v, "election_spread", t.election_spread);
  t.paxos_election_spread =
      get_uint(v, "paxos_election_spread", t.paxos_election_spread);
  t.heartbeat = get_uint(v, "heartbeat", t.heartbeat);
  return t;
}

FaultEvent parse_fault(const json& v) {
  if (!v.is_object()) bad("each fault must be an object");
  require_keys(v, "faults[]", {"at", "crash", "restart", "partition", "heal"});
  FaultEvent f;
  if (!v.contains("at")) bad("fault is missing \"at\"");
  f.at = get_uint(v, "at", 0);
  int forms = v.contains("crash") + v.contains("restart") +
              v.contains("partition") + v.contains("heal");
  if (forms != 1)
    bad("fault needs exactly one of \"crash\", \"restart\", \"partition\", "
        "\"heal\"");
  if (v.contains("crash")) {
    f.kind = FaultEvent::Kind::Crash;
    f.server = static_cast<ServerId>(get_uint(v, "crash", 0));
  } else if (v.contains("restart")) {
    f.kind = FaultEvent::Kind::Restart;
    f.server = static_cast<ServerId>(get_uint(v, "restart", 0));
  } else if (v.contains("partition")) {
    f.kind = FaultEvent::Kind::PartitionSet;
    const json& g = v.at("partition");
    if (!g.is_array()) bad("\"partition\" must be an array of groups");
    for (const json& grp : g) {
      if (!grp.is_array()) bad("each partition group must be an array");
      std::vector<ServerId> ids;
      for (const json& id : grp) {
        if (!id.is_number_unsigned()) bad("partition members must be ids");
        ids.push_back(id.get<ServerId>());
      }
      f.groups.push_back(std::move(ids));
    }
  } else {
    if (!v.at("heal").is_boolean() || !v.at("heal").get<bool>())
      bad("\"heal\" must be true");
    f.kind = FaultEvent::Kind::Heal;
  }
  return f;
}

}  // namespace

void Scenario::validate() const {
  cluster.validate();
  if (duration == 0) bad("\"duration\" must be positive");
  if (delay.min > delay.max) bad("delay \"min\" must not exceed \"max\"");
  if (timeouts.election_base == 0) bad("\"election_base\" must be positive");
  if (timeouts.heartbeat == 0) bad("\"heartbeat\" must be positive");
  if (timeouts.heartbeat >= timeouts.election_base)
    bad("\"heartbeat\" must be smaller than \"election_base\", otherwise "
        "healthy leaders get deposed");
  if (batch_cap && *batch_cap == 0) bad("\"batch_cap\" must be positive");
  std::set<Operation> seen;
  for (const ClientOp& c : workload) {
    if (c.at > duration) bad("workload op scheduled after \"duration\"");
    if (c.op.empty()) bad("workload op must not be empty");
    if (c.op.find_first_of(" \t\n@") != std::string::npos)
      bad("workload op must not contain whitespace or '@'");
    if (!seen.insert(c.op).second)
      bad("workload ops must be unique, \"" + c.op + "\" repeats");
  }
  for (const FaultEvent& f : faults) {
    if (f.at > duration) bad("fault scheduled after \"duration\"");
    switch (f.kind) {
      case FaultEvent::Kind::Crash:
      case FaultEvent::Kind::Restart:
        if (f.server >= cluster.n) bad("fault targets an unknown server");
        break;
      case FaultEvent::Kind::PartitionSet: {
        std::vector<bool> seen_ids(cluster.n, false);
        for (const auto& grp : f.groups)
          for (ServerId s : grp) {
            if (s >= cluster.n) bad("partition names an unknown server");
            if (seen_ids[s]) bad("partition lists a server twice");
            seen_ids[s] = true;
          }
        for (ServerId s = 0; s < cluster.n; ++s)
          if (!seen_ids[s])
            bad("partition must place every server in exactly one group");
        break;
      }
      case FaultEvent::Kind::Heal:
        break;
    }
  }
}

ScenarioFile parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("scenario must be a JSON object");
  require_keys(doc, "scenario",
               {"name", "algorithm", "servers", "seed", "duration", "delay",
                "timeouts", "workload", "faults", "batch_cap", "mutations"});

  ScenarioFile file;
  Scenario& sc = file.scenario;

  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) bad("\"name\" must be a string");
    sc.name = doc.at("name").get<std::string>();
  }
  if (doc.contains("algorithm")) {
    const json& a = doc.at("algorithm");
    if (!a.is_string()) bad("\"algorithm\" must be a string");
    std::string s = a.get<std::string>();
    if (s == "paxos")
      file.algorithm = AlgorithmKind::Paxos;
    else if (s == "raft")
      file.algorithm = AlgorithmKind::Raft;
    else if (s == "both")
      file.both = true;
    else
      bad("\"algorithm\" must be \"paxos\", \"raft\" or \"both\"");
  }
  sc.cluster.n = static_cast<uint32_t>(get_uint(doc, "servers", 3));
  sc.seed = get_uint(doc, "seed", 1);
  sc.duration = get_uint(doc, "duration", 10000);
  if (doc.contains("delay")) sc.delay = parse_delay(doc.at("delay"));
  if (doc.contains("timeouts")) sc.timeouts = parse_timeouts(doc.at("timeouts"));
  if (doc.contains("batch_cap"))
    sc.batch_cap = static_cast<uint32_t>(get_uint(doc, "batch_cap", 1));
  if (doc.contains("workload")) {
    const json& w = doc.at("workload");
    if (!w.is_array()) bad("\"workload\" must be an array");
    for (const json& item : w) {
      if (!item.is_object()) bad("each workload op must be an object");
      require_keys(item, "workload[]", {"at", "op"});
      if (!item.contains("at") || !item.contains("op"))
        bad("workload op needs \"at\" and \"op\"");
      if (!item.at("op").is_string()) bad("workload \"op\" must be a string");
      sc.workload.push_back(
          ClientOp{get_uint(item, "at", 0), item.at("op").get<std::string>()});
    }
  }
  if (doc.contains("faults")) {
    const json& fs = doc.at("faults");
    if (!fs.is_array()) bad("\"faults\" must be an array");
    for (const json& f : fs) sc.faults.push_back(parse_fault(f));
  }
  if (doc.contains("mutations")) {
    const json& ms = doc.at("mutations");
    if (!ms.is_array()) bad("\"mutations\" must be an array");
    for (const json& m : ms) {
      if (!m.is_string()) bad("each mutation must be a string id");
      auto id = mutation_from_id(m.get<std::string>());
      if (!id) bad("unknown mutation \"" + m.get<std::string>() + "\"");
      sc.mutations.enable(*id);
    }
  }

  sc.validate();
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace qsim
