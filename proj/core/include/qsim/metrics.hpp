// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qsim/trace.hpp"

namespace qsim {

struct RunMetrics {
  uint64_t messages_total = 0;
  // Log entries carried inside AppendEntries requests.
  uint64_t append_entries_shipped = 0;
  // Log entries carried inside vote responses; structurally zero for raft.
  uint64_t vote_entries_shipped = 0;
  // Deliveries of a (receiver, index, operation) triple beyond the first,
  // counted over AppendEntries payloads. Terms are ignored so a re-send of
  // a merged entry still counts as the duplicate it is.
  uint64_t duplicate_entry_transmissions = 0;
  uint64_t elections_started = 0;  // candidacies assumed
  uint64_t elections_won = 0;      // promotions to leader
  // Terms in which two or more servers campaigned and nobody won: the
  // votes were split. Structurally zero when terms are partitioned by
  // server id, because no term can have a second candidate.
  uint64_t split_vote_terms = 0;
  uint64_t committed_ops = 0;  // distinct operations applied anywhere
  // One sample per leaderless span: cluster start or leader failure until
  // the next promotion.
  std::vector<Tick> election_latencies;

  double latency_mean() const;
  double latency_variance() const;  // population variance
};

RunMetrics measure(const Trace& trace, uint32_t n);

// Flat key=value rows, one metric per line; byte-stable.
std::string format_metrics(const RunMetrics& m);

}  // namespace qsim
