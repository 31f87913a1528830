// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsim {

using ServerId = uint32_t;
using Term = uint64_t;
using LogIndex = uint64_t;  // 1-based; 0 means "before the first entry"
using Tick = uint64_t;

// A client operation. Uniqueness of payloads is the workload's job, not ours.
using Operation = std::string;

// Raised when a step reaches a state the protocol rules out. These are
// assertions about our own bookkeeping, not recoverable runtime errors.
struct InternalFault : std::logic_error {
  explicit InternalFault(const std::string& what) : std::logic_error(what) {}
};

// Raised for malformed scenarios, bad CLI input, and config contradictions.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ClusterConfig {
  uint32_t n = 3;  // servers are ids 0..n-1

  uint32_t majority() const { return n / 2 + 1; }

  void validate() const {
    if (n < 1) throw ConfigError("cluster size must be at least 1");
  }

  bool operator==(const ClusterConfig&) const = default;
};

struct LogEntry {
  Operation op;
  Term term = 0;

  bool operator==(const LogEntry&) const = default;
  // Ordered by term first so "greatest term" scans are set lookups.
  std::strong_ordering operator<=>(const LogEntry& o) const {
    if (auto c = term <=> o.term; c != std::strong_ordering::equal) return c;
    return op <=> o.op;
  }
};

// Replicated log with 1-based indexing. Index arithmetic stays in one place
// so off-by-one bugs cannot spread.
class Log {
 public:
  LogIndex last_index() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // term_at(0) == 0 by convention: the empty prefix matches everything.
  Term term_at(LogIndex i) const {
    if (i == 0) return 0;
    return at(i).term;
  }

  const LogEntry& at(LogIndex i) const {
    if (i == 0 || i > entries_.size())
      throw InternalFault("log index " + std::to_string(i) + " out of range");
    return entries_[i - 1];
  }

  void append(LogEntry e) { entries_.push_back(std::move(e)); }

  // Removes entries at indices >= i. truncate_from(1) clears the log.
  void truncate_from(LogIndex i) {
    if (i == 0) throw InternalFault("cannot truncate from index 0");
    if (i <= entries_.size()) entries_.resize(i - 1);
  }

  // Entries at indices [from, to], clamped to the log's bounds.
  std::vector<LogEntry> slice(LogIndex from, LogIndex to) const {
    std::vector<LogEntry> out;
    if (from == 0) from = 1;
    if (to > entries_.size()) to = entries_.size();
    for (LogIndex i = from; i <= to; ++i) out.push_back(entries_[i - 1]);
    return out;
  }

  const std::vector<LogEntry>& entries() const { return entries_; }

  bool operator==(const Log&) const = default;

 private:
  std::vector<LogEntry> entries_;
};

}  // namespace qsim
