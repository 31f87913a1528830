// Copyright 2026 The quorumsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "helpers.hpp"
#include "qsim/algorithm.hpp"

using namespace qsim;
using namespace qsim::test;

TEST_CASE("raft elections bump the term by one and self-vote") {
  RaftAlgorithm alg({3});
  NodeState st = follower(1, 4, make_log({{"a", 2}}));
  StepResult r = alg.step(st, TimerFire{TimerKind::Election});
  CHECK(r.state.current_term == 5);
  CHECK(r.state.voted_for == 1);
  CHECK(r.state.role == Role::Candidate);
  auto& cand = std::get<RaftCandidateState>(r.state.candidate);
  CHECK(cand.votes_received == std::set<ServerId>{1});

  auto reqs = broadcasts_of<RaftVoteRequest>(r);
  REQUIRE(reqs.size() == 1);
  CHECK(reqs[0] == RaftVoteRequest{5, 1, 1, 2});
  CHECK(role_changed_to(r, Role::Candidate));
  CHECK(timer_reset(r, TimerKind::Election));
  REQUIRE(persisted(r));
  CHECK(persisted(r)->current_term == 5);
  CHECK(persisted(r)->voted_for == 1);
  CHECK(first_effect_at<Persist>(r) < first_effect_at<BroadcastMsg>(r));

  // A timed-out candidate starts over in the next term.
  StepResult r2 = alg.step(r.state, TimerFire{TimerKind::Election});
  CHECK(r2.state.current_term == 6);
  CHECK(r2.state.role == Role::Candidate);
}

TEST_CASE("a cluster of one elects itself on the spot") {
  RaftAlgorithm alg({1});
  StepResult r = alg.step(follower(0, 0), TimerFire{TimerKind::Election});
  CHECK(r.state.role == Role::Leader);
  CHECK(r.state.current_term == 1);
  CHECK(role_changed_to(r, Role::Candidate));
  CHECK(role_changed_to(r, Role::Leader));
}

TEST_CASE("the up-to-date check compares last term, then length") {
  NodeState own = follower(0, 7, make_log({{"a", 1}, {"b", 2}}));
  // Higher last term wins regardless of length.
  CHECK(RaftAlgorithm::up_to_date(1, 3, own));
  // Lower last term loses regardless of length.
  CHECK(!RaftAlgorithm::up_to_date(9, 1, own));
  // Equal terms: longer or equal length wins.
  CHECK(RaftAlgorithm::up_to_date(2, 2, own));
  CHECK(RaftAlgorithm::up_to_date(3, 2, own));
  CHECK(!RaftAlgorithm::up_to_date(1, 2, own));
  // Empty logs are mutually up to date.
  NodeState blank = follower(0, 0);
  CHECK(RaftAlgorithm::up_to_date(0, 0, blank));
}

TEST_CASE("vote requests are granted once per term to a fresh-enough log") {
  RaftAlgorithm alg({3});

  SUBCASE("a fresh candidate in a newer term gets the vote") {
    NodeState st = follower(2, 3);
    StepResult r = alg.step(st, Deliver{0, RaftVoteRequest{4, 0, 0, 0}});
    CHECK(r.state.current_term == 4);
    CHECK(r.state.voted_for == 0);
    auto resps = sends_of<RaftVoteResponse>(r);
    REQUIRE(resps.size() == 1);
    CHECK(resps[0].second == RaftVoteResponse{4, true});
    CHECK(timer_reset(r, TimerKind::Election));
  }

  SUBCASE("the second candidate of the term is refused") {
    NodeState st = follower(2, 4);
    st.voted_for = 0;
    StepResult r = alg.step(st, Deliver{1, RaftVoteRequest{4, 1, 0, 0}});
    CHECK(r.state.voted_for == 0);
    auto resps = sends_of<RaftVoteResponse>(r);
    REQUIRE(resps.size() == 1);
    CHECK(resps[0].second == RaftVoteResponse{4, false});
    CHECK(!timer_reset(r, TimerKind::Election));
  }

  SUBCASE("repeat requests from the chosen candidate stay granted") {
    NodeState st = follower(2, 4);
    st.voted_for = 0;
    StepResult r = alg.step(st, Deliver{0, RaftVoteRequest{4, 0, 0, 0}});
    auto resps = sends_of<RaftVoteResponse>(r);
    REQUIRE(resps.size() == 1);
    CHECK(resps[0].second.vote_granted);
    CHECK(!persisted(r));  // nothing durable changed
  }

  SUBCASE("a stale-term candidate is refused without adoption") {
    NodeState st = follower(2, 5);
    StepResult r = alg.step(st, Deliver{0, RaftVoteRequest{3, 0, 0, 0}});
    CHECK(r.state.current_term == 5);
    auto resps = sends_of<RaftVoteResponse>(r);
    REQUIRE(resps.size() == 1);
    CHECK(resps[0].second == RaftVoteResponse{5, false});
  }

  SUBCASE("a stale-log candidate is refused but its term sticks") {
    NodeState st = follower(2, 5, make_log({{"a", 5}}));
    StepResult r = alg.step(st, Deliver{0, RaftVoteRequest{6, 0, 0, 0}});
    CHECK(r.state.current_term == 6);
    CHECK(!r.state.voted_for);  // the new term's vote is still free
    auto resps = sends_of<RaftVoteResponse>(r);
    REQUIRE(resps.size() == 1);
    CHECK(resps[0].second == RaftVoteResponse{6, false});
    REQUIRE(persisted(r));
    CHECK(persisted(r)->current_term == 6);
    CHECK(!persisted(r)->voted_for);
  }
}

TEST_CASE("term adoption frees the vote for the new term") {
  RaftAlgorithm alg({3});
  NodeState st = follower(2, 4, make_log({{"a", 4}}));
  st.voted_for = 0;
  // Candidate 1's log is stale, so the vote is denied, but the term advanced
  // and the stale vote was cleared with it.
  StepResult r1 = alg.step(st, Deliver{1, RaftVoteRequest{5, 1, 0, 0}});
  CHECK(r1.state.current_term == 5);
  CHECK(!r1.state.voted_for);
  // A fresh-enough candidate in term 5 can now claim it.
  StepResult r2 = alg.step(r1.state, Deliver{0, RaftVoteRequest{5, 0, 1, 4}});
  CHECK(r2.state.voted_for == 0);
  CHECK(sends_of<RaftVoteResponse>(r2)[0].second.vote_granted);
}

TEST_CASE("candidates promote on a majority of grants") {
  RaftAlgorithm alg({3});
  NodeState st = follower(1, 4, make_log({{"a", 2}}));
  NodeState cand = alg.step(st, TimerFire{TimerKind::Election}).state;

  SUBCASE("one grant completes the majority of three") {
    StepResult r = alg.step(cand, Deliver{2, RaftVoteResponse{5, true}});
    CHECK(r.state.role == Role::Leader);
    REQUIRE(r.state.leader);
    CHECK(r.state.leader->next_index.at(0) == 2);  // last index + 1
    CHECK(r.state.leader->match_index.at(1) == 1);  // own log
    CHECK(r.state.leader->match_index.at(0) == 0);
    CHECK(role_changed_to(r, Role::Leader));
    CHECK(timer_reset(r, TimerKind::Heartbeat));
    // The victory heartbeat goes out immediately.
    auto reqs = sends_of<AppendEntriesRequest>(r);
    REQUIRE(reqs.size() == 2);
    CHECK(reqs[0].second.prev_log_index == 1);
    CHECK(reqs[0].second.entries.empty());
  }

  SUBCASE("denials are not votes") {
    StepResult r = alg.step(cand, Deliver{2, RaftVoteResponse{5, false}});
    CHECK(r.state.role == Role::Candidate);
    CHECK(r.effects.empty());
  }

  SUBCASE("grants from dead terms are ignored") {
    StepResult r = alg.step(cand, Deliver{2, RaftVoteResponse{4, true}});
    CHECK(r.state.role == Role::Candidate);
    CHECK(r.effects.empty());
  }

  SUBCASE("a response from a higher term ends the candidacy") {
    StepResult r = alg.step(cand, Deliver{2, RaftVoteResponse{6, false}});
    CHECK(r.state.role == Role::Follower);
    CHECK(r.state.current_term == 6);
  }

  SUBCASE("duplicate grants from one voter count once") {
    RaftAlgorithm five({5});
    NodeState st5 = follower(1, 0);
    NodeState c5 = five.step(st5, TimerFire{TimerKind::Election}).state;
    StepResult r1 = five.step(c5, Deliver{2, RaftVoteResponse{1, true}});
    CHECK(r1.state.role == Role::Candidate);
    StepResult r2 =
        five.step(r1.state, Deliver{2, RaftVoteResponse{1, true}});
    CHECK(r2.state.role == Role::Candidate);  // still 2 of 5
    StepResult r3 =
        five.step(r2.state, Deliver{3, RaftVoteResponse{1, true}});
    CHECK(r3.state.role == Role::Leader);
  }
}

TEST_CASE("a candidate yields to the leader that won its term") {
  RaftAlgorithm alg({3});
  NodeState cand =
      alg.step(follower(1, 0), TimerFire{TimerKind::Election}).state;
  REQUIRE(cand.current_term == 1);
  AppendEntriesRequest req;
  req.term = 1;
  req.leader_id = 0;
  req.entries = {{"a", 1}};
  StepResult r = alg.step(cand, Deliver{0, req});
  CHECK(r.state.role == Role::Follower);
  CHECK(r.state.log == make_log({{"a", 1}}));
  auto resps = sends_of<AppendEntriesResponse>(r);
  REQUIRE(resps.size() == 1);
  CHECK(resps[0].second.success);
}

TEST_CASE("the commit guard only counts entries from the current term") {
  RaftAlgorithm alg({3});
  // A majority holds index 1, but the entry is from an older term, so a
  // term-2 leader must not commit it until a term-2 entry covers it.
  NodeState st = leader(0, 2, make_log({{"a", 1}}), 3);
  StepResult r = alg.step(st, Deliver{1, AppendEntriesResponse{2, true, 1}});
  CHECK(r.state.commit_index == 0);
  CHECK(applies_of(r).empty());

  // Appending and replicating a term-2 entry commits both at once.
  NodeState st2 = r.state;
  StepResult r2 = alg.step(st2, ClientRequest{"b"});
  StepResult r3 =
      alg.step(r2.state, Deliver{1, AppendEntriesResponse{2, true, 2}});
  CHECK(r3.state.commit_index == 2);
  CHECK(applies_of(r3).size() == 2);
}

TEST_CASE("disabling the commit guard commits foreign-term entries") {
  Algorithm::Options opts;
  opts.mutations.enable(Mutation::RaftNoCommitTermGuard);
  RaftAlgorithm alg({3}, opts);
  NodeState st = leader(0, 2, make_log({{"a", 1}}), 3);
  StepResult r = alg.step(st, Deliver{1, AppendEntriesResponse{2, true, 1}});
  CHECK(r.state.commit_index == 1);
}

TEST_CASE("disabling the voted-for rule lets one voter back two candidates") {
  Algorithm::Options opts;
  opts.mutations.enable(Mutation::RaftNoVotedFor);
  RaftAlgorithm alg({3}, opts);
  NodeState st = follower(2, 4);
  StepResult r1 = alg.step(st, Deliver{0, RaftVoteRequest{5, 0, 0, 0}});
  CHECK(sends_of<RaftVoteResponse>(r1)[0].second.vote_granted);
  StepResult r2 =
      alg.step(r1.state, Deliver{1, RaftVoteRequest{5, 1, 0, 0}});
  CHECK(sends_of<RaftVoteResponse>(r2)[0].second.vote_granted);
}

TEST_CASE("disabling the up-to-date check elects stale logs") {
  Algorithm::Options opts;
  opts.mutations.enable(Mutation::RaftNoUpToDateCheck);
  RaftAlgorithm alg({3}, opts);
  NodeState st = follower(2, 4, make_log({{"a", 4}}));
  StepResult r = alg.step(st, Deliver{0, RaftVoteRequest{5, 0, 0, 0}});
  CHECK(sends_of<RaftVoteResponse>(r)[0].second.vote_granted);
}
