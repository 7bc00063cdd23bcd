#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "readgen/scoring.hpp"

using namespace readgen;
using namespace readgen::test_support;

namespace {

TestCase distinct_ints(std::size_t n, std::int32_t first = 1) {
  TestCase t;
  for (std::size_t i = 0; i < n; ++i) t.statements.push_back(Statement::of_int(first + static_cast<std::int32_t>(i)));
  return t;
}

PendingInteraction pending_with(std::size_t unseen, std::size_t id = 1) {
  PendingInteraction p;
  p.id = id;
  p.target_description = "Target: L1\n";
  for (std::size_t i = 0; i < unseen; ++i) {
    Candidate c;
    c.id = "c" + std::to_string(i);
    c.test.test = distinct_ints(i + 1);
    c.test.canonical_key = "key" + std::to_string(i);
    c.test.rendered = "test test {\n}\n";
    p.unseen.push_back(c);
  }
  return p;
}

}  // namespace

TEST(Scoring, HeuristicExamples) {
  EXPECT_EQ(heuristic_score(distinct_ints(3), 10), 10);
  TestCase eight = distinct_ints(7);
  eight.statements.push_back(Statement::of_int(2181));
  EXPECT_EQ(heuristic_score(eight, 10), 7);
  EXPECT_EQ(heuristic_score(distinct_ints(40), 10), 0);
}

TEST(Scoring, HeuristicPenalties) {
  EXPECT_EQ(heuristic_score(distinct_ints(4), 10), 10);
  EXPECT_EQ(heuristic_score(distinct_ints(5), 10), 10);
  EXPECT_EQ(heuristic_score(distinct_ints(6), 10), 9);

  TestCase repeated = distinct_ints(2);
  repeated.statements.push_back(repeated.statements[0]);
  repeated.statements.push_back(repeated.statements[0]);
  EXPECT_EQ(heuristic_score(repeated, 10), 8);

  TestCase args;
  args.statements.push_back(Statement::of_array({500, -101, 100}));
  args.statements.push_back(Statement::construct(0, {Argument::of_int(-1000), Argument::of_int(7)}));
  EXPECT_EQ(heuristic_score(args, 10), 7);

  HeuristicWeights w;
  w.bias = -3;
  EXPECT_EQ(heuristic_score(distinct_ints(1), 10, w), 7);
  w.bias = 50;
  EXPECT_EQ(heuristic_score(distinct_ints(40), 10, w), 10);
}

TEST(Scoring, HeuristicScorerScoresEveryUnseenCandidate) {
  HeuristicScorer scorer;
  const auto p = pending_with(3);
  const auto scores = scorer.score(p);
  EXPECT_EQ(scores.size(), 3u);
  EXPECT_NO_THROW(validate_scores(p, scores));
}

TEST(Scoring, ScriptedSequenceExhaustionClosesTheChannel) {
  ScriptedScorer scorer(std::vector<std::vector<int>>{{3, 4}, {9}});
  const auto p = pending_with(2);
  EXPECT_EQ(scorer.score(p), (ScoreMap{{"c0", 3}, {"c1", 4}}));
  EXPECT_EQ(scorer.score(p), (ScoreMap{{"c0", 9}, {"c1", 9}}));
  try {
    scorer.score(p);
    FAIL();
  } catch (const ScorerError& e) {
    EXPECT_TRUE(e.channel_closed());
  }
  EXPECT_EQ(scorer.calls(), 3u);
}

TEST(Scoring, ConsoleRepromptsOnInvalidInput) {
  std::istringstream in("seven\n11\n  7 \n-1\n3x\n0\n");
  std::ostringstream out;
  ConsoleScorer scorer(in, out);
  const auto scores = scorer.score(pending_with(2));
  EXPECT_EQ(scores, (ScoreMap{{"c0", 7}, {"c1", 0}}));
  const std::string text = out.str();
  std::size_t reprompts = 0;
  for (auto pos = text.find("Please enter"); pos != std::string::npos; pos = text.find("Please enter", pos + 1)) {
    ++reprompts;
  }
  EXPECT_EQ(reprompts, 4u);
  EXPECT_NE(text.find("Candidate c1 (2 statements)"), std::string::npos);
}

TEST(Scoring, ConsoleEofClosesTheChannel) {
  std::istringstream in("5\n");
  std::ostringstream out;
  ConsoleScorer scorer(in, out);
  try {
    scorer.score(pending_with(2));
    FAIL();
  } catch (const ScorerError& e) {
    EXPECT_TRUE(e.channel_closed());
  }
}

TEST(Scoring, ReplayReturnsRecordedScoresInOrder) {
  std::vector<nlohmann::json> log = {
      {{"type", "run-started"}},
      {{"type", "interaction"}, {"interaction", 1},
       {"unseen", {{{"id", "c0"}, {"key", "key0"}, {"score", 4}}, {{"id", "c1"}, {"key", "key1"}, {"score", 8}}}}},
      {{"type", "scorer-failed"}, {"interaction", 2}, {"channel_closed", false}},
      {{"type", "interaction"}, {"interaction", 3}, {"unseen", {{{"id", "c0"}, {"key", "key0"}, {"score", 1}}}}},
  };
  ReplayScorer scorer(log);
  EXPECT_EQ(scorer.remaining(), 3u);
  EXPECT_EQ(scorer.score(pending_with(2, 1)), (ScoreMap{{"c0", 4}, {"c1", 8}}));
  try {
    scorer.score(pending_with(1, 2));
    FAIL();
  } catch (const ScorerError& e) {
    EXPECT_FALSE(e.channel_closed());
  }
  EXPECT_EQ(scorer.score(pending_with(1, 3)), (ScoreMap{{"c0", 1}}));
  try {
    scorer.score(pending_with(1, 4));
    FAIL();
  } catch (const ScorerError& e) {
    EXPECT_TRUE(e.channel_closed());
    EXPECT_NE(std::string(e.what()).find("exhausted"), std::string::npos);
  }
}

TEST(Scoring, ReplayDetectsMismatches) {
  std::vector<nlohmann::json> log = {
      {{"type", "interaction"}, {"interaction", 1}, {"unseen", {{{"id", "c0"}, {"key", "other"}, {"score", 4}}}}},
      {{"type", "interaction"}, {"interaction", 2}, {"unseen", {{{"id", "c0"}, {"key", "key0"}, {"score", 4}}}}},
  };
  ReplayScorer scorer(log);
  EXPECT_THROW(scorer.score(pending_with(1)), ScorerError);
  try {
    scorer.score(pending_with(2));
    FAIL();
  } catch (const ScorerError& e) {
    EXPECT_TRUE(e.channel_closed());
    EXPECT_NE(std::string(e.what()).find("mismatch"), std::string::npos);
  }
}

TEST(Scoring, RenderPendingShowsEveryPart) {
  auto p = pending_with(1);
  Candidate ref;
  ref.id = "r0";
  ref.score = 6;
  ref.test.rendered = "test ref {\n}\n";
  p.references.push_back(ref);
  Candidate inc = ref;
  inc.id = "incumbent";
  inc.score = 9;
  p.incumbent = inc;
  const auto text = render_pending(p);
  EXPECT_NE(text.find("Target: L1"), std::string::npos);
  EXPECT_NE(text.find("Already scored 6 [r0]"), std::string::npos);
  EXPECT_NE(text.find("Current preferred test, score 9"), std::string::npos);
  EXPECT_NE(text.find("Candidate c0"), std::string::npos);
}
