#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "readgen/interaction.hpp"
#include "readgen/interpreter.hpp"

using namespace readgen;
using namespace readgen::test_support;

namespace {

// A test reaching `throw Underflow` in pop() with the given capacity, plus
// optional noise that minimization strips.
TestCase underflow(std::int32_t capacity, bool noise = false) {
  const auto& s = stack_subject();
  TestCase t;
  t.statements.push_back(Statement::of_int(capacity));
  t.statements.push_back(Statement::construct(ctor(s, 1), {Argument::reference(0)}));
  if (noise) t.statements.push_back(Statement::call(1, method(s, "size", 0), {}));
  t.statements.push_back(Statement::call(1, method(s, "pop", 0), {}));
  return t;
}

std::uint32_t underflow_target() { return line_target(stack_subject(), "throw Underflow"); }

PendingInteraction prepared(const std::vector<TestCase>& candidates, const ReadabilityArchive& readability = {},
                            const PreferenceArchive& preference = {}, InteractionConfig config = {}) {
  auto r = prepare_interaction(stack_subject(), underflow_target(), candidates, readability, preference, config,
                               kDefaultStepBudget);
  EXPECT_TRUE(r.pending) << to_string(r.abort);
  return r.pending ? *r.pending : PendingInteraction{};
}

}  // namespace

TEST(Interaction, CandidateBudgetExamples) {
  EXPECT_EQ(candidate_budget(50, 0.08), 4u);
  EXPECT_EQ(candidate_budget(10, 0.05), 2u);
  EXPECT_EQ(candidate_budget(50, 0.05), 2u);
  EXPECT_EQ(candidate_budget(100, 0.08), 8u);
  EXPECT_EQ(candidate_budget(0, 0.5), 2u);
}

TEST(Interaction, MomentGating) {
  InteractionConfig cfg;
  EXPECT_EQ(cfg.frequency(1000), 200u);
  EXPECT_EQ(cfg.frequency(3), 1u);
  EXPECT_TRUE(should_open_moment(200, 0.5, 0, cfg, 1000));
  EXPECT_FALSE(should_open_moment(201, 0.9, 0, cfg, 1000));
  EXPECT_FALSE(should_open_moment(200, 0.49, 0, cfg, 1000));
  EXPECT_FALSE(should_open_moment(200, 0.9, 10, cfg, 1000));
  EXPECT_FALSE(should_open_moment(0, 1.0, 0, cfg, 1000));
  cfg.revise_frequency = 4;
  EXPECT_FALSE(should_open_moment(8, 1.0, 0, cfg, 1000));  // below the minimum generation
  EXPECT_TRUE(should_open_moment(12, 1.0, 0, cfg, 1000));
  cfg.max_times = 0;
  EXPECT_FALSE(should_open_moment(12, 1.0, 0, cfg, 1000));
}

TEST(Interaction, ConfigValidation) {
  InteractionConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.readability_threshold = 11;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.percentage_to_revise = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_targets_interaction_moment = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Interaction, SelectTargetPrefersRecentAndSkipsUsedRoutines) {
  const auto& s = stack_subject();
  CoverageArchive archive(s.targets().size());
  const TestCase t = underflow(1);
  const auto push_line = line_target(s, "items[top] = value;");
  const auto pop_throw = underflow_target();
  const auto ctor_line = line_target(s, "items = new int[capacity];");
  archive.offer(ctor_line, t, 0);
  archive.offer(push_line, t, 3);
  archive.offer(pop_throw, t, 5);

  EXPECT_EQ(select_target(s, archive, {}, {}), pop_throw);
  EXPECT_EQ(select_target(s, archive, {}, {pop_throw}), push_line);
  EXPECT_EQ(select_target(s, archive, {s.target(pop_throw).routine}, {}), push_line);
  EXPECT_EQ(select_target(s, archive, {s.target(pop_throw).routine, s.target(push_line).routine}, {}), ctor_line);
  EXPECT_FALSE(select_target(s, archive, {}, {pop_throw, push_line, ctor_line}));
}

TEST(Interaction, SelectCandidatesStartsWithTheArchivedTest) {
  const auto& s = stack_subject();
  const auto target = underflow_target();
  CoverageArchive archive(s.targets().size());
  std::vector<Individual> population;
  for (std::int32_t c = 1; c <= 8; ++c) {
    Individual ind;
    ind.test = c % 2 ? underflow(c) : underflow(c, true);
    ind.fitness = target_distances(s, execute(s, ind.test));
    population.push_back(ind);
  }
  Individual miss;
  miss.test = TestCase{{Statement::of_int(1), Statement::construct(ctor(s, 1), {Argument::reference(0)})}};
  miss.fitness = target_distances(s, execute(s, miss.test));
  population.push_back(miss);

  Rng rng = make_rng(1, 1);
  EXPECT_TRUE(select_candidates(target, population, archive, 4, rng).empty());

  archive.offer(target, underflow(42), 7);
  for (std::size_t budget : {std::size_t{1}, std::size_t{2}, std::size_t{4}, std::size_t{20}}) {
    const auto out = select_candidates(target, population, archive, budget, rng);
    ASSERT_FALSE(out.empty());
    EXPECT_EQ(out.front(), underflow(42));
    EXPECT_EQ(out.size(), std::min<std::size_t>(budget, 9));
    for (const auto& t : out) EXPECT_TRUE(covers(s, execute(s, t), s.target(target)));
  }
}

TEST(Interaction, PrepareDeduplicatesMinimizations) {
  const auto r = prepare_interaction(stack_subject(), underflow_target(), {underflow(2), underflow(2, true)}, {}, {},
                                     {}, kDefaultStepBudget);
  EXPECT_FALSE(r.pending);
  EXPECT_EQ(r.abort, PrepareAbort::kTooFewCandidates);
  EXPECT_EQ(r.distinct_minimizations, 1u);

  const auto p = prepared({underflow(2), underflow(3, true), underflow(2, true)});
  EXPECT_EQ(p.candidates_selected, 3u);
  EXPECT_EQ(p.distinct_minimizations, 2u);
  ASSERT_EQ(p.unseen.size(), 2u);
  EXPECT_EQ(p.unseen[0].id, "c0");
  EXPECT_EQ(p.unseen[1].id, "c1");
  EXPECT_TRUE(p.references.empty());
  EXPECT_FALSE(p.incumbent);
  EXPECT_EQ(p.target_id, stack_subject().target(underflow_target()).id);
  EXPECT_NE(p.target_description.find("pop"), std::string::npos);
  for (const auto& c : p.unseen) EXPECT_LE(c.test.assertions.size(), 4u);
}

TEST(Interaction, SeenMinimizationsBecomeReferences) {
  const auto first = prepared({underflow(2), underflow(3)});
  ReadabilityArchive readability;
  readability.record(first.unseen[0].test.canonical_key, 6, 1, first.target, false);

  const auto second = prepared({underflow(2), underflow(3), underflow(4)}, readability);
  EXPECT_EQ(second.unseen.size(), 2u);
  ASSERT_EQ(second.references.size(), 1u);
  EXPECT_EQ(second.references[0].id, "r0");
  EXPECT_EQ(second.references[0].score, 6);
  EXPECT_EQ(second.archive_hits, 1u);

  InteractionConfig revisit;
  revisit.revisit_candidates = true;
  const auto third = prepared({underflow(2), underflow(3), underflow(4)}, readability, {}, revisit);
  EXPECT_EQ(third.unseen.size(), 3u);
  EXPECT_TRUE(third.references.empty());
}

TEST(Interaction, AllSeenAborts) {
  const auto first = prepared({underflow(2), underflow(3)});
  ReadabilityArchive readability;
  for (const auto& c : first.unseen) readability.record(c.test.canonical_key, 5, 1, first.target, false);
  const auto r = prepare_interaction(stack_subject(), underflow_target(), {underflow(2), underflow(3)}, readability,
                                     {}, {}, kDefaultStepBudget);
  EXPECT_EQ(r.abort, PrepareAbort::kAllSeen);
  EXPECT_EQ(r.archive_hits, 2u);
}

TEST(Interaction, IncumbentAllowsASingleCandidate) {
  PreferenceArchive preference;
  const auto seed = prepared({underflow(2), underflow(3)});
  preference.store(underflow_target(), {seed.unseen[0].test, 7, 1, 10});
  const auto p = prepared({underflow(9)}, {}, preference);
  ASSERT_TRUE(p.incumbent);
  EXPECT_EQ(p.incumbent->score, 7);
  EXPECT_EQ(p.unseen.size(), 1u);
}

TEST(Interaction, ScoreValidation) {
  const auto p = prepared({underflow(2), underflow(3)});
  EXPECT_NO_THROW(validate_scores(p, {{"c0", 0}, {"c1", 10}}));
  EXPECT_THROW(validate_scores(p, {{"c0", 3}}), ScoreValidationError);
  EXPECT_THROW(validate_scores(p, {{"c0", 3}, {"c1", 11}}), ScoreValidationError);
  EXPECT_THROW(validate_scores(p, {{"c0", -1}, {"c1", 1}}), ScoreValidationError);
  EXPECT_THROW(validate_scores(p, {{"c0", 3}, {"c1", 4}, {"r0", 1}}), ScoreValidationError);
}

TEST(Interaction, BelowThresholdStoresNothingButRecordsScores) {
  auto p = prepared({underflow(2), underflow(3)});
  p.id = 1;
  PreferenceArchive preference;
  ReadabilityArchive readability;
  Rng rng = make_rng(0, 1);
  const auto out = apply_scores(p, {{"c0", 2}, {"c1", 1}}, {}, preference, readability, rng);
  EXPECT_EQ(out.kind, ApplyOutcome::Kind::kBelowThreshold);
  EXPECT_EQ(out.winner, "c0");
  EXPECT_TRUE(preference.empty());
  EXPECT_EQ(readability.size(), 2u);
  EXPECT_EQ(readability.find(p.unseen[1].test.canonical_key)->score, 1);
}

TEST(Interaction, ThresholdIsInclusive) {
  auto p = prepared({underflow(2), underflow(3)});
  PreferenceArchive preference;
  ReadabilityArchive readability;
  Rng rng = make_rng(0, 1);
  const auto out = apply_scores(p, {{"c0", 1}, {"c1", 3}}, {}, preference, readability, rng);
  EXPECT_EQ(out.kind, ApplyOutcome::Kind::kStored);
  EXPECT_EQ(preference.find(p.target)->test.canonical_key, p.unseen[1].test.canonical_key);
  EXPECT_EQ(preference.find(p.target)->score, 3);
}

TEST(Interaction, IncumbentReplacedOnlyByBetterScoreOrShorterTie) {
  PreferenceArchive preference;
  ReadabilityArchive readability;
  Rng rng = make_rng(0, 1);
  auto p1 = prepared({underflow(2), underflow(3)});
  p1.id = 1;
  apply_scores(p1, {{"c0", 6}, {"c1", 4}}, {}, preference, readability, rng);
  ASSERT_EQ(preference.find(p1.target)->score, 6);

  auto p2 = prepared({underflow(4), underflow(5)}, readability, preference);
  p2.id = 2;
  auto out = apply_scores(p2, {{"c0", 6}, {"c1", 5}}, {}, preference, readability, rng);
  EXPECT_EQ(out.kind, ApplyOutcome::Kind::kIncumbentKept);  // same score, same length
  EXPECT_EQ(preference.find(p1.target)->interaction, 1u);

  auto p3 = prepared({underflow(6), underflow(7)}, readability, preference);
  p3.id = 3;
  out = apply_scores(p3, {{"c0", 2}, {"c1", 8}}, {}, preference, readability, rng);
  EXPECT_EQ(out.kind, ApplyOutcome::Kind::kReplaced);
  EXPECT_EQ(preference.find(p1.target)->score, 8);
  EXPECT_EQ(preference.find(p1.target)->interaction, 3u);
}

TEST(Interaction, TiesPickAmongTheBest) {
  std::set<std::string> winners;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto p = prepared({underflow(2), underflow(3), underflow(4)});
    PreferenceArchive preference;
    ReadabilityArchive readability;
    Rng rng = make_rng(seed, 1);
    const auto out = apply_scores(p, {{"c0", 7}, {"c1", 2}, {"c2", 7}}, {}, preference, readability, rng);
    EXPECT_EQ(out.tied, 2u);
    EXPECT_NE(out.winner, "c1");
    winners.insert(out.winner);
  }
  EXPECT_EQ(winners, (std::set<std::string>{"c0", "c2"}));
}

TEST(Interaction, ReadabilityArchiveIsWriteOnce) {
  ReadabilityArchive readability;
  EXPECT_TRUE(readability.record("k", 4, 1, 0, false));
  EXPECT_FALSE(readability.record("k", 9, 2, 0, false));
  EXPECT_EQ(readability.find("k")->score, 4);
  EXPECT_TRUE(readability.record("k", 9, 3, 0, true));
  EXPECT_EQ(readability.find("k")->score, 9);
  EXPECT_EQ(readability.find("k")->first_interaction, 1u);
  EXPECT_EQ(readability.find("k")->last_interaction, 3u);
}

TEST(Interaction, PreferenceScoresNeverDecrease) {
  PreferenceArchive preference;
  MinimizedTest m;
  preference.store(0, {m, 5, 1, 0});
  preference.store(0, {m, 5, 2, 0});
  EXPECT_THROW(preference.store(0, {m, 4, 3, 0}), std::logic_error);
  EXPECT_EQ(preference.find(0)->interaction, 2u);
}
