#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "readgen/minimization.hpp"
#include "readgen/suite.hpp"

using namespace readgen;
using namespace readgen::test_support;

namespace {

SuiteTest synthetic(std::uint32_t target, int score, std::size_t length, std::set<std::uint32_t> covers) {
  SuiteTest t;
  t.test.target = target;
  t.test.test.statements.assign(length, Statement::of_int(static_cast<std::int32_t>(target)));
  t.score = score;
  t.covers = std::move(covers);
  return t;
}

std::vector<std::uint32_t> targets_of(const std::vector<SuiteTest>& tests) {
  std::vector<std::uint32_t> out;
  for (const auto& t : tests) out.push_back(t.test.target);
  return out;
}

std::set<std::uint32_t> union_of(const std::vector<SuiteTest>& tests, std::size_t skip = std::size_t(-1)) {
  std::set<std::uint32_t> out;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (i != skip) out.insert(tests[i].covers.begin(), tests[i].covers.end());
  }
  return out;
}

// Recomputes redundancy from scratch after every removal.
std::vector<SuiteTest> oracle_remove(std::vector<SuiteTest> tests) {
  std::vector<std::size_t> order(tests.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_tuple(tests[a].score, -static_cast<long>(tests[a].test.test.length()),
                           -static_cast<long>(tests[a].test.target)) <
           std::make_tuple(tests[b].score, -static_cast<long>(tests[b].test.test.length()),
                           -static_cast<long>(tests[b].test.target));
  });
  std::vector<bool> alive(tests.size(), true);
  for (std::size_t i : order) {
    std::set<std::uint32_t> others;
    for (std::size_t j = 0; j < tests.size(); ++j) {
      if (j != i && alive[j]) others.insert(tests[j].covers.begin(), tests[j].covers.end());
    }
    if (std::includes(others.begin(), others.end(), tests[i].covers.begin(), tests[i].covers.end())) alive[i] = false;
  }
  std::vector<SuiteTest> out;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (alive[i]) out.push_back(tests[i]);
  }
  return out;
}

}  // namespace

TEST(Suite, PreferenceTestSubsumesCoverageOnlyTest) {
  std::vector<SuiteTest> tests = {synthetic(1, 7, 3, {1, 2}), synthetic(2, kCoverageOnlyScore, 2, {2})};
  remove_redundant(tests);
  EXPECT_EQ(targets_of(tests), std::vector<std::uint32_t>{1});
}

TEST(Suite, LowerScoredTestGoesFirst) {
  std::vector<SuiteTest> tests = {synthetic(1, 4, 3, {1, 2}), synthetic(2, 8, 3, {1, 2})};
  remove_redundant(tests);
  EXPECT_EQ(targets_of(tests), std::vector<std::uint32_t>{2});
}

TEST(Suite, TieBreaksOnLengthThenTarget) {
  std::vector<SuiteTest> by_length = {synthetic(1, 5, 2, {1}), synthetic(2, 5, 6, {1})};
  remove_redundant(by_length);
  EXPECT_EQ(targets_of(by_length), std::vector<std::uint32_t>{1});

  std::vector<SuiteTest> by_target = {synthetic(1, 5, 2, {1}), synthetic(2, 5, 2, {1})};
  remove_redundant(by_target);
  EXPECT_EQ(targets_of(by_target), std::vector<std::uint32_t>{1});
}

TEST(Suite, RedundancyRemovalMatchesOracle) {
  Rng rng = make_rng(31);
  for (int round = 0; round < 300; ++round) {
    std::vector<SuiteTest> tests;
    const std::size_t n = 1 + uniform_index(rng, 8);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::set<std::uint32_t> covers;
      const std::size_t k = 1 + uniform_index(rng, 4);
      for (std::size_t c = 0; c < k; ++c) covers.insert(static_cast<std::uint32_t>(uniform_index(rng, 8)));
      const int score = bernoulli(rng, 0.5) ? kCoverageOnlyScore : static_cast<int>(uniform_index(rng, 11));
      tests.push_back(synthetic(i, score, 1 + uniform_index(rng, 5), covers));
    }
    const auto before = union_of(tests);
    auto want = oracle_remove(tests);
    remove_redundant(tests);
    EXPECT_EQ(targets_of(tests), targets_of(want)) << "round " << round;
    EXPECT_EQ(union_of(tests), before);
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const auto others = union_of(tests, i);
      EXPECT_FALSE(std::includes(others.begin(), others.end(), tests[i].covers.begin(), tests[i].covers.end()));
    }
  }
}

TEST(Suite, AssembledSuiteKeepsArchiveCoverage) {
  const auto& s = array_int_list();
  SearchConfig cfg;
  cfg.population_size = 30;
  cfg.max_generations = 60;
  cfg.seed = 2;
  // Pinned so the preferred test below is not subsumed by the archive tests.
  cfg.archive_probability = 0.1;
  DynaMosa search(s, cfg);
  search.initialize();
  while (!search.finished()) search.evolve();
  const auto& archive = search.state().archive;

  // One preferred test for the first covered target of the size() routine.
  PreferenceArchive preference;
  for (auto t : archive.covered_in_order()) {
    if (s.target(t).routine != method(s, "size", 0)) continue;
    auto m = generate_assertions(s, minimize_for_target(s, archive.entry(t)->test, s.target(t)));
    preference.store(t, {m, 9, 1, 10});
    break;
  }
  ASSERT_EQ(preference.size(), 1u);

  const TestSuite suite = assemble_final_suite(s, preference, archive);
  const auto archived = archive.covered_targets();
  const std::set<std::uint32_t> archive_set(archived.begin(), archived.end());
  const auto suite_set = suite.covered();
  EXPECT_TRUE(std::includes(suite_set.begin(), suite_set.end(), archive_set.begin(), archive_set.end()));
  ASSERT_FALSE(suite.tests.empty());
  EXPECT_EQ(suite.tests.front().score, 9);
  for (std::size_t i = 1; i < suite.tests.size(); ++i) {
    EXPECT_EQ(suite.tests[i].score, kCoverageOnlyScore);
    if (i > 1) {
      EXPECT_LT(suite.tests[i - 1].test.target, suite.tests[i].test.target);
    }
  }
  for (const auto& t : suite.tests) {
    EXPECT_EQ(t.covers, suite_coverage(s, t.test.test));
    EXPECT_TRUE(assertions_hold(s, t.test));
  }

  const std::string text = render_suite(s, suite);
  EXPECT_EQ(text.rfind("// suite for ArrayIntList: ", 0), 0u);
  EXPECT_NE(text.find(", readability 9\ntest test01 {"), std::string::npos) << text.substr(0, 400);
  EXPECT_NE(text.find("test test02 {"), std::string::npos);
  const auto parsed = parse_tests(s, text);
  ASSERT_EQ(parsed.size(), suite.tests.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) EXPECT_EQ(parsed[i].test, suite.tests[i].test.test);

  const auto json = suite_json(s, suite);
  EXPECT_EQ(json["tests"].size(), suite.tests.size());
  EXPECT_EQ(json["covered"], suite.covered().size());
}
