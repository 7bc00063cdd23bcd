#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "readgen/run.hpp"

using namespace readgen;
using namespace readgen::test_support;

namespace {

RunOptions small_options(std::size_t max_times) {
  RunOptions o;
  o.search.population_size = 30;
  o.search.max_generations = 40;
  o.search.seed = 8;
  o.interaction.max_times = max_times;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Run, SuiteKeepsArchiveCoverage) {
  const auto& s = array_int_list();
  HeuristicScorer scorer;
  const auto result = run_search(s, small_options(6), &scorer);
  EXPECT_FALSE(result.aborted);
  EXPECT_GT(result.interactions.size(), 0u);
  const auto suite = result.suite.covered();
  for (auto t : result.archive.covered_targets()) EXPECT_TRUE(suite.count(t)) << s.target(t).id;
  EXPECT_EQ(suite.size(), result.archive.covered_count());
  EXPECT_EQ(result.generations, 40u);
  // The suite text is a parseable test file covering the same targets.
  std::set<std::uint32_t> reparsed;
  for (const auto& t : parse_tests(s, result.suite_text)) {
    const auto trace = execute(s, t.test);
    for (const auto& target : s.targets()) {
      if (covers(s, trace, target)) reparsed.insert(target.index);
    }
  }
  EXPECT_EQ(reparsed, suite);
}

TEST(Run, SameSeedSameSuite) {
  const auto& s = stack_subject();
  HeuristicScorer a;
  HeuristicScorer b;
  EXPECT_EQ(run_search(s, small_options(4), &a).suite_text, run_search(s, small_options(4), &b).suite_text);
}

TEST(Run, ScorerRequiredOnlyWithInteraction) {
  const auto& s = stack_subject();
  EXPECT_NO_THROW(run_search(s, small_options(0)));
  EXPECT_THROW(run_search(s, small_options(1)), ConfigError);
  auto bad = small_options(0);
  bad.search.population_size = 0;
  EXPECT_THROW(run_search(s, bad), ConfigError);
}

TEST(Run, ClosedChannelAbortsButKeepsTheSuite) {
  const auto& s = array_int_list();
  ScriptedScorer closed(std::vector<std::vector<int>>{});
  Session session;
  const auto result = run_search(s, small_options(3), &closed, &session);
  EXPECT_TRUE(result.aborted);
  EXPECT_FALSE(result.abort_reason.empty());
  EXPECT_LT(result.generations, 40u);
  EXPECT_FALSE(result.suite.tests.empty());
  EXPECT_EQ(session.records().back()["type"], "run-finished");
  EXPECT_EQ(session.records().back()["aborted"], true);
}

TEST(Run, OutputsAreWritten) {
  const auto& s = stack_subject();
  HeuristicScorer scorer;
  const auto options = small_options(2);
  const auto result = run_search(s, options, &scorer);
  const auto dir = std::filesystem::temp_directory_path() / "readgen_test_run_outputs";
  std::filesystem::remove_all(dir);
  write_run_outputs(dir, s, options, result);
  for (const char* name : {"config.json", "run.json", "suite.t.txt", "suite.json", "coverage-archive.json",
                           "preference-archive.json", "readability-archive.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  EXPECT_EQ(slurp(dir / "suite.t.txt"), result.suite_text);
  const auto run = nlohmann::json::parse(slurp(dir / "run.json"));
  EXPECT_EQ(run["covered"], result.archive.covered_count());
  EXPECT_EQ(run["interactions"], result.interactions.size());
  const auto config = load_config(dir / "config.json");
  EXPECT_EQ(config.search.seed, options.search.seed);
  EXPECT_EQ(config.interaction.max_times, 2u);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "coverage-archive.json")).size(), result.archive.covered_count());
  std::filesystem::remove_all(dir);
}
