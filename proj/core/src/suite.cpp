#include "readgen/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "readgen/minimization.hpp"

namespace readgen {

std::set<std::uint32_t> TestSuite::covered() const {
  std::set<std::uint32_t> out;
  for (const auto& t : tests) out.insert(t.covers.begin(), t.covers.end());
  return out;
}

std::set<std::uint32_t> suite_coverage(const SubjectClass& subject, const TestCase& test,
                                       std::uint64_t step_budget) {
  const ExecutionTrace trace = execute(subject, test, step_budget);
  const auto covered = covered_targets(subject, trace);
  return {covered.begin(), covered.end()};
}

void remove_redundant(std::vector<SuiteTest>& tests) {
  std::map<std::uint32_t, std::size_t> count;
  for (const auto& t : tests) {
    for (auto u : t.covers) ++count[u];
  }
  std::vector<std::size_t> order(tests.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = tests[a];
    const auto& y = tests[b];
    if (x.score != y.score) return x.score < y.score;
    if (x.test.test.length() != y.test.test.length()) return x.test.test.length() > y.test.test.length();
    return x.test.target > y.test.target;
  });
  std::vector<bool> removed(tests.size(), false);
  for (std::size_t i : order) {
    const bool redundant =
        std::all_of(tests[i].covers.begin(), tests[i].covers.end(), [&](std::uint32_t u) { return count[u] > 1; });
    if (!redundant) continue;
    removed[i] = true;
    for (auto u : tests[i].covers) --count[u];
  }
  std::vector<SuiteTest> kept;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (!removed[i]) kept.push_back(std::move(tests[i]));
  }
  tests = std::move(kept);
}

TestSuite assemble_final_suite(const SubjectClass& subject, const PreferenceArchive& preference,
                               const CoverageArchive& coverage, std::uint64_t step_budget,
                               std::size_t assertion_cap) {
  TestSuite suite;
  std::set<std::uint32_t> covered;
  for (const auto& [target, entry] : preference.entries()) {
    SuiteTest t{entry.test, entry.score, suite_coverage(subject, entry.test.test, step_budget)};
    covered.insert(t.covers.begin(), t.covers.end());
    suite.tests.push_back(std::move(t));
  }
  for (std::uint32_t target : coverage.covered_targets()) {
    if (covered.contains(target)) continue;
    MinimizedTest m = minimize_for_target(subject, coverage.entry(target)->test, subject.target(target), step_budget);
    m = generate_assertions(subject, std::move(m), assertion_cap, step_budget);
    SuiteTest t{std::move(m), kCoverageOnlyScore, {}};
    t.covers = suite_coverage(subject, t.test.test, step_budget);
    covered.insert(t.covers.begin(), t.covers.end());
    suite.tests.push_back(std::move(t));
  }
  remove_redundant(suite.tests);
  std::stable_sort(suite.tests.begin(), suite.tests.end(), [](const SuiteTest& a, const SuiteTest& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.test.target < b.test.target;
  });
  return suite;
}

std::string render_suite(const SubjectClass& subject, const TestSuite& suite) {
  std::ostringstream out;
  out << "// suite for " << subject.name() << ": " << suite.tests.size() << " test(s), "
      << suite.covered().size() << " target(s) covered\n";
  for (std::size_t i = 0; i < suite.tests.size(); ++i) {
    const SuiteTest& t = suite.tests[i];
    char name[32];
    std::snprintf(name, sizeof name, "test%02zu", i + 1);
    out << "\n// target " << subject.target(t.test.target).id;
    if (t.score != kCoverageOnlyScore) out << ", readability " << t.score;
    out << '\n' << render(subject, t.test, RenderOptions{name});
  }
  return out.str();
}

nlohmann::json suite_json(const SubjectClass& subject, const TestSuite& suite) {
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : suite.tests) {
    nlohmann::json covers = nlohmann::json::array();
    for (auto u : t.covers) covers.push_back(subject.target(u).id);
    tests.push_back({{"target_id", subject.target(t.test.target).id},
                     {"score", t.score},
                     {"key", t.test.canonical_key},
                     {"length", t.test.test.length()},
                     {"covers", covers}});
  }
  return {{"tests", tests}, {"covered", suite.covered().size()}};
}

}  // namespace readgen
