#pragma once

// Final test suite: preference-archive tests first, completed from the
// coverage archive, with redundant tests removed lowest score first.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readgen/archives.hpp"
#include "readgen/interpreter.hpp"
#include "readgen/search.hpp"

namespace readgen {

inline constexpr int kCoverageOnlyScore = -1;

struct SuiteTest {
  MinimizedTest test;
  int score = kCoverageOnlyScore;
  std::set<std::uint32_t> covers;
};

struct TestSuite {
  std::vector<SuiteTest> tests;
  std::set<std::uint32_t> covered() const;
};

// Targets covered by executing the minimized test.
std::set<std::uint32_t> suite_coverage(const SubjectClass& subject, const TestCase& test,
                                       std::uint64_t step_budget = kDefaultStepBudget);

// Drops tests whose coverage is contained in the union of the others,
// visiting them by ascending score, then descending length, then descending
// target index. Keeps the remaining order.
void remove_redundant(std::vector<SuiteTest>& tests);

TestSuite assemble_final_suite(const SubjectClass& subject, const PreferenceArchive& preference,
                               const CoverageArchive& coverage,
                               std::uint64_t step_budget = kDefaultStepBudget, std::size_t assertion_cap = 4);

std::string render_suite(const SubjectClass& subject, const TestSuite& suite);
nlohmann::json suite_json(const SubjectClass& subject, const TestSuite& suite);

}  // namespace readgen
