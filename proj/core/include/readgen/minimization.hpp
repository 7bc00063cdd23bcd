#pragma once

#include <stdexcept>

#include "readgen/interpreter.hpp"
#include "readgen/test_case.hpp"

namespace readgen {

class MinimizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultAssertionCap = 4;

// Backward greedy removal repeated to a fixpoint. The result covers the
// target and is 1-minimal. Throws MinimizationError if `test` does not
// cover the target.
MinimizedTest minimize_for_target(const SubjectClass& subject, const TestCase& test,
                                  const CoverageTarget& target,
                                  std::uint64_t step_budget = kDefaultStepBudget);

// Observed-value equality assertions, capped. Observer assertions on the
// receiver of the last call come first, then call results, then the
// remaining observer assertions.
MinimizedTest generate_assertions(const SubjectClass& subject, MinimizedTest test,
                                  std::size_t cap = kDefaultAssertionCap,
                                  std::uint64_t step_budget = kDefaultStepBudget);

// True when every assertion holds on re-execution.
bool assertions_hold(const SubjectClass& subject, const MinimizedTest& test,
                     std::uint64_t step_budget = kDefaultStepBudget);

}  // namespace readgen
