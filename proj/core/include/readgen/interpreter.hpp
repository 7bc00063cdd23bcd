#pragma once

// Instrumented execution of test cases and per-target fitness distances.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "readgen/subject.hpp"
#include "readgen/test_case.hpp"

namespace readgen {

inline constexpr std::uint64_t kDefaultStepBudget = 10000;
inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

struct ObjectHandle {
  std::uint32_t id = 0;
  friend bool operator==(ObjectHandle, ObjectHandle) = default;
};

using ArrayRef = std::shared_ptr<std::vector<std::int32_t>>;
using RuntimeValue = std::variant<std::monostate, std::int32_t, bool, ArrayRef, ObjectHandle>;

struct BranchRecord {
  double distance_true = kUnreached;
  double distance_false = kUnreached;
  std::uint32_t hits = 0;
};

struct CallResult {
  enum class Kind : std::uint8_t { kNotExecuted, kValue, kVoid, kException };

  Kind kind = Kind::kNotExecuted;
  RuntimeValue value;
  std::string exception;

  bool raised() const noexcept { return kind == Kind::kException; }
};

// Thrown for structurally invalid tests; variation must never produce one.
class InvalidTestError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ExecutionTrace {
  std::vector<std::uint8_t> statements_hit;   // by subject statement id
  std::vector<std::uint8_t> routines_entered;
  std::vector<BranchRecord> branches;
  std::vector<double> mutant_infection;       // kUnreached when the site never ran
  std::vector<CallResult> call_results;       // by test statement
  std::optional<std::size_t> aborted_at;
  std::uint64_t steps = 0;

  bool statement_hit(std::uint32_t id) const { return statements_hit[id] != 0; }
  std::vector<int> lines_hit(const SubjectClass& subject) const;
};

ExecutionTrace execute(const SubjectClass& subject, const TestCase& test,
                       std::uint64_t step_budget = kDefaultStepBudget);

struct ObservedValue {
  std::uint32_t statement = kNone;  // object variable
  std::uint32_t observer = kNone;   // routine index
  CallResult result;
};

// Executes the test, then calls every observer on every object variable that
// was constructed before execution stopped. Observer calls are not traced.
std::vector<ObservedValue> observe(const SubjectClass& subject, const TestCase& test,
                                   ExecutionTrace& trace,
                                   std::uint64_t step_budget = kDefaultStepBudget);

inline double normalize(double d) { return d / (d + 1.0); }

double target_distance(const SubjectClass& subject, const ExecutionTrace& trace,
                       const CoverageTarget& target);
bool covers(const SubjectClass& subject, const ExecutionTrace& trace, const CoverageTarget& target);

// Distances for every target in subject order; cheaper than per-target calls.
std::vector<double> target_distances(const SubjectClass& subject, const ExecutionTrace& trace);

// Indices of targets with distance 0.
std::vector<std::uint32_t> covered_targets(const SubjectClass& subject, const ExecutionTrace& trace);

}  // namespace readgen
