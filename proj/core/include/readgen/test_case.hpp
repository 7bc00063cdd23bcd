#pragma once

// Test cases: the statement sequences evolved by the search, their
// minimized/asserted form, rendering, and variation operators.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "readgen/rng.hpp"
#include "readgen/subject.hpp"

namespace readgen {

struct Argument {
  enum class Kind : std::uint8_t { kRef, kInt, kBool };

  Kind kind = Kind::kInt;
  std::uint32_t ref = kNone;
  std::int32_t int_value = 0;
  bool bool_value = false;

  static Argument reference(std::uint32_t statement) { return {Kind::kRef, statement, 0, false}; }
  static Argument of_int(std::int32_t v) { return {Kind::kInt, kNone, v, false}; }
  static Argument of_bool(bool v) { return {Kind::kBool, kNone, 0, v}; }

  friend bool operator==(const Argument&, const Argument&) = default;
};

// Variables are identified by the index of the statement declaring them.
struct Statement {
  enum class Kind : std::uint8_t { kPrimitive, kArray, kConstruct, kCall };

  Kind kind = Kind::kPrimitive;
  ValueType primitive_type = ValueType::kInt;
  std::int32_t int_value = 0;
  bool bool_value = false;
  std::vector<std::int32_t> array;
  std::uint32_t routine = kNone;
  std::uint32_t receiver = kNone;
  std::vector<Argument> args;

  static Statement of_int(std::int32_t v);
  static Statement of_bool(bool v);
  static Statement of_array(std::vector<std::int32_t> values);
  static Statement construct(std::uint32_t ctor, std::vector<Argument> args);
  static Statement call(std::uint32_t receiver, std::uint32_t method, std::vector<Argument> args);

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct TestCase {
  std::vector<Statement> statements;

  std::size_t length() const noexcept { return statements.size(); }
  bool empty() const noexcept { return statements.empty(); }

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

inline std::size_t length(const TestCase& test) { return test.length(); }

// Type of the variable a statement declares; kVoid for void calls.
ValueType declared_type(const SubjectClass& subject, const Statement& statement);

bool references(const Statement& statement, std::uint32_t variable);

// Human-readable reason the test is invalid, or nullopt.
std::optional<std::string> validation_error(const SubjectClass& subject, const TestCase& test,
                                            std::size_t max_length = std::size_t(-1));

// Removes statement `index` together with every statement that transitively
// references it, renumbering the remaining references.
TestCase remove_with_dependents(const TestCase& test, std::size_t index);

// Inserts `inserted` at `position`, shifting later references.
TestCase insert_statements(const TestCase& test, std::size_t position,
                           const std::vector<Statement>& inserted);

struct Assertion {
  enum class Kind : std::uint8_t { kResult, kObserver };

  Kind kind = Kind::kResult;
  std::uint32_t statement = kNone;
  std::uint32_t observer = kNone;
  ValueType type = ValueType::kInt;
  std::int32_t expected_int = 0;
  bool expected_bool = false;

  friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct RaisedNote {
  std::uint32_t statement = kNone;
  std::string exception;

  friend bool operator==(const RaisedNote&, const RaisedNote&) = default;
};

struct MinimizedTest {
  TestCase test;
  std::uint32_t target = kNone;
  std::vector<Assertion> assertions;
  std::optional<RaisedNote> raised;
  std::string rendered;
  std::string canonical_key;
};

class ReadabilityScore {
 public:
  ReadabilityScore(int value, int max_score);

  int value() const noexcept { return value_; }

  friend bool operator==(const ReadabilityScore&, const ReadabilityScore&) = default;

 private:
  int value_;
};

struct RenderOptions {
  std::string name = "test";
  bool include_assertions = true;
  bool include_annotations = true;
};

std::string render(const SubjectClass& subject, const TestCase& test,
                   const std::vector<Assertion>& assertions = {},
                   const std::optional<RaisedNote>& raised = std::nullopt,
                   const RenderOptions& options = {});
std::string render(const SubjectClass& subject, const MinimizedTest& test,
                   const RenderOptions& options = {});

// Digest of the alpha-normalized statement list. Assertions are a pure
// function of the statements, so they do not participate.
std::string canonical_key(const SubjectClass& subject, const TestCase& test);
std::string canonical_key(const SubjectClass& subject, const MinimizedTest& test);

struct BodyMetrics {
  std::size_t lines = 0;
  std::size_t characters = 0;
};

// Statement lines and their characters, excluding assertions, indentation
// and trailing whitespace.
BodyMetrics measure_body(const SubjectClass& subject, const TestCase& test);

class TestParseError : public std::runtime_error {
 public:
  TestParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ParsedTest {
  std::string name;
  TestCase test;
  std::vector<Assertion> assertions;
};

// Reads the rendered format back. Comments (annotations) are ignored.
ParsedTest parse_test(const SubjectClass& subject, std::string_view text);
std::vector<ParsedTest> parse_tests(const SubjectClass& subject, std::string_view text);

struct VariationConfig {
  std::size_t max_length = 40;
  double insert_probability = 0.5;     // geometric insertion, expected one insert
  double reuse_probability = 0.3;      // argument reuses an existing variable
  double constructor_probability = 0.1;
  double primitive_probability = 0.1;
  double constant_probability = 0.1;   // literal drawn from subject constants
};

class TestFactory {
 public:
  explicit TestFactory(const SubjectClass& subject, VariationConfig config = {});

  const VariationConfig& config() const noexcept { return config_; }

  TestCase random_test(Rng& rng) const;
  std::pair<TestCase, TestCase> crossover(const TestCase& a, const TestCase& b, Rng& rng) const;
  std::pair<TestCase, TestCase> crossover_at(const TestCase& a, const TestCase& b, std::size_t cut_a,
                                             std::size_t cut_b, Rng& rng) const;
  TestCase mutate(const TestCase& test, Rng& rng) const;
  std::int32_t random_int(Rng& rng) const;

 private:
  std::vector<Statement> random_statement(const TestCase& test, std::size_t position, Rng& rng) const;
  std::vector<Statement> random_constructor(const TestCase& test, std::size_t position, Rng& rng) const;
  Argument random_argument(const TestCase& test, std::size_t position, ValueType type,
                           std::vector<Statement>& prelude, Rng& rng) const;
  std::optional<std::uint32_t> pick_variable(const TestCase& test, std::size_t position,
                                             ValueType type, Rng& rng) const;
  bool change_statement(TestCase& test, std::size_t index, Rng& rng) const;
  TestCase append_suffix(const TestCase& prefix_source, std::size_t cut_prefix,
                         const TestCase& suffix_source, std::size_t cut_suffix, Rng& rng) const;
  void repair(TestCase& test, Rng& rng) const;

  const SubjectClass& subject_;
  VariationConfig config_;
};

}  // namespace readgen
