#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "readgen/interpreter.hpp"

using namespace readgen;
using namespace readgen::test_support;

namespace {

TestCase push_pop() {
  const auto& s = stack_subject();
  TestCase t;
  t.statements.push_back(Statement::of_int(3));
  t.statements.push_back(Statement::construct(ctor(s, 1), {Argument::reference(0)}));
  t.statements.push_back(Statement::call(1, method(s, "push", 1), {Argument::of_int(-7)}));
  t.statements.push_back(Statement::call(1, method(s, "pop", 0), {}));
  return t;
}

// Counts statement lines the way a reader would: strip indentation, skip the
// header, braces and assertions.
BodyMetrics count_by_hand(const std::string& rendered) {
  BodyMetrics m;
  std::istringstream in(rendered);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(' ');
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.rfind("test ", 0) == 0 || line == "}" || line.rfind("assert ", 0) == 0) continue;
    if (const auto comment = line.find(" //"); comment != std::string::npos) line.resize(comment);
    ++m.lines;
    m.characters += line.size();
  }
  return m;
}

}  // namespace

TEST(TestModel, RenderingIsStable) {
  const auto& s = stack_subject();
  const TestCase t = push_pop();
  EXPECT_EQ(render(s, t, {}, std::nullopt, {.name = "t1"}),
            "test t1 {\n"
            "  int v0 = 3;\n"
            "  Stack v1 = new Stack(v0);\n"
            "  v1.push(-7);\n"
            "  v1.pop();\n"
            "}\n");
  const std::vector<Assertion> asserts = {
      {Assertion::Kind::kObserver, 1, method(s, "size", 0), ValueType::kInt, 0, false}};
  const std::string with = render(s, t, asserts, RaisedNote{3, "Underflow"}, {.name = "t1"});
  EXPECT_NE(with.find("  v1.pop(); // raises Underflow\n"), std::string::npos) << with;
  EXPECT_NE(with.find("  assert v1.size() == 0;\n"), std::string::npos);
}

TEST(TestModel, CallResultIsNamedOnlyWhenUsed) {
  const auto& s = stack_subject();
  TestCase t = push_pop();
  const std::vector<Assertion> asserts = {{Assertion::Kind::kResult, 3, kNone, ValueType::kInt, -7, false}};
  const std::string text = render(s, t, asserts);
  EXPECT_NE(text.find("int v2 = v1.pop();"), std::string::npos) << text;
  EXPECT_NE(text.find("assert v2 == -7;"), std::string::npos);
}

TEST(TestModel, CanonicalKeyIgnoresNameAndAssertions) {
  const auto& s = stack_subject();
  const TestCase t = push_pop();
  MinimizedTest a{t, 0, {}, std::nullopt, {}, {}};
  MinimizedTest b = a;
  b.assertions.push_back({Assertion::Kind::kObserver, 1, method(s, "size", 0), ValueType::kInt, 0, false});
  b.raised = RaisedNote{3, "Underflow"};
  EXPECT_EQ(canonical_key(s, a), canonical_key(s, b));
  EXPECT_EQ(canonical_key(s, a), canonical_key(s, t));
  EXPECT_EQ(canonical_key(s, t).size(), 16u);

  TestCase other = t;
  other.statements[2].args[0] = Argument::of_int(8);
  EXPECT_NE(canonical_key(s, other), canonical_key(s, t));
}

TEST(TestModel, CanonicalKeyEqualsIffRenderingEquals) {
  const auto& s = array_int_list();
  TestFactory factory(s);
  Rng rng = make_rng(5);
  std::map<std::string, std::string> by_key;
  RenderOptions plain{.name = "", .include_assertions = false, .include_annotations = false};
  for (int i = 0; i < 300; ++i) {
    const TestCase t = factory.random_test(rng);
    const auto [it, fresh] = by_key.emplace(canonical_key(s, t), render(s, t, {}, std::nullopt, plain));
    if (!fresh) {
      EXPECT_EQ(it->second, render(s, t, {}, std::nullopt, plain));
    }
  }
}

TEST(TestModel, MeasureBodyMatchesHandCount) {
  const auto& s = stack_subject();
  const TestCase t = push_pop();
  const auto m = measure_body(s, t);
  EXPECT_EQ(m.lines, 4u);
  EXPECT_EQ(m.characters, std::string("int v0 = 3;Stack v1 = new Stack(v0);v1.push(-7);v1.pop();").size());

  const auto& list = array_int_list();
  TestFactory factory(list);
  Rng rng = make_rng(11);
  for (int i = 0; i < 200; ++i) {
    const TestCase r = factory.random_test(rng);
    const std::vector<Assertion> asserts = {
        {Assertion::Kind::kObserver, 0, method(list, "size", 0), ValueType::kInt, 1, false}};
    const auto want = count_by_hand(render(list, r, r.statements.front().kind == Statement::Kind::kConstruct
                                                        ? asserts
                                                        : std::vector<Assertion>{}));
    const auto got = measure_body(list, r);
    EXPECT_EQ(got.lines, want.lines);
    EXPECT_EQ(got.characters, want.characters);
  }
}

TEST(TestModel, ParseInvertsRender) {
  for (const auto* subject : {&array_int_list(), &stack_subject(), &nested_subject()}) {
    const auto& s = *subject;
    TestFactory factory(s);
    Rng rng = make_rng(21);
    for (int i = 0; i < 200; ++i) {
      const TestCase t = factory.random_test(rng);
      const std::string text = render(s, t, {}, std::nullopt, {.name = "t" + std::to_string(i)});
      const ParsedTest parsed = parse_test(s, text);
      EXPECT_EQ(parsed.name, "t" + std::to_string(i));
      EXPECT_EQ(parsed.test, t) << text;
      EXPECT_EQ(render(s, parsed.test, {}, std::nullopt, {.name = parsed.name}), text);
    }
  }
}

TEST(TestModel, ParseReadsAssertionsAndIgnoresComments) {
  const auto& s = stack_subject();
  const TestCase t = push_pop();
  const std::vector<Assertion> asserts = {
      {Assertion::Kind::kObserver, 1, method(s, "isEmpty", 0), ValueType::kBool, 0, true}};
  const std::string text = "// leading comment\n" + render(s, t, asserts, RaisedNote{3, "Underflow"});
  const auto parsed = parse_tests(s, text + text);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0].test, t);
  EXPECT_EQ(parsed[1].assertions, asserts);
}

TEST(TestModel, ParseErrorsReportLines) {
  const auto& s = stack_subject();
  try {
    parse_test(s, "test t {\n  Stack v0 = new Stack(1);\n  v0.fly();\n}\n");
    FAIL();
  } catch (const TestParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_test(s, "test t {\n  v9.pop();\n}\n"), TestParseError);
  EXPECT_THROW(parse_test(s, "test t {\n"), TestParseError);
}

TEST(TestModel, RemoveWithDependentsDropsUsersAndRenumbers) {
  const auto& s = stack_subject();
  const TestCase t = push_pop();
  const TestCase no_ctor = remove_with_dependents(t, 1);
  ASSERT_EQ(no_ctor.length(), 1u);
  EXPECT_EQ(no_ctor.statements[0], Statement::of_int(3));

  TestCase two = push_pop();
  two.statements.insert(two.statements.begin(), Statement::of_int(9));
  for (std::size_t i = 1; i < two.length(); ++i) {
    for (auto& a : two.statements[i].args) {
      if (a.kind == Argument::Kind::kRef) ++a.ref;
    }
    if (two.statements[i].kind == Statement::Kind::kCall) ++two.statements[i].receiver;
  }
  EXPECT_FALSE(validation_error(s, two));
  EXPECT_EQ(remove_with_dependents(two, 0), t);
  EXPECT_EQ(insert_statements(t, 0, {Statement::of_int(9)}), two);
}

TEST(TestModel, RemovalKeepsRandomTestsValid) {
  const auto& s = array_int_list();
  TestFactory factory(s);
  Rng rng = make_rng(3);
  for (int i = 0; i < 200; ++i) {
    const TestCase t = factory.random_test(rng);
    for (std::size_t k = 0; k < t.length(); ++k) {
      const TestCase r = remove_with_dependents(t, k);
      EXPECT_LT(r.length(), t.length());
      EXPECT_FALSE(validation_error(s, r)) << *validation_error(s, r);
    }
  }
}

TEST(TestModel, ValidationCatchesStructuralErrors) {
  const auto& s = stack_subject();
  TestCase forward;
  forward.statements.push_back(Statement::construct(ctor(s, 1), {Argument::reference(1)}));
  forward.statements.push_back(Statement::of_int(1));
  EXPECT_TRUE(validation_error(s, forward));

  TestCase wrong_type;
  wrong_type.statements.push_back(Statement::of_bool(true));
  wrong_type.statements.push_back(Statement::construct(ctor(s, 1), {Argument::reference(0)}));
  EXPECT_TRUE(validation_error(s, wrong_type));

  EXPECT_TRUE(validation_error(s, push_pop(), 3));
  EXPECT_FALSE(validation_error(s, push_pop(), 4));
}

TEST(TestModel, ReadabilityScoreRange) {
  EXPECT_EQ(ReadabilityScore(0, 10).value(), 0);
  EXPECT_EQ(ReadabilityScore(10, 10).value(), 10);
  EXPECT_THROW(ReadabilityScore(11, 10), std::out_of_range);
  EXPECT_THROW(ReadabilityScore(-1, 10), std::out_of_range);
}
