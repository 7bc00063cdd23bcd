#include "readgen/minimization.hpp"

namespace readgen {
namespace {

bool still_covers(const SubjectClass& subject, const TestCase& test, const CoverageTarget& target,
                  std::uint64_t budget) {
  return covers(subject, execute(subject, test, budget), target);
}

std::optional<Assertion> assertion_for(const CallResult& result, std::uint32_t statement,
                                       std::uint32_t observer) {
  if (result.kind != CallResult::Kind::kValue) return std::nullopt;
  Assertion a;
  a.statement = statement;
  a.observer = observer;
  a.kind = observer == kNone ? Assertion::Kind::kResult : Assertion::Kind::kObserver;
  if (const auto* i = std::get_if<std::int32_t>(&result.value)) {
    a.type = ValueType::kInt;
    a.expected_int = *i;
  } else if (const auto* b = std::get_if<bool>(&result.value)) {
    a.type = ValueType::kBool;
    a.expected_bool = *b;
  } else {
    return std::nullopt;
  }
  return a;
}

}  // namespace

MinimizedTest minimize_for_target(const SubjectClass& subject, const TestCase& test,
                                  const CoverageTarget& target, std::uint64_t step_budget) {
  if (!still_covers(subject, test, target, step_budget)) {
    throw MinimizationError("test does not cover target " + target.id);
  }
  TestCase current = test;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = current.length(); i-- > 0;) {
      if (i >= current.length()) continue;
      TestCase candidate = remove_with_dependents(current, i);
      if (still_covers(subject, candidate, target, step_budget)) {
        current = std::move(candidate);
        changed = true;
      }
    }
  }
  MinimizedTest m;
  m.test = std::move(current);
  m.target = target.index;
  const ExecutionTrace trace = execute(subject, m.test, step_budget);
  if (trace.aborted_at) {
    m.raised = RaisedNote{static_cast<std::uint32_t>(*trace.aborted_at),
                          trace.call_results[*trace.aborted_at].exception};
  }
  m.canonical_key = canonical_key(subject, m.test);
  m.rendered = render(subject, m);
  return m;
}

MinimizedTest generate_assertions(const SubjectClass& subject, MinimizedTest test, std::size_t cap,
                                  std::uint64_t step_budget) {
  ExecutionTrace trace;
  const auto observed = observe(subject, test.test, trace, step_budget);

  std::uint32_t focus = kNone;
  for (std::size_t i = test.test.length(); i-- > 0;) {
    const Statement& s = test.test.statements[i];
    if (s.kind == Statement::Kind::kCall) {
      focus = s.receiver;
      break;
    }
    if (s.kind == Statement::Kind::kConstruct && focus == kNone) focus = static_cast<std::uint32_t>(i);
  }

  std::vector<Assertion> ordered;
  for (const auto& o : observed) {
    if (o.statement != focus) continue;
    if (auto a = assertion_for(o.result, o.statement, o.observer)) ordered.push_back(*a);
  }
  for (std::uint32_t i = 0; i < test.test.length(); ++i) {
    if (test.test.statements[i].kind != Statement::Kind::kCall) continue;
    if (auto a = assertion_for(trace.call_results[i], i, kNone)) ordered.push_back(*a);
  }
  for (const auto& o : observed) {
    if (o.statement == focus) continue;
    if (auto a = assertion_for(o.result, o.statement, o.observer)) ordered.push_back(*a);
  }
  if (ordered.size() > cap) ordered.resize(cap);
  test.assertions = std::move(ordered);
  test.rendered = render(subject, test);
  return test;
}

bool assertions_hold(const SubjectClass& subject, const MinimizedTest& test, std::uint64_t step_budget) {
  ExecutionTrace trace;
  const auto observed = observe(subject, test.test, trace, step_budget);
  for (const auto& a : test.assertions) {
    const CallResult* result = nullptr;
    if (a.kind == Assertion::Kind::kResult) {
      if (a.statement >= trace.call_results.size()) return false;
      result = &trace.call_results[a.statement];
    } else {
      for (const auto& o : observed) {
        if (o.statement == a.statement && o.observer == a.observer) result = &o.result;
      }
    }
    if (!result || result->kind != CallResult::Kind::kValue) return false;
    const auto expected = assertion_for(*result, a.statement, a.observer);
    if (!expected || !(*expected == a)) return false;
  }
  return true;
}

}  // namespace readgen
