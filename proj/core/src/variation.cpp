#include <algorithm>

#include "readgen/test_case.hpp"

namespace readgen {
namespace {

constexpr std::int32_t kSmallRange = 100;
constexpr std::size_t kMaxArrayLiteral = 4;

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[uniform_index(rng, items.size())];
}

std::int32_t nudge(std::int32_t v, Rng& rng) {
  const std::int64_t n = std::int64_t{v} + (bernoulli(rng, 0.5) ? 1 : -1);
  return static_cast<std::int32_t>(std::clamp<std::int64_t>(n, INT32_MIN, INT32_MAX));
}

}  // namespace

TestFactory::TestFactory(const SubjectClass& subject, VariationConfig config)
    : subject_(subject), config_(config) {
  if (config_.max_length == 0) throw std::invalid_argument("max_length must be positive");
}

std::int32_t TestFactory::random_int(Rng& rng) const {
  const double r = uniform01(rng);
  if (r < config_.constant_probability && !subject_.constants().empty()) {
    return pick(subject_.constants(), rng);
  }
  if (r < config_.constant_probability + 0.2) return static_cast<std::int32_t>(uniform_int(rng, -1, 1));
  return static_cast<std::int32_t>(uniform_int(rng, -kSmallRange, kSmallRange));
}

std::optional<std::uint32_t> TestFactory::pick_variable(const TestCase& test, std::size_t position,
                                                        ValueType type, Rng& rng) const {
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t j = 0; j < position; ++j) {
    if (declared_type(subject_, test.statements[j]) == type) candidates.push_back(j);
  }
  if (candidates.empty()) return std::nullopt;
  return pick(candidates, rng);
}

Argument TestFactory::random_argument(const TestCase& test, std::size_t position, ValueType type,
                                      std::vector<Statement>& prelude, Rng& rng) const {
  switch (type) {
    case ValueType::kInt:
      if (bernoulli(rng, config_.reuse_probability)) {
        if (auto v = pick_variable(test, position, type, rng)) return Argument::reference(*v);
      }
      return Argument::of_int(random_int(rng));
    case ValueType::kBool:
      if (bernoulli(rng, config_.reuse_probability)) {
        if (auto v = pick_variable(test, position, type, rng)) return Argument::reference(*v);
      }
      return Argument::of_bool(bernoulli(rng, 0.5));
    default: {
      if (bernoulli(rng, 0.5)) {
        if (auto v = pick_variable(test, position, type, rng)) return Argument::reference(*v);
      }
      std::vector<std::int32_t> values(uniform_index(rng, kMaxArrayLiteral + 1));
      for (auto& v : values) v = random_int(rng);
      prelude.push_back(Statement::of_array(std::move(values)));
      return Argument::reference(static_cast<std::uint32_t>(position + prelude.size() - 1));
    }
  }
}

std::vector<Statement> TestFactory::random_constructor(const TestCase& test, std::size_t position,
                                                       Rng& rng) const {
  const std::uint32_t ctor = pick(subject_.constructors(), rng);
  std::vector<Statement> out;
  std::vector<Argument> args;
  for (const auto& p : subject_.routine(ctor).params) {
    args.push_back(random_argument(test, position, p.type, out, rng));
  }
  out.push_back(Statement::construct(ctor, std::move(args)));
  return out;
}

std::vector<Statement> TestFactory::random_statement(const TestCase& test, std::size_t position,
                                                     Rng& rng) const {
  const auto receiver = pick_variable(test, position, ValueType::kObject, rng);
  if (!receiver || subject_.public_methods().empty()) return random_constructor(test, position, rng);
  const double r = uniform01(rng);
  if (r < config_.constructor_probability) return random_constructor(test, position, rng);
  if (r < config_.constructor_probability + config_.primitive_probability) {
    return {Statement::of_int(random_int(rng))};
  }
  const std::uint32_t method = pick(subject_.public_methods(), rng);
  std::vector<Statement> out;
  std::vector<Argument> args;
  for (const auto& p : subject_.routine(method).params) {
    args.push_back(random_argument(test, position, p.type, out, rng));
  }
  out.push_back(Statement::call(*receiver, method, std::move(args)));
  return out;
}

TestCase TestFactory::random_test(Rng& rng) const {
  const std::size_t target =
      1 + uniform_index(rng, std::max<std::size_t>(1, config_.max_length / 4));
  TestCase test;
  while (test.length() < target) {
    auto statements = random_statement(test, test.length(), rng);
    if (test.length() + statements.size() > config_.max_length) break;
    test = insert_statements(test, test.length(), statements);
  }
  repair(test, rng);
  return test;
}

void TestFactory::repair(TestCase& test, Rng& rng) const {
  const bool has_object = std::any_of(test.statements.begin(), test.statements.end(), [](const Statement& s) {
    return s.kind == Statement::Kind::kConstruct;
  });
  if (!has_object) test = insert_statements(test, 0, random_constructor(test, 0, rng));
  while (test.length() > config_.max_length) test.statements.pop_back();
}

TestCase TestFactory::append_suffix(const TestCase& prefix_source, std::size_t cut_prefix,
                                    const TestCase& suffix_source, std::size_t cut_suffix, Rng& rng) const {
  TestCase out;
  out.statements.assign(prefix_source.statements.begin(),
                        prefix_source.statements.begin() + static_cast<std::ptrdiff_t>(cut_prefix));
  std::vector<std::uint32_t> remap(suffix_source.length(), kNone);
  for (std::size_t j = cut_suffix; j < suffix_source.length(); ++j) {
    Statement s = suffix_source.statements[j];
    bool ok = true;
    auto fix = [&](std::uint32_t& r) {
      if (!ok) return;
      if (r >= cut_suffix && remap[r] != kNone) {
        r = remap[r];
        return;
      }
      const ValueType type = declared_type(subject_, suffix_source.statements[r]);
      if (auto v = pick_variable(out, out.length(), type, rng)) {
        r = *v;
      } else {
        ok = false;
      }
    };
    if (s.kind == Statement::Kind::kCall) fix(s.receiver);
    for (auto& a : s.args) {
      if (a.kind == Argument::Kind::kRef) fix(a.ref);
    }
    if (!ok) continue;
    remap[j] = static_cast<std::uint32_t>(out.length());
    out.statements.push_back(std::move(s));
  }
  repair(out, rng);
  return out;
}

std::pair<TestCase, TestCase> TestFactory::crossover_at(const TestCase& a, const TestCase& b, std::size_t cut_a,
                                                        std::size_t cut_b, Rng& rng) const {
  TestCase first = append_suffix(a, cut_a, b, cut_b, rng);
  TestCase second = append_suffix(b, cut_b, a, cut_a, rng);
  return {std::move(first), std::move(second)};
}

std::pair<TestCase, TestCase> TestFactory::crossover(const TestCase& a, const TestCase& b, Rng& rng) const {
  const std::size_t cut_a = uniform_index(rng, a.length() + 1);
  const std::size_t cut_b = uniform_index(rng, b.length() + 1);
  return crossover_at(a, b, cut_a, cut_b, rng);
}

bool TestFactory::change_statement(TestCase& test, std::size_t index, Rng& rng) const {
  Statement& s = test.statements[index];
  switch (s.kind) {
    case Statement::Kind::kPrimitive:
      if (s.primitive_type == ValueType::kBool) {
        s.bool_value = !s.bool_value;
      } else {
        const std::int32_t before = s.int_value;
        s.int_value = bernoulli(rng, 0.5) ? nudge(before, rng) : random_int(rng);
        if (s.int_value == before) s.int_value = nudge(before, rng);
      }
      return true;
    case Statement::Kind::kArray: {
      const double r = uniform01(rng);
      if (s.array.empty() || r < 0.3) {
        s.array.push_back(random_int(rng));
      } else if (r < 0.5) {
        s.array.pop_back();
      } else {
        auto& v = s.array[uniform_index(rng, s.array.size())];
        v = bernoulli(rng, 0.5) ? nudge(v, rng) : random_int(rng);
      }
      return true;
    }
    case Statement::Kind::kConstruct:
    case Statement::Kind::kCall:
      break;
  }

  const bool is_call = s.kind == Statement::Kind::kCall;
  if (!s.args.empty() && (!is_call || bernoulli(rng, 0.7))) {
    const std::size_t k = uniform_index(rng, s.args.size());
    Argument& a = s.args[k];
    if (a.kind == Argument::Kind::kInt && bernoulli(rng, 0.5)) {
      a.int_value = nudge(a.int_value, rng);
      return true;
    }
    if (a.kind == Argument::Kind::kBool) {
      a.bool_value = !a.bool_value;
      return true;
    }
    const ValueType type = subject_.routine(s.routine).params[k].type;
    std::vector<Statement> prelude;
    const Argument replacement = random_argument(test, index, type, prelude, rng);
    if (replacement == a && prelude.empty()) return false;
    if (test.length() + prelude.size() > config_.max_length) return false;
    test.statements[index].args[k] = replacement;
    if (!prelude.empty()) test = insert_statements(test, index, prelude);
    // insert_statements shifted the reference into the prelude; undo for it.
    if (!prelude.empty()) {
      test.statements[index + prelude.size()].args[k] = replacement;
    }
    return true;
  }

  if (!is_call) {
    if (subject_.constructors().size() < 2) return false;
    std::vector<Statement> fresh = random_constructor(test, index, rng);
    if (fresh.back().routine == s.routine) return false;
    if (test.length() + fresh.size() - 1 > config_.max_length) return false;
    Statement replacement = fresh.back();
    fresh.pop_back();
    test.statements[index] = replacement;
    if (!fresh.empty()) {
      test = insert_statements(test, index, fresh);
      test.statements[index + fresh.size()] = replacement;
    }
    return true;
  }

  // Swap in another method with the same return type, or a new receiver.
  const ValueType result = subject_.routine(s.routine).return_type;
  std::vector<std::uint32_t> methods;
  for (std::uint32_t m : subject_.public_methods()) {
    if (m != s.routine && subject_.routine(m).return_type == result) methods.push_back(m);
  }
  if (methods.empty() || bernoulli(rng, 0.3)) {
    const auto receiver = pick_variable(test, index, ValueType::kObject, rng);
    if (!receiver || *receiver == s.receiver) return false;
    s.receiver = *receiver;
    return true;
  }
  const std::uint32_t method = pick(methods, rng);
  std::vector<Statement> prelude;
  std::vector<Argument> args;
  for (const auto& p : subject_.routine(method).params) {
    args.push_back(random_argument(test, index, p.type, prelude, rng));
  }
  if (test.length() + prelude.size() > config_.max_length) return false;
  Statement replacement = Statement::call(s.receiver, method, std::move(args));
  test.statements[index] = replacement;
  if (!prelude.empty()) {
    test = insert_statements(test, index, prelude);
    test.statements[index + prelude.size()] = replacement;
  }
  return true;
}

TestCase TestFactory::mutate(const TestCase& test, Rng& rng) const {
  constexpr double kOperatorProbability = 1.0 / 3.0;
  TestCase out = test;
  for (int attempt = 0; attempt < 8 && out == test; ++attempt) {
    if (out.length() > 1 && bernoulli(rng, kOperatorProbability)) {
      const double p = 1.0 / static_cast<double>(out.length());
      for (std::size_t i = out.length(); i-- > 0;) {
        if (i < out.length() && out.length() > 1 && bernoulli(rng, p)) out = remove_with_dependents(out, i);
      }
    }
    if (!out.empty() && bernoulli(rng, kOperatorProbability)) {
      const double p = 1.0 / static_cast<double>(out.length());
      for (std::size_t i = 0; i < out.length(); ++i) {
        if (bernoulli(rng, p)) change_statement(out, i, rng);
      }
    }
    if (bernoulli(rng, kOperatorProbability)) {
      double p = config_.insert_probability;
      while (out.length() < config_.max_length && bernoulli(rng, p)) {
        const std::size_t position = uniform_index(rng, out.length() + 1);
        const auto statements = random_statement(out, position, rng);
        if (out.length() + statements.size() <= config_.max_length) {
          out = insert_statements(out, position, statements);
        }
        p *= config_.insert_probability;
      }
    }
    repair(out, rng);
  }
  return out;
}

}  // namespace readgen
