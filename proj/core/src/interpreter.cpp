#include "readgen/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace readgen {
namespace {

constexpr double kK = 1.0;
constexpr std::int64_t kMaxArrayLength = 1 << 16;

struct Raised {
  std::string name;
};
struct OutOfSteps {};

std::int32_t wrap(std::int64_t v) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(static_cast<std::uint64_t>(v)));
}

// Java int semantics; nullopt for a zero divisor.
std::optional<std::int32_t> arith(BinaryOp op, std::int32_t a, std::int32_t b) {
  switch (op) {
    case BinaryOp::kAdd: return wrap(std::int64_t{a} + b);
    case BinaryOp::kSub: return wrap(std::int64_t{a} - b);
    case BinaryOp::kMul: return wrap(std::int64_t{a} * b);
    case BinaryOp::kDiv:
      if (b == 0) return std::nullopt;
      return wrap(std::int64_t{a} / b);
    case BinaryOp::kMod:
      if (b == 0) return std::nullopt;
      return wrap(std::int64_t{a} % b);
    default: return std::nullopt;
  }
}

bool compare(BinaryOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case BinaryOp::kLt: return a < b;
    case BinaryOp::kLe: return a <= b;
    case BinaryOp::kGt: return a > b;
    case BinaryOp::kGe: return a >= b;
    case BinaryOp::kEq: return a == b;
    default: return a != b;
  }
}

// Distance for `a op b` to evaluate to true.
double true_distance(BinaryOp op, std::int64_t a, std::int64_t b) {
  if (compare(op, a, b)) return 0.0;
  switch (op) {
    case BinaryOp::kLt:
    case BinaryOp::kLe: return static_cast<double>(a - b) + kK;
    case BinaryOp::kGt:
    case BinaryOp::kGe: return static_cast<double>(b - a) + kK;
    case BinaryOp::kEq: return static_cast<double>(a > b ? a - b : b - a);
    default: return kK;
  }
}

BinaryOp negate(BinaryOp op) {
  switch (op) {
    case BinaryOp::kLt: return BinaryOp::kGe;
    case BinaryOp::kLe: return BinaryOp::kGt;
    case BinaryOp::kGt: return BinaryOp::kLe;
    case BinaryOp::kGe: return BinaryOp::kLt;
    case BinaryOp::kEq: return BinaryOp::kNe;
    default: return BinaryOp::kEq;
  }
}

// How far the operand difference must move before `original` and
// `replacement` disagree. Comparisons only depend on the sign of a - b.
double ror_infection(BinaryOp original, BinaryOp replacement, std::int64_t diff) {
  double best = kUnreached;
  const std::int64_t representatives[] = {-1, 0, 1};
  for (std::int64_t r : representatives) {
    if (compare(original, r, 0) == compare(replacement, r, 0)) continue;
    double d;
    if (r < 0) {
      d = diff < 0 ? 0.0 : static_cast<double>(diff + 1);
    } else if (r == 0) {
      d = static_cast<double>(diff < 0 ? -diff : diff);
    } else {
      d = diff > 0 ? 0.0 : static_cast<double>(1 - diff);
    }
    best = std::min(best, d);
  }
  return best;
}

struct Cond {
  bool value = false;
  double to_true = 0.0;
  double to_false = 0.0;
};

Cond from_bool(bool v) { return {v, v ? 0.0 : kK, v ? kK : 0.0}; }

struct Object {
  std::vector<RuntimeValue> fields;
};

class Machine {
 public:
  Machine(const SubjectClass& subject, ExecutionTrace& trace, std::uint64_t budget)
      : subject_(subject), trace_(&trace), budget_(budget) {}

  void set_trace(ExecutionTrace& trace, std::uint64_t budget) {
    trace_ = &trace;
    budget_ = budget;
  }

  ObjectHandle construct(std::uint32_t ctor, std::vector<RuntimeValue> args) {
    Object object;
    object.fields.reserve(subject_.fields().size());
    for (const auto& f : subject_.fields()) {
      switch (f.type) {
        case ValueType::kInt: object.fields.emplace_back(f.int_init); break;
        case ValueType::kBool: object.fields.emplace_back(f.bool_init); break;
        default: object.fields.emplace_back(std::make_shared<std::vector<std::int32_t>>(f.array_init));
      }
    }
    const ObjectHandle handle{static_cast<std::uint32_t>(objects_.size())};
    objects_.push_back(std::move(object));
    invoke(handle.id, ctor, std::move(args));
    return handle;
  }

  RuntimeValue invoke(std::uint32_t object, std::uint32_t routine_index, std::vector<RuntimeValue> args) {
    const auto& routine = subject_.routine(routine_index);
    trace_->routines_entered[routine_index] = 1;
    Frame frame{object, std::move(args), {}};
    frame.locals.resize(std::max<std::size_t>(routine.local_count, frame.locals.size()));
    exec_block(routine.body, frame);
    return std::move(frame.result);
  }

 private:
  struct Frame {
    std::uint32_t object;
    std::vector<RuntimeValue> locals;
    RuntimeValue result;
  };

  void step() {
    if (++trace_->steps > budget_) throw OutOfSteps{};
  }

  RuntimeValue& slot(const VarRef& ref, Frame& frame) {
    if (ref.scope == VarRef::Scope::kField) return objects_[frame.object].fields[ref.index];
    return frame.locals[ref.index];
  }

  // Returns true when the routine returned.
  bool exec_block(const Block& block, Frame& frame) {
    for (const auto& s : block) {
      if (exec(*s, frame)) return true;
    }
    return false;
  }

  void record_branch(std::uint32_t branch, const Cond& c) {
    auto& rec = trace_->branches[branch];
    ++rec.hits;
    rec.distance_true = std::min(rec.distance_true, c.to_true);
    rec.distance_false = std::min(rec.distance_false, c.to_false);
  }

  bool exec(const Stmt& s, Frame& frame) {
    step();
    trace_->statements_hit[s.id] = 1;
    switch (s.kind) {
      case Stmt::Kind::kVarDecl:
      case Stmt::Kind::kAssign: {
        RuntimeValue v = eval(*s.value, frame);
        slot(s.target, frame) = std::move(v);
        return false;
      }
      case Stmt::Kind::kArrayStore: {
        ArrayRef array = std::get<ArrayRef>(slot(s.target, frame));
        const std::int32_t index = std::get<std::int32_t>(eval(*s.index, frame));
        const std::int32_t value = std::get<std::int32_t>(eval(*s.value, frame));
        if (index < 0 || static_cast<std::size_t>(index) >= array->size()) {
          throw Raised{"ArrayIndexOutOfBounds"};
        }
        (*array)[static_cast<std::size_t>(index)] = value;
        return false;
      }
      case Stmt::Kind::kIf: {
        const Cond c = eval_cond(*s.value, frame);
        record_branch(s.branch, c);
        return exec_block(c.value ? s.then_block : s.else_block, frame);
      }
      case Stmt::Kind::kWhile: {
        int iterations = 0;
        for (;;) {
          const Cond c = eval_cond(*s.value, frame);
          record_branch(s.branch, c);
          if (!c.value) return false;
          if (++iterations > s.bound) throw Raised{"LoopBoundExceeded"};
          if (exec_block(s.then_block, frame)) return true;
          step();
          trace_->statements_hit[s.id] = 1;
        }
      }
      case Stmt::Kind::kReturn:
        if (s.value) frame.result = eval(*s.value, frame);
        return true;
      case Stmt::Kind::kThrow:
        throw Raised{s.name};
      case Stmt::Kind::kCall:
        eval(*s.value, frame);
        return false;
    }
    return false;
  }

  void infect(const Expr& e, double distance) {
    for (std::uint32_t m : e.mutants) {
      auto& slot = trace_->mutant_infection[m];
      slot = std::min(slot, distance);
    }
  }

  std::int32_t eval_int(const Expr& e, Frame& frame) {
    return std::get<std::int32_t>(eval(e, frame));
  }

  RuntimeValue eval(const Expr& e, Frame& frame) {
    switch (e.kind) {
      case Expr::Kind::kIntLit: return e.int_value;
      case Expr::Kind::kBoolLit: return e.bool_value;
      case Expr::Kind::kVar: {
        RuntimeValue v = slot(e.var, frame);
        if (!e.mutants.empty()) uoi(e, std::get<std::int32_t>(v));
        return v;
      }
      case Expr::Kind::kIndex: {
        const ArrayRef& array = std::get<ArrayRef>(slot(e.var, frame));
        const std::int32_t index = eval_int(*e.operands[0], frame);
        if (index < 0 || static_cast<std::size_t>(index) >= array->size()) {
          throw Raised{"ArrayIndexOutOfBounds"};
        }
        const std::int32_t v = (*array)[static_cast<std::size_t>(index)];
        if (!e.mutants.empty()) uoi(e, v);
        return v;
      }
      case Expr::Kind::kLength: {
        const auto v = static_cast<std::int32_t>(std::get<ArrayRef>(slot(e.var, frame))->size());
        if (!e.mutants.empty()) uoi(e, v);
        return v;
      }
      case Expr::Kind::kNewArray: {
        const std::int32_t n = eval_int(*e.operands[0], frame);
        if (n < 0) throw Raised{"NegativeArraySize"};
        if (n > kMaxArrayLength) throw Raised{"OutOfMemory"};
        return std::make_shared<std::vector<std::int32_t>>(static_cast<std::size_t>(n), 0);
      }
      case Expr::Kind::kUnary:
        if (e.unary == UnaryOp::kNeg) return wrap(-std::int64_t{eval_int(*e.operands[0], frame)});
        return eval_cond(e, frame).value;
      case Expr::Kind::kBinary:
        if (is_arithmetic(e.binary)) return eval_arith(e, frame);
        return eval_cond(e, frame).value;
      case Expr::Kind::kCall: {
        std::vector<RuntimeValue> args;
        args.reserve(e.operands.size());
        for (const auto& a : e.operands) args.push_back(eval(*a, frame));
        return invoke(frame.object, e.callee, std::move(args));
      }
    }
    return {};
  }

  void uoi(const Expr& e, std::int32_t v) {
    infect(e, wrap(-std::int64_t{v}) != v ? 0.0 : 1.0);
  }

  std::int32_t eval_arith(const Expr& e, Frame& frame) {
    const std::int32_t a = eval_int(*e.operands[0], frame);
    const std::int32_t b = eval_int(*e.operands[1], frame);
    const auto original = arith(e.binary, a, b);
    for (std::uint32_t m : e.mutants) {
      const auto mutated = arith(subject_.mutants()[m].replacement_op, a, b);
      auto& slot = trace_->mutant_infection[m];
      slot = std::min(slot, mutated == original ? 1.0 : 0.0);
    }
    if (!original) throw Raised{"Arithmetic"};
    return *original;
  }

  Cond eval_cond(const Expr& e, Frame& frame) {
    if (e.kind == Expr::Kind::kUnary && e.unary == UnaryOp::kNot) {
      const Cond c = eval_cond(*e.operands[0], frame);
      return {!c.value, c.to_false, c.to_true};
    }
    if (e.kind != Expr::Kind::kBinary) return from_bool(std::get<bool>(eval(e, frame)));
    if (e.binary == BinaryOp::kAnd) {
      const Cond a = eval_cond(*e.operands[0], frame);
      if (!a.value) return {false, a.to_true + kK, 0.0};
      const Cond b = eval_cond(*e.operands[1], frame);
      return {b.value, a.to_true + b.to_true, std::min(a.to_false, b.to_false)};
    }
    if (e.binary == BinaryOp::kOr) {
      const Cond a = eval_cond(*e.operands[0], frame);
      if (a.value) return {true, 0.0, a.to_false + kK};
      const Cond b = eval_cond(*e.operands[1], frame);
      return {b.value, std::min(a.to_true, b.to_true), a.to_false + b.to_false};
    }
    const RuntimeValue lhs = eval(*e.operands[0], frame);
    const RuntimeValue rhs = eval(*e.operands[1], frame);
    std::int64_t a;
    std::int64_t b;
    if (std::holds_alternative<bool>(lhs)) {
      a = std::get<bool>(lhs);
      b = std::get<bool>(rhs);
    } else {
      a = std::get<std::int32_t>(lhs);
      b = std::get<std::int32_t>(rhs);
    }
    for (std::uint32_t m : e.mutants) {
      auto& slot = trace_->mutant_infection[m];
      slot = std::min(slot, ror_infection(e.binary, subject_.mutants()[m].replacement_op, a - b));
    }
    return {compare(e.binary, a, b), true_distance(e.binary, a, b),
            true_distance(negate(e.binary), a, b)};
  }

  const SubjectClass& subject_;
  ExecutionTrace* trace_;
  std::uint64_t budget_;
  std::vector<Object> objects_;
};

void init_trace(const SubjectClass& subject, ExecutionTrace& trace, std::size_t test_length) {
  trace.statements_hit.assign(subject.statements().size(), 0);
  trace.routines_entered.assign(subject.routines().size(), 0);
  trace.branches.assign(subject.branches().size(), BranchRecord{});
  trace.mutant_infection.assign(subject.mutants().size(), kUnreached);
  trace.call_results.assign(test_length, CallResult{});
  trace.aborted_at.reset();
  trace.steps = 0;
}

[[noreturn]] void invalid(std::size_t index, const std::string& what) {
  throw InvalidTestError("statement " + std::to_string(index) + ": " + what);
}

const RuntimeValue& lookup(const std::vector<RuntimeValue>& values, std::size_t index, std::uint32_t ref) {
  if (ref >= index) invalid(index, "forward or self reference");
  return values[ref];
}

RuntimeValue argument_value(const std::vector<RuntimeValue>& values, std::size_t index, const Argument& a,
                            ValueType expected) {
  switch (a.kind) {
    case Argument::Kind::kInt:
      if (expected != ValueType::kInt) invalid(index, "int literal for non-int parameter");
      return a.int_value;
    case Argument::Kind::kBool:
      if (expected != ValueType::kBool) invalid(index, "bool literal for non-bool parameter");
      return a.bool_value;
    case Argument::Kind::kRef: {
      const RuntimeValue& v = lookup(values, index, a.ref);
      const bool ok = (expected == ValueType::kInt && std::holds_alternative<std::int32_t>(v)) ||
                      (expected == ValueType::kBool && std::holds_alternative<bool>(v)) ||
                      (expected == ValueType::kIntArray && std::holds_alternative<ArrayRef>(v));
      if (!ok) invalid(index, "argument type mismatch");
      return v;
    }
  }
  return {};
}

std::vector<RuntimeValue> arguments(const SubjectClass& subject, const std::vector<RuntimeValue>& values,
                                    std::size_t index, const Statement& s) {
  const auto& routine = subject.routine(s.routine);
  if (routine.params.size() != s.args.size()) invalid(index, "arity mismatch");
  std::vector<RuntimeValue> out;
  out.reserve(s.args.size());
  for (std::size_t i = 0; i < s.args.size(); ++i) {
    out.push_back(argument_value(values, index, s.args[i], routine.params[i].type));
  }
  return out;
}

// Runs the test; returns the runtime value of every statement.
std::vector<RuntimeValue> run(const SubjectClass& subject, const TestCase& test, Machine& machine,
                              ExecutionTrace& trace) {
  std::vector<RuntimeValue> values(test.length());
  for (std::size_t i = 0; i < test.length(); ++i) {
    const Statement& s = test.statements[i];
    auto& result = trace.call_results[i];
    try {
      switch (s.kind) {
        case Statement::Kind::kPrimitive:
          if (s.primitive_type == ValueType::kBool) {
            values[i] = s.bool_value;
          } else {
            values[i] = s.int_value;
          }
          break;
        case Statement::Kind::kArray:
          values[i] = std::make_shared<std::vector<std::int32_t>>(s.array);
          break;
        case Statement::Kind::kConstruct: {
          if (s.routine >= subject.routines().size() || !subject.routine(s.routine).is_constructor()) {
            invalid(i, "not a constructor");
          }
          values[i] = machine.construct(s.routine, arguments(subject, values, i, s));
          break;
        }
        case Statement::Kind::kCall: {
          if (s.routine >= subject.routines().size()) invalid(i, "unknown method");
          const auto& routine = subject.routine(s.routine);
          if (routine.is_constructor() || routine.is_private) invalid(i, "method not callable");
          const RuntimeValue& receiver = lookup(values, i, s.receiver);
          if (!std::holds_alternative<ObjectHandle>(receiver)) invalid(i, "receiver is not an object");
          const std::uint32_t object = std::get<ObjectHandle>(receiver).id;
          values[i] = machine.invoke(object, s.routine, arguments(subject, values, i, s));
          result.kind = routine.return_type == ValueType::kVoid ? CallResult::Kind::kVoid
                                                                 : CallResult::Kind::kValue;
          result.value = values[i];
          continue;
        }
      }
      result.kind = CallResult::Kind::kValue;
      result.value = values[i];
    } catch (const Raised& r) {
      result.kind = CallResult::Kind::kException;
      result.exception = r.name;
      trace.aborted_at = i;
      values.resize(i);
      break;
    } catch (const OutOfSteps&) {
      result.kind = CallResult::Kind::kException;
      result.exception = "StepBudgetExceeded";
      trace.aborted_at = i;
      values.resize(i);
      break;
    }
  }
  return values;
}

class DistanceCalculator {
 public:
  DistanceCalculator(const SubjectClass& subject, const ExecutionTrace& trace)
      : subject_(subject), trace_(trace), outcome_memo_(2 * subject.branches().size(), -1.0) {}

  double target(const CoverageTarget& t) {
    switch (t.kind) {
      case TargetKind::kLine:
        if (t.statement == kNone) return trace_.routines_entered[t.routine] ? 0.0 : 1.0;
        return line(t.statement);
      case TargetKind::kBranchTrue:
        return outcome({t.branch, true});
      case TargetKind::kBranchFalse:
        return outcome({t.branch, false});
      case TargetKind::kWeakMutant: {
        const auto& spec = subject_.mutants()[t.mutant];
        if (!trace_.statement_hit(spec.statement)) return 1.0 + line(spec.statement);
        const double d = trace_.mutant_infection[t.mutant];
        // The line ran but evaluation stopped before reaching the site.
        if (d == kUnreached) return 1.0;
        return d == 0.0 ? 0.0 : normalize(d);
      }
    }
    return kUnreached;
  }

 private:
  double reach(std::uint32_t statement) {
    if (trace_.statement_hit(statement)) return 0.0;
    if (const auto& parent = subject_.statement_parent(statement)) {
      const double d = outcome(*parent);
      return d == 0.0 ? 1.0 : 1.0 + d;
    }
    return trace_.routines_entered[subject_.statement(statement).routine] ? 1.0 : 2.0;
  }

  double outcome(Outcome o) {
    double& memo = outcome_memo_[2 * o.branch + (o.value ? 0 : 1)];
    if (memo >= 0.0) return memo;
    const auto& rec = trace_.branches[o.branch];
    if (rec.hits > 0) {
      const double d = o.value ? rec.distance_true : rec.distance_false;
      memo = d == 0.0 ? 0.0 : normalize(d);
    } else {
      memo = reach(subject_.branches()[o.branch].statement);
    }
    return memo;
  }

  double line(std::uint32_t statement) {
    if (trace_.statement_hit(statement)) return 0.0;
    if (const auto& parent = subject_.statement_parent(statement)) {
      const double d = outcome(*parent);
      if (d > 0.0) return d;
    }
    return reach(statement);
  }

  const SubjectClass& subject_;
  const ExecutionTrace& trace_;
  std::vector<double> outcome_memo_;
};

}  // namespace

std::vector<int> ExecutionTrace::lines_hit(const SubjectClass& subject) const {
  std::set<int> lines;
  for (std::uint32_t i = 0; i < statements_hit.size(); ++i) {
    if (statements_hit[i]) lines.insert(subject.statement(i).line);
  }
  return {lines.begin(), lines.end()};
}

ExecutionTrace execute(const SubjectClass& subject, const TestCase& test, std::uint64_t step_budget) {
  ExecutionTrace trace;
  init_trace(subject, trace, test.length());
  Machine machine(subject, trace, step_budget);
  run(subject, test, machine, trace);
  return trace;
}

std::vector<ObservedValue> observe(const SubjectClass& subject, const TestCase& test, ExecutionTrace& trace,
                                   std::uint64_t step_budget) {
  init_trace(subject, trace, test.length());
  Machine machine(subject, trace, step_budget);
  const auto values = run(subject, test, machine, trace);

  ExecutionTrace scratch;
  std::vector<ObservedValue> observed;
  for (std::uint32_t i = 0; i < values.size(); ++i) {
    if (!std::holds_alternative<ObjectHandle>(values[i])) continue;
    for (std::uint32_t obs : subject.observers()) {
      init_trace(subject, scratch, 0);
      machine.set_trace(scratch, step_budget);
      ObservedValue v{i, obs, {}};
      try {
        v.result.value = machine.invoke(std::get<ObjectHandle>(values[i]).id, obs, {});
        v.result.kind = CallResult::Kind::kValue;
      } catch (const Raised& r) {
        v.result.kind = CallResult::Kind::kException;
        v.result.exception = r.name;
      } catch (const OutOfSteps&) {
        v.result.kind = CallResult::Kind::kException;
        v.result.exception = "StepBudgetExceeded";
      }
      observed.push_back(std::move(v));
    }
  }
  return observed;
}

double target_distance(const SubjectClass& subject, const ExecutionTrace& trace, const CoverageTarget& target) {
  return DistanceCalculator(subject, trace).target(target);
}

bool covers(const SubjectClass& subject, const ExecutionTrace& trace, const CoverageTarget& target) {
  return target_distance(subject, trace, target) == 0.0;
}

std::vector<double> target_distances(const SubjectClass& subject, const ExecutionTrace& trace) {
  DistanceCalculator calc(subject, trace);
  std::vector<double> out;
  out.reserve(subject.targets().size());
  for (const auto& t : subject.targets()) out.push_back(calc.target(t));
  return out;
}

std::vector<std::uint32_t> covered_targets(const SubjectClass& subject, const ExecutionTrace& trace) {
  const auto distances = target_distances(subject, trace);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < distances.size(); ++i) {
    if (distances[i] == 0.0) out.push_back(i);
  }
  return out;
}

}  // namespace readgen
