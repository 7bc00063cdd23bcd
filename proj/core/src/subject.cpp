#include "readgen/subject.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "subject_internal.hpp"

namespace readgen {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::kVoid: return "void";
    case ValueType::kInt: return "int";
    case ValueType::kBool: return "bool";
    case ValueType::kIntArray: return "int[]";
    case ValueType::kObject: return "object";
  }
  return "?";
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
    case BinaryOp::kMod: return "%";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kEq: return "==";
    case BinaryOp::kNe: return "!=";
    case BinaryOp::kAnd: return "&&";
    case BinaryOp::kOr: return "||";
  }
  return "?";
}

bool is_relational(BinaryOp op) {
  return op == BinaryOp::kLt || op == BinaryOp::kLe || op == BinaryOp::kGt ||
         op == BinaryOp::kGe || op == BinaryOp::kEq || op == BinaryOp::kNe;
}

bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::kAdd || op == BinaryOp::kSub || op == BinaryOp::kMul ||
         op == BinaryOp::kDiv || op == BinaryOp::kMod;
}

std::string_view to_string(MutationOperator op) {
  switch (op) {
    case MutationOperator::kRor: return "ROR";
    case MutationOperator::kAor: return "AOR";
    case MutationOperator::kUoi: return "UOI";
  }
  return "?";
}

std::string_view describe(MutationOperator op) {
  switch (op) {
    case MutationOperator::kRor: return "relational operator replacement";
    case MutationOperator::kAor: return "arithmetic operator replacement";
    case MutationOperator::kUoi: return "unary operator insertion (negated operand)";
  }
  return "?";
}

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::kLine: return "LINE";
    case TargetKind::kBranchTrue: return "BRANCH_TRUE";
    case TargetKind::kBranchFalse: return "BRANCH_FALSE";
    case TargetKind::kWeakMutant: return "WEAK_MUTANT";
  }
  return "?";
}

SubjectError::SubjectError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error((kind == Kind::kSyntax ? "syntax error" : "semantic error") +
                         std::string(" at ") + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

std::uint32_t SubjectClass::outcome_target(Outcome outcome) const {
  return outcome.value ? branch_true_target_.at(outcome.branch)
                       : branch_false_target_.at(outcome.branch);
}

std::optional<std::uint32_t> SubjectClass::find_method(std::string_view name,
                                                       std::size_t arity) const {
  for (std::uint32_t i = 0; i < routines_.size(); ++i) {
    const auto& r = routines_[i];
    if (!r.is_constructor() && r.name == name && r.params.size() == arity) return i;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> SubjectClass::find_constructor(std::size_t arity) const {
  for (auto i : constructors_) {
    if (routines_[i].params.size() == arity) return i;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> SubjectClass::find_target(std::string_view id) const {
  for (const auto& t : targets_) {
    if (t.id == id) return t.index;
  }
  return std::nullopt;
}

// Resolves names and types, numbers statements, and derives branches,
// control dependencies, mutants, and coverage targets.
class SubjectBuilder {
 public:
  explicit SubjectBuilder(detail::ParsedClass parsed) : parsed_(std::move(parsed)) {}

  SubjectClass build() {
    SubjectClass s;
    s.name_ = parsed_.name;
    s.fields_ = std::move(parsed_.fields);
    s.routines_ = std::move(parsed_.routines);
    subject_ = &s;

    check_declarations();
    for (std::uint32_t r = 0; r < s.routines_.size(); ++r) resolve_routine(r);
    check_call_graph();
    check_observers();
    number_statements();
    enumerate_mutants();
    build_targets();
    return s;
  }

 private:
  [[noreturn]] static void semantic(int line, int column, const std::string& message) {
    throw SubjectError(SubjectError::Kind::kSemantic, line, column, message);
  }

  void check_declarations() {
    auto& s = *subject_;
    std::set<std::string> field_names;
    for (const auto& f : s.fields_) {
      if (!field_names.insert(f.name).second) semantic(0, 0, "duplicate field '" + f.name + "'");
    }
    if (std::none_of(s.routines_.begin(), s.routines_.end(),
                     [](const MethodDecl& m) { return m.is_constructor(); })) {
      MethodDecl ctor;
      ctor.kind = MethodDecl::Kind::kConstructor;
      ctor.name = s.name_;
      ctor.line = parsed_.line;
      s.routines_.insert(s.routines_.begin(), std::move(ctor));
    }
    std::set<std::pair<std::string, std::size_t>> signatures;
    std::set<std::size_t> ctor_arities;
    for (std::uint32_t i = 0; i < s.routines_.size(); ++i) {
      const auto& r = s.routines_[i];
      std::set<std::string> params;
      for (const auto& p : r.params) {
        if (!params.insert(p.name).second) semantic(r.line, 0, "duplicate parameter '" + p.name + "'");
        if (field_names.contains(p.name)) {
          semantic(r.line, 0, "parameter '" + p.name + "' shadows a field");
        }
      }
      if (r.is_constructor()) {
        if (!ctor_arities.insert(r.params.size()).second) {
          semantic(r.line, 0, "duplicate constructor arity " + std::to_string(r.params.size()));
        }
        s.constructors_.push_back(i);
        continue;
      }
      if (r.name == s.name_) semantic(r.line, 0, "method named like the class");
      if (!signatures.insert({r.name, r.params.size()}).second) {
        semantic(r.line, 0, "duplicate method '" + r.name + "' with arity " +
                                std::to_string(r.params.size()));
      }
      if (!r.is_private) s.public_methods_.push_back(i);
      if (r.is_observer) {
        if (!r.params.empty() || r.return_type == ValueType::kVoid || r.is_private) {
          semantic(r.line, 0, "observer '" + r.name + "' must be public, parameterless and non-void");
        }
        s.observers_.push_back(i);
      }
    }
  }

  struct Scope {
    std::unordered_map<std::string, std::pair<std::uint32_t, ValueType>> names;
  };

  void resolve_routine(std::uint32_t index) {
    auto& routine = subject_->routines_[index];
    current_ = index;
    scopes_.clear();
    scopes_.emplace_back();
    next_slot_ = 0;
    for (const auto& p : routine.params) {
      scopes_.back().names[p.name] = {next_slot_++, p.type};
    }
    max_slot_ = next_slot_;
    resolve_block(routine.body, routine);
    routine.local_count = max_slot_;
    if (routine.return_type != ValueType::kVoid && !terminates(routine.body)) {
      semantic(routine.line, 0, "method '" + routine.name + "' can finish without returning a value");
    }
  }

  static bool terminates(const Block& block) {
    return !block.empty() && terminates(*block.back());
  }

  static bool terminates(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::kReturn:
      case Stmt::Kind::kThrow:
        return true;
      case Stmt::Kind::kIf:
        return terminates(s.then_block) && terminates(s.else_block);
      default:
        return false;
    }
  }

  void resolve_block(Block& block, const MethodDecl& routine) {
    scopes_.emplace_back();
    const std::uint32_t saved_slot = next_slot_;
    for (std::size_t i = 0; i < block.size(); ++i) {
      Stmt& s = *block[i];
      if (i > 0 && terminates(*block[i - 1])) semantic(s.line, s.column, "unreachable statement");
      resolve_stmt(s, routine);
    }
    next_slot_ = saved_slot;
    scopes_.pop_back();
  }

  std::optional<std::pair<VarRef, ValueType>> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->names.find(name);
      if (found != it->names.end()) {
        return std::pair{VarRef{VarRef::Scope::kLocal, found->second.first}, found->second.second};
      }
    }
    const auto& fields = subject_->fields_;
    for (std::uint32_t i = 0; i < fields.size(); ++i) {
      if (fields[i].name == name) return std::pair{VarRef{VarRef::Scope::kField, i}, fields[i].type};
    }
    return std::nullopt;
  }

  std::pair<VarRef, ValueType> require_var(const std::string& name, int line, int column) const {
    auto found = lookup(name);
    if (!found) semantic(line, column, "undeclared variable '" + name + "'");
    return *found;
  }

  static void expect_type(const Expr& e, ValueType type, std::string_view context) {
    if (e.type != type) {
      semantic(e.line, e.column,
               "type mismatch in " + std::string(context) + ": expected " +
                   std::string(to_string(type)) + ", found " + std::string(to_string(e.type)));
    }
  }

  void resolve_stmt(Stmt& s, const MethodDecl& routine) {
    s.routine = current_;
    switch (s.kind) {
      case Stmt::Kind::kVarDecl: {
        resolve_expr(*s.value);
        expect_type(*s.value, s.declared_type, "initializer");
        if (lookup(s.name)) semantic(s.line, s.column, "'" + s.name + "' is already declared");
        s.target = VarRef{VarRef::Scope::kLocal, next_slot_};
        scopes_.back().names[s.name] = {next_slot_++, s.declared_type};
        max_slot_ = std::max(max_slot_, next_slot_);
        break;
      }
      case Stmt::Kind::kAssign: {
        auto [ref, type] = require_var(s.name, s.line, s.column);
        resolve_expr(*s.value);
        expect_type(*s.value, type, "assignment");
        s.target = ref;
        s.declared_type = type;
        break;
      }
      case Stmt::Kind::kArrayStore: {
        auto [ref, type] = require_var(s.name, s.line, s.column);
        if (type != ValueType::kIntArray) semantic(s.line, s.column, "'" + s.name + "' is not an array");
        resolve_expr(*s.index);
        expect_type(*s.index, ValueType::kInt, "array index");
        resolve_expr(*s.value);
        expect_type(*s.value, ValueType::kInt, "array element");
        s.target = ref;
        break;
      }
      case Stmt::Kind::kIf:
        resolve_expr(*s.value);
        expect_type(*s.value, ValueType::kBool, "condition");
        resolve_block(s.then_block, routine);
        resolve_block(s.else_block, routine);
        break;
      case Stmt::Kind::kWhile:
        resolve_expr(*s.value);
        expect_type(*s.value, ValueType::kBool, "loop condition");
        resolve_block(s.then_block, routine);
        break;
      case Stmt::Kind::kReturn:
        if (routine.return_type == ValueType::kVoid) {
          if (s.value) semantic(s.line, s.column, "void routine returns a value");
        } else {
          if (!s.value) semantic(s.line, s.column, "missing return value");
          resolve_expr(*s.value);
          expect_type(*s.value, routine.return_type, "return");
        }
        break;
      case Stmt::Kind::kThrow:
        break;
      case Stmt::Kind::kCall:
        resolve_expr(*s.value, /*allow_void=*/true);
        break;
    }
  }

  void resolve_expr(Expr& e, bool allow_void = false) {
    switch (e.kind) {
      case Expr::Kind::kIntLit:
        e.type = ValueType::kInt;
        break;
      case Expr::Kind::kBoolLit:
        e.type = ValueType::kBool;
        break;
      case Expr::Kind::kVar: {
        auto [ref, type] = require_var(e.name, e.line, e.column);
        e.var = ref;
        e.type = type;
        break;
      }
      case Expr::Kind::kIndex: {
        auto [ref, type] = require_var(e.name, e.line, e.column);
        if (type != ValueType::kIntArray) semantic(e.line, e.column, "'" + e.name + "' is not an array");
        e.var = ref;
        resolve_expr(*e.operands[0]);
        expect_type(*e.operands[0], ValueType::kInt, "array index");
        e.type = ValueType::kInt;
        break;
      }
      case Expr::Kind::kLength: {
        auto [ref, type] = require_var(e.name, e.line, e.column);
        if (type != ValueType::kIntArray) semantic(e.line, e.column, "'" + e.name + "' is not an array");
        e.var = ref;
        e.type = ValueType::kInt;
        break;
      }
      case Expr::Kind::kNewArray:
        resolve_expr(*e.operands[0]);
        expect_type(*e.operands[0], ValueType::kInt, "array size");
        e.type = ValueType::kIntArray;
        break;
      case Expr::Kind::kUnary:
        resolve_expr(*e.operands[0]);
        if (e.unary == UnaryOp::kNeg) {
          expect_type(*e.operands[0], ValueType::kInt, "negation");
          e.type = ValueType::kInt;
        } else {
          expect_type(*e.operands[0], ValueType::kBool, "logical not");
          e.type = ValueType::kBool;
        }
        break;
      case Expr::Kind::kBinary: {
        resolve_expr(*e.operands[0]);
        resolve_expr(*e.operands[1]);
        const auto& lhs = *e.operands[0];
        const auto& rhs = *e.operands[1];
        if (is_arithmetic(e.binary)) {
          expect_type(lhs, ValueType::kInt, "arithmetic");
          expect_type(rhs, ValueType::kInt, "arithmetic");
          e.type = ValueType::kInt;
        } else if (e.binary == BinaryOp::kAnd || e.binary == BinaryOp::kOr) {
          expect_type(lhs, ValueType::kBool, "logical operator");
          expect_type(rhs, ValueType::kBool, "logical operator");
          e.type = ValueType::kBool;
        } else if (e.binary == BinaryOp::kEq || e.binary == BinaryOp::kNe) {
          if (lhs.type != ValueType::kInt && lhs.type != ValueType::kBool) {
            semantic(e.line, e.column, "equality only applies to int or bool");
          }
          expect_type(rhs, lhs.type, "equality");
          e.type = ValueType::kBool;
        } else {
          expect_type(lhs, ValueType::kInt, "comparison");
          expect_type(rhs, ValueType::kInt, "comparison");
          e.type = ValueType::kBool;
        }
        break;
      }
      case Expr::Kind::kCall: {
        auto callee = subject_->find_method(e.name, e.operands.size());
        if (!callee) {
          semantic(e.line, e.column, "unknown method '" + e.name + "' with arity " +
                                         std::to_string(e.operands.size()));
        }
        const auto& target = subject_->routines_[*callee];
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
          resolve_expr(*e.operands[i]);
          expect_type(*e.operands[i], target.params[i].type, "argument");
        }
        e.callee = *callee;
        e.type = target.return_type;
        if (e.type == ValueType::kVoid && !allow_void) {
          semantic(e.line, e.column, "void method '" + e.name + "' used as a value");
        }
        calls_[current_].insert(*callee);
        break;
      }
    }
  }

  void check_call_graph() {
    // Recursion would make execution partial; reject any cycle.
    const auto n = subject_->routines_.size();
    std::vector<int> state(n, 0);
    std::function<void(std::uint32_t)> visit = [&](std::uint32_t r) {
      state[r] = 1;
      for (auto c : calls_[r]) {
        if (state[c] == 1) {
          semantic(subject_->routines_[r].line, 0,
                   "recursive call chain through '" + subject_->routines_[c].name + "'");
        }
        if (state[c] == 0) visit(c);
      }
      state[r] = 2;
    };
    for (std::uint32_t r = 0; r < n; ++r) {
      if (state[r] == 0) visit(r);
    }
  }

  void check_observers() {
    for (auto idx : subject_->observers_) {
      const auto& r = subject_->routines_[idx];
      check_pure(r.body, r);
    }
  }

  void check_pure(const Block& block, const MethodDecl& observer) {
    for (const auto& s : block) {
      if (s->kind == Stmt::Kind::kArrayStore ||
          (s->kind == Stmt::Kind::kAssign && s->target.scope == VarRef::Scope::kField)) {
        semantic(s->line, s->column, "observer '" + observer.name + "' modifies state");
      }
      check_pure_expr(s->value.get(), observer);
      check_pure_expr(s->index.get(), observer);
      check_pure(s->then_block, observer);
      check_pure(s->else_block, observer);
    }
  }

  void check_pure_expr(const Expr* e, const MethodDecl& observer) {
    if (!e) return;
    if (e->kind == Expr::Kind::kCall && !subject_->routines_[e->callee].is_observer) {
      semantic(e->line, e->column,
               "observer '" + observer.name + "' calls non-observer '" + e->name + "'");
    }
    for (const auto& op : e->operands) check_pure_expr(op.get(), observer);
  }

  void number_statements() {
    auto& s = *subject_;
    std::map<int, std::uint32_t> lines;
    for (std::uint32_t r = 0; r < s.routines_.size(); ++r) {
      number_block(s.routines_[r].body, std::nullopt, lines);
    }
    for (std::uint32_t r = 0; r < s.routines_.size(); ++r) {
      const auto& routine = s.routines_[r];
      if (routine.body.empty() && lines.contains(routine.line)) {
        semantic(routine.line, 0, "routine header shares a line with a statement");
      }
    }
  }

  void number_block(Block& block, std::optional<Outcome> parent, std::map<int, std::uint32_t>& lines) {
    auto& s = *subject_;
    std::optional<Outcome> current = parent;
    for (auto& stmt : block) {
      if (lines.contains(stmt->line)) {
        semantic(stmt->line, stmt->column, "more than one statement on line " + std::to_string(stmt->line));
      }
      stmt->id = static_cast<std::uint32_t>(s.statements_.size());
      lines[stmt->line] = stmt->id;
      s.statements_.push_back(stmt.get());
      s.statement_parents_.push_back(current);
      if (stmt->kind == Stmt::Kind::kIf || stmt->kind == Stmt::Kind::kWhile) {
        stmt->branch = static_cast<std::uint32_t>(s.branches_.size());
        s.branches_.push_back(BranchNode{stmt->id, stmt->routine, stmt->line,
                                         stmt->kind == Stmt::Kind::kWhile});
      }
      if (stmt->kind == Stmt::Kind::kIf) {
        number_block(stmt->then_block, Outcome{stmt->branch, true}, lines);
        number_block(stmt->else_block, Outcome{stmt->branch, false}, lines);
        // An arm that always exits makes the rest of the block depend on
        // the other outcome.
        const bool then_exits = terminates(stmt->then_block);
        const bool else_exits = terminates(stmt->else_block);
        if (then_exits && !else_exits) current = Outcome{stmt->branch, false};
        if (else_exits && !then_exits) current = Outcome{stmt->branch, true};
      } else if (stmt->kind == Stmt::Kind::kWhile) {
        number_block(stmt->then_block, Outcome{stmt->branch, true}, lines);
      }
    }
  }

  void enumerate_mutants() {
    auto& s = *subject_;
    for (const Stmt* stmt : s.statements_) {
      // const_cast: the builder owns the tree until build() returns.
      collect_mutants(const_cast<Expr*>(stmt->index.get()), *stmt, nullptr);
      collect_mutants(const_cast<Expr*>(stmt->value.get()), *stmt, nullptr);
    }
    std::set<std::int32_t> constants;
    for (const Stmt* stmt : s.statements_) {
      collect_constants(stmt->value.get(), constants);
      collect_constants(stmt->index.get(), constants);
    }
    for (const auto& f : s.fields_) {
      if (f.type == ValueType::kInt) constants.insert(f.int_init);
    }
    s.constants_.assign(constants.begin(), constants.end());
  }

  static void collect_constants(const Expr* e, std::set<std::int32_t>& out) {
    if (!e) return;
    if (e->kind == Expr::Kind::kIntLit) out.insert(e->int_value);
    for (const auto& op : e->operands) collect_constants(op.get(), out);
  }

  void add_mutant(Expr& site, const Stmt& stmt, MutationOperator op, std::string original,
                  std::string replacement, BinaryOp replacement_op) {
    auto& s = *subject_;
    MutantSpec m;
    m.op = op;
    m.site = &site;
    m.routine = stmt.routine;
    m.statement = stmt.id;
    m.line = stmt.line;
    m.column = site.column;
    m.original = std::move(original);
    m.replacement = std::move(replacement);
    m.replacement_op = replacement_op;
    site.mutants.push_back(static_cast<std::uint32_t>(s.mutants_.size()));
    s.mutants_.push_back(std::move(m));
  }

  void collect_mutants(Expr* e, const Stmt& stmt, const Expr* parent) {
    if (!e) return;
    static constexpr BinaryOp kRelational[] = {BinaryOp::kLt, BinaryOp::kLe, BinaryOp::kGt,
                                               BinaryOp::kGe, BinaryOp::kEq, BinaryOp::kNe};
    static constexpr BinaryOp kArithmetic[] = {BinaryOp::kAdd, BinaryOp::kSub, BinaryOp::kMul,
                                               BinaryOp::kDiv, BinaryOp::kMod};
    if (e->kind == Expr::Kind::kBinary) {
      const bool int_operands = e->operands[0]->type == ValueType::kInt;
      if (is_relational(e->binary) && int_operands) {
        for (auto op : kRelational) {
          if (op != e->binary) {
            add_mutant(*e, stmt, MutationOperator::kRor, std::string(to_string(e->binary)),
                       std::string(to_string(op)), op);
          }
        }
      } else if (is_arithmetic(e->binary)) {
        for (auto op : kArithmetic) {
          if (op != e->binary) {
            add_mutant(*e, stmt, MutationOperator::kAor, std::string(to_string(e->binary)),
                       std::string(to_string(op)), op);
          }
        }
      }
    } else if ((e->kind == Expr::Kind::kVar || e->kind == Expr::Kind::kIndex ||
                e->kind == Expr::Kind::kLength) &&
               e->type == ValueType::kInt && parent != nullptr &&
               parent->kind == Expr::Kind::kBinary &&
               parent->operands[0]->type == ValueType::kInt &&
               (is_relational(parent->binary) || is_arithmetic(parent->binary))) {
      add_mutant(*e, stmt, MutationOperator::kUoi, e->name, "-" + e->name, BinaryOp::kAdd);
    }
    for (auto& op : e->operands) collect_mutants(op.get(), stmt, e);
  }

  void build_targets() {
    auto& s = *subject_;
    std::vector<CoverageTarget> targets;
    auto push = [&](TargetKind kind, int line, std::uint32_t stmt, std::uint32_t routine) -> CoverageTarget& {
      CoverageTarget t;
      t.kind = kind;
      t.line = line;
      t.statement = stmt;
      t.routine = routine;
      targets.push_back(std::move(t));
      return targets.back();
    };
    // An empty routine body still has its implicit exit as an executable line.
    for (std::uint32_t r = 0; r < s.routines_.size(); ++r) {
      if (s.routines_[r].body.empty()) push(TargetKind::kLine, s.routines_[r].line, kNone, r);
    }
    for (const Stmt* stmt : s.statements_) {
      push(TargetKind::kLine, stmt->line, stmt->id, stmt->routine);
      if (stmt->branch != kNone) {
        push(TargetKind::kBranchTrue, stmt->line, stmt->id, stmt->routine).branch = stmt->branch;
        push(TargetKind::kBranchFalse, stmt->line, stmt->id, stmt->routine).branch = stmt->branch;
      }
    }
    for (std::uint32_t m = 0; m < s.mutants_.size(); ++m) {
      const auto& spec = s.mutants_[m];
      push(TargetKind::kWeakMutant, spec.line, spec.statement, spec.routine).mutant = m;
    }
    std::stable_sort(targets.begin(), targets.end(), [](const auto& a, const auto& b) {
      if (a.line != b.line) return a.line < b.line;
      if (a.kind != b.kind) return a.kind < b.kind;
      return a.mutant < b.mutant;
    });

    s.branch_true_target_.assign(s.branches_.size(), kNone);
    s.branch_false_target_.assign(s.branches_.size(), kNone);
    // Several statements or branches can share a line; later ones get an
    // ordinal suffix so ids stay unique.
    std::map<int, int> line_ordinal;
    std::map<int, int> true_ordinal;
    std::map<int, int> false_ordinal;
    std::map<int, int> mutant_ordinal;
    auto suffix = [](int ordinal) { return ordinal == 0 ? std::string() : "." + std::to_string(ordinal); };
    for (std::uint32_t i = 0; i < targets.size(); ++i) {
      auto& t = targets[i];
      t.index = i;
      const std::string line = std::to_string(t.line);
      switch (t.kind) {
        case TargetKind::kLine:
          t.id = "L" + line + suffix(line_ordinal[t.line]++);
          break;
        case TargetKind::kBranchTrue:
          t.id = "B" + line + suffix(true_ordinal[t.line]++) + "T";
          s.branch_true_target_[t.branch] = i;
          break;
        case TargetKind::kBranchFalse:
          t.id = "B" + line + suffix(false_ordinal[t.line]++) + "F";
          s.branch_false_target_[t.branch] = i;
          break;
        case TargetKind::kWeakMutant:
          t.id = "M" + line + "." + std::to_string(mutant_ordinal[t.line]++);
          break;
      }
    }
    for (auto& t : targets) {
      if (t.statement == kNone) continue;
      if (const auto& parent = s.statement_parents_[t.statement]) {
        t.control_parent = s.outcome_target(*parent);
      }
    }
    s.targets_ = std::move(targets);
  }

  detail::ParsedClass parsed_;
  SubjectClass* subject_ = nullptr;
  std::uint32_t current_ = 0;
  std::vector<Scope> scopes_;
  std::uint32_t next_slot_ = 0;
  std::uint32_t max_slot_ = 0;
  std::map<std::uint32_t, std::set<std::uint32_t>> calls_;
};

SubjectClass parse_subject(std::string_view text) {
  return SubjectBuilder(detail::parse_class(text)).build();
}

SubjectClass load_subject(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open subject file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_subject(buffer.str());
}

std::vector<CoverageTarget> extract_targets(const SubjectClass& subject) {
  return subject.targets();
}

std::vector<std::optional<std::uint32_t>> control_dependencies(const SubjectClass& subject) {
  std::vector<std::optional<std::uint32_t>> parents;
  parents.reserve(subject.targets().size());
  for (const auto& t : subject.targets()) parents.push_back(t.control_parent);
  return parents;
}

}  // namespace readgen
