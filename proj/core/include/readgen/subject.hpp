#pragma once

// Subject classes: the small deterministic language the engine generates
// tests for, plus the coverage targets derived from it.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace readgen {

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

enum class ValueType : std::uint8_t { kVoid, kInt, kBool, kIntArray, kObject };

std::string_view to_string(ValueType type);

class SubjectError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kSemantic };

  SubjectError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  int line_;
  int column_;
  std::string detail_;
};

enum class BinaryOp : std::uint8_t {
  kAdd, kSub, kMul, kDiv, kMod,
  kLt, kLe, kGt, kGe, kEq, kNe,
  kAnd, kOr,
};
enum class UnaryOp : std::uint8_t { kNeg, kNot };

std::string_view to_string(BinaryOp op);
bool is_relational(BinaryOp op);
bool is_arithmetic(BinaryOp op);

struct VarRef {
  enum class Scope : std::uint8_t { kField, kLocal };
  Scope scope = Scope::kLocal;
  std::uint32_t index = kNone;
};

struct Expr {
  enum class Kind : std::uint8_t {
    kIntLit, kBoolLit, kVar, kIndex, kLength, kNewArray, kUnary, kBinary, kCall,
  };

  Kind kind = Kind::kIntLit;
  ValueType type = ValueType::kVoid;
  std::int32_t int_value = 0;
  bool bool_value = false;
  // Variable read by kVar, the array variable of kIndex / kLength.
  VarRef var;
  std::string name;
  BinaryOp binary = BinaryOp::kAdd;
  UnaryOp unary = UnaryOp::kNeg;
  std::uint32_t callee = kNone;
  std::vector<std::unique_ptr<Expr>> operands;
  // Indices into SubjectClass::mutants() whose site is this node.
  std::vector<std::uint32_t> mutants;
  int line = 0;
  int column = 0;
};

struct Stmt;
using Block = std::vector<std::unique_ptr<Stmt>>;

struct Stmt {
  enum class Kind : std::uint8_t {
    kVarDecl, kAssign, kArrayStore, kIf, kWhile, kReturn, kThrow, kCall,
  };

  Kind kind = Kind::kCall;
  std::uint32_t id = kNone;  // dense, source order
  int line = 0;              // the statement's line id
  int column = 0;
  std::uint32_t routine = kNone;
  VarRef target;
  std::string name;  // declared/assigned variable, or thrown exception name
  ValueType declared_type = ValueType::kVoid;
  std::unique_ptr<Expr> value;
  std::unique_ptr<Expr> index;
  Block then_block;
  Block else_block;
  int bound = 0;
  std::uint32_t branch = kNone;
  std::string source;  // trimmed source text of the line
};

struct Parameter {
  std::string name;
  ValueType type = ValueType::kInt;
};

struct FieldDecl {
  std::string name;
  ValueType type = ValueType::kInt;
  std::int32_t int_init = 0;
  bool bool_init = false;
  std::vector<std::int32_t> array_init;
};

struct MethodDecl {
  enum class Kind : std::uint8_t { kConstructor, kMethod };

  Kind kind = Kind::kMethod;
  std::string name;
  std::vector<Parameter> params;
  ValueType return_type = ValueType::kVoid;
  bool is_private = false;
  bool is_observer = false;
  Block body;
  std::uint32_t local_count = 0;
  int line = 0;

  bool is_constructor() const noexcept { return kind == Kind::kConstructor; }
};

enum class MutationOperator : std::uint8_t { kRor, kAor, kUoi };

std::string_view to_string(MutationOperator op);
std::string_view describe(MutationOperator op);

struct MutantSpec {
  MutationOperator op = MutationOperator::kRor;
  const Expr* site = nullptr;
  std::uint32_t routine = kNone;
  std::uint32_t statement = kNone;
  int line = 0;
  int column = 0;
  std::string original;
  std::string replacement;
  BinaryOp replacement_op = BinaryOp::kAdd;  // ROR / AOR only
};

struct BranchNode {
  std::uint32_t statement = kNone;
  std::uint32_t routine = kNone;
  int line = 0;
  bool is_loop = false;
};

// A branch outcome that governs whether a statement executes.
struct Outcome {
  std::uint32_t branch = kNone;
  bool value = true;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

enum class TargetKind : std::uint8_t { kLine, kBranchTrue, kBranchFalse, kWeakMutant };

std::string_view to_string(TargetKind kind);

struct CoverageTarget {
  std::uint32_t index = kNone;
  std::string id;
  TargetKind kind = TargetKind::kLine;
  int line = 0;
  std::uint32_t statement = kNone;
  std::uint32_t routine = kNone;
  std::uint32_t branch = kNone;   // branch kinds
  std::uint32_t mutant = kNone;   // kWeakMutant
  std::optional<std::uint32_t> control_parent;
};

class SubjectClass {
 public:
  SubjectClass() = default;
  SubjectClass(SubjectClass&&) noexcept = default;
  SubjectClass& operator=(SubjectClass&&) noexcept = default;
  SubjectClass(const SubjectClass&) = delete;
  SubjectClass& operator=(const SubjectClass&) = delete;

  const std::string& name() const noexcept { return name_; }
  const std::vector<FieldDecl>& fields() const noexcept { return fields_; }
  const std::vector<MethodDecl>& routines() const noexcept { return routines_; }
  const MethodDecl& routine(std::uint32_t index) const { return routines_.at(index); }
  const std::vector<std::uint32_t>& constructors() const noexcept { return constructors_; }
  // Non-private, non-constructor routines callable from a test.
  const std::vector<std::uint32_t>& public_methods() const noexcept { return public_methods_; }
  const std::vector<std::uint32_t>& observers() const noexcept { return observers_; }
  const std::vector<const Stmt*>& statements() const noexcept { return statements_; }
  const Stmt& statement(std::uint32_t id) const { return *statements_.at(id); }
  const std::vector<BranchNode>& branches() const noexcept { return branches_; }
  const std::vector<MutantSpec>& mutants() const noexcept { return mutants_; }
  const std::vector<CoverageTarget>& targets() const noexcept { return targets_; }
  const CoverageTarget& target(std::uint32_t index) const { return targets_.at(index); }
  // Controlling outcome per statement id; nullopt for root-level statements.
  const std::optional<Outcome>& statement_parent(std::uint32_t id) const {
    return statement_parents_.at(id);
  }
  std::uint32_t outcome_target(Outcome outcome) const;
  // Integer literals appearing in the source, sorted and unique.
  const std::vector<std::int32_t>& constants() const noexcept { return constants_; }
  std::optional<std::uint32_t> find_method(std::string_view name, std::size_t arity) const;
  std::optional<std::uint32_t> find_constructor(std::size_t arity) const;
  std::optional<std::uint32_t> find_target(std::string_view id) const;

 private:
  friend class SubjectBuilder;

  std::string name_;
  std::vector<FieldDecl> fields_;
  std::vector<MethodDecl> routines_;
  std::vector<std::uint32_t> constructors_;
  std::vector<std::uint32_t> public_methods_;
  std::vector<std::uint32_t> observers_;
  std::vector<const Stmt*> statements_;
  std::vector<std::optional<Outcome>> statement_parents_;
  std::vector<BranchNode> branches_;
  std::vector<MutantSpec> mutants_;
  std::vector<CoverageTarget> targets_;
  std::vector<std::uint32_t> branch_true_target_;
  std::vector<std::uint32_t> branch_false_target_;
  std::vector<std::int32_t> constants_;
};

// Parses and resolves subject source. Throws SubjectError.
SubjectClass parse_subject(std::string_view text);
SubjectClass load_subject(const std::string& path);

// Canonical pretty-printed source; parse_subject(print_subject(s)) is
// structurally identical to s.
std::string print_subject(const SubjectClass& subject);

// Ordered by (line, kind, mutant index). Same as subject.targets().
std::vector<CoverageTarget> extract_targets(const SubjectClass& subject);

// control_parent per target index.
std::vector<std::optional<std::uint32_t>> control_dependencies(const SubjectClass& subject);

std::string render_target_description(const CoverageTarget& target, const SubjectClass& subject);

}  // namespace readgen
