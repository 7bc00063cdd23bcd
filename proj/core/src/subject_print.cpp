#include <sstream>

#include "readgen/subject.hpp"

namespace readgen {
namespace {

int precedence(const Expr& e) {
  if (e.kind == Expr::Kind::kUnary) return 7;
  if (e.kind == Expr::Kind::kIntLit && e.int_value < 0) return 7;
  if (e.kind != Expr::Kind::kBinary) return 8;
  switch (e.binary) {
    case BinaryOp::kOr: return 1;
    case BinaryOp::kAnd: return 2;
    case BinaryOp::kEq:
    case BinaryOp::kNe: return 3;
    case BinaryOp::kLt:
    case BinaryOp::kLe:
    case BinaryOp::kGt:
    case BinaryOp::kGe: return 4;
    case BinaryOp::kAdd:
    case BinaryOp::kSub: return 5;
    default: return 6;
  }
}

void print_expr(std::ostream& out, const Expr& e);

void print_operand(std::ostream& out, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    out << '(';
    print_expr(out, e);
    out << ')';
  } else {
    print_expr(out, e);
  }
}

void print_expr(std::ostream& out, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kIntLit:
      out << e.int_value;
      break;
    case Expr::Kind::kBoolLit:
      out << (e.bool_value ? "true" : "false");
      break;
    case Expr::Kind::kVar:
      out << e.name;
      break;
    case Expr::Kind::kIndex:
      out << e.name << '[';
      print_expr(out, *e.operands[0]);
      out << ']';
      break;
    case Expr::Kind::kLength:
      out << e.name << ".length";
      break;
    case Expr::Kind::kNewArray:
      out << "new int[";
      print_expr(out, *e.operands[0]);
      out << ']';
      break;
    case Expr::Kind::kUnary:
      out << (e.unary == UnaryOp::kNeg ? "-" : "!");
      print_operand(out, *e.operands[0], 8);
      break;
    case Expr::Kind::kBinary: {
      const int prec = precedence(e);
      print_operand(out, *e.operands[0], prec);
      out << ' ' << to_string(e.binary) << ' ';
      print_operand(out, *e.operands[1], prec + 1);
      break;
    }
    case Expr::Kind::kCall:
      out << e.name << '(';
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) out << ", ";
        print_expr(out, *e.operands[i]);
      }
      out << ')';
      break;
  }
}

void indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

void print_block(std::ostream& out, const Block& block, int depth);

void print_if(std::ostream& out, const Stmt& s, int depth) {
  out << "if (";
  print_expr(out, *s.value);
  out << ") {\n";
  print_block(out, s.then_block, depth + 1);
  indent(out, depth);
  out << '}';
  if (s.else_block.size() == 1 && s.else_block[0]->kind == Stmt::Kind::kIf) {
    out << " else ";
    print_if(out, *s.else_block[0], depth);
    return;
  }
  if (!s.else_block.empty()) {
    out << " else {\n";
    print_block(out, s.else_block, depth + 1);
    indent(out, depth);
    out << '}';
  }
}

void print_stmt(std::ostream& out, const Stmt& s, int depth) {
  indent(out, depth);
  switch (s.kind) {
    case Stmt::Kind::kVarDecl:
      out << "var " << s.name << ": " << to_string(s.declared_type) << " = ";
      print_expr(out, *s.value);
      out << ';';
      break;
    case Stmt::Kind::kAssign:
      out << s.name << " = ";
      print_expr(out, *s.value);
      out << ';';
      break;
    case Stmt::Kind::kArrayStore:
      out << s.name << '[';
      print_expr(out, *s.index);
      out << "] = ";
      print_expr(out, *s.value);
      out << ';';
      break;
    case Stmt::Kind::kIf:
      print_if(out, s, depth);
      break;
    case Stmt::Kind::kWhile:
      out << "while (";
      print_expr(out, *s.value);
      out << ") bound " << s.bound << " {\n";
      print_block(out, s.then_block, depth + 1);
      indent(out, depth);
      out << '}';
      break;
    case Stmt::Kind::kReturn:
      out << "return";
      if (s.value) {
        out << ' ';
        print_expr(out, *s.value);
      }
      out << ';';
      break;
    case Stmt::Kind::kThrow:
      out << "throw " << s.name << ';';
      break;
    case Stmt::Kind::kCall:
      print_expr(out, *s.value);
      out << ';';
      break;
  }
  out << '\n';
}

void print_block(std::ostream& out, const Block& block, int depth) {
  for (const auto& s : block) print_stmt(out, *s, depth);
}

std::string signature(const MethodDecl& r) {
  std::ostringstream out;
  out << r.name << '(';
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    if (i) out << ", ";
    out << r.params[i].name << ": " << to_string(r.params[i].type);
  }
  out << ')';
  if (r.return_type != ValueType::kVoid) out << ": " << to_string(r.return_type);
  return out.str();
}

}  // namespace

std::string print_subject(const SubjectClass& subject) {
  std::ostringstream out;
  out << "class " << subject.name() << " {\n";
  for (const auto& f : subject.fields()) {
    out << "  field " << f.name << ": " << to_string(f.type) << " = ";
    switch (f.type) {
      case ValueType::kInt:
        out << f.int_init;
        break;
      case ValueType::kBool:
        out << (f.bool_init ? "true" : "false");
        break;
      default: {
        out << '[';
        for (std::size_t i = 0; i < f.array_init.size(); ++i) {
          if (i) out << ", ";
          out << f.array_init[i];
        }
        out << ']';
      }
    }
    out << ";\n";
  }
  for (const auto& r : subject.routines()) {
    out << '\n' << "  ";
    if (r.is_private) out << "private ";
    if (r.is_observer) out << "observer ";
    if (r.is_constructor()) {
      out << "ctor" << signature(r).substr(r.name.size());
    } else {
      out << "method " << signature(r);
    }
    if (r.body.empty()) {
      out << " {}\n";
      continue;
    }
    out << " {\n";
    print_block(out, r.body, 2);
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

std::string render_target_description(const CoverageTarget& target, const SubjectClass& subject) {
  const auto& routine = subject.routine(target.routine);
  std::ostringstream out;
  out << "Target: " << target.id << '\n';
  out << "Method: " << (routine.is_constructor() ? "constructor " : "") << signature(routine) << '\n';
  const std::string source = target.statement == kNone
                                 ? std::string(routine.is_constructor() ? "ctor" : "method ") +
                                       (routine.is_constructor() ? signature(routine).substr(routine.name.size())
                                                                 : signature(routine)) +
                                       " {}"
                                 : subject.statement(target.statement).source;
  out << "Line " << target.line << ": \"" << source << "\"\n";
  switch (target.kind) {
    case TargetKind::kLine:
      out << "Kind: line coverage\n";
      out << "Goal: reach line " << target.line << " (\"" << source << "\")\n";
      break;
    case TargetKind::kBranchTrue:
    case TargetKind::kBranchFalse: {
      const char* outcome = target.kind == TargetKind::kBranchTrue ? "true" : "false";
      out << "Kind: branch coverage (outcome " << outcome << ")\n";
      out << "Goal: evaluate the "
          << (subject.branches().at(target.branch).is_loop ? "loop condition" : "condition")
          << " on line " << target.line << " to " << outcome << '\n';
      break;
    }
    case TargetKind::kWeakMutant: {
      const auto& m = subject.mutants().at(target.mutant);
      out << "Kind: weak mutation (" << describe(m.op) << ")\n";
      out << "Goal: make an expression on line " << target.line
          << " evaluate differently once mutated by " << describe(m.op) << '\n';
      break;
    }
  }
  if (target.control_parent) {
    out << "Requires: " << subject.target(*target.control_parent).id << '\n';
  }
  return out.str();
}

}  // namespace readgen
