#include "subject_internal.hpp"

#include <cctype>
#include <charconv>
#include <unordered_set>

namespace readgen::detail {
namespace {

struct Token {
  enum class Kind { kIdent, kInt, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::int64_t value = 0;
  int line = 0;
  int column = 0;
};

[[noreturn]] void syntax_error(int line, int column, const std::string& message) {
  throw SubjectError(SubjectError::Kind::kSyntax, line, column, message);
}

std::vector<Token> tokenize(std::string_view text) {
  static constexpr std::string_view kTwoChar[] = {"==", "!=", "<=", ">=", "&&", "||"};
  static constexpr std::string_view kOneChar = "{}()[];,:=<>+-*/%!.";

  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      tok.kind = Token::Kind::kIdent;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Token::Kind::kInt;
      tok.text = std::string(text.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, tok.value);
      if (ec != std::errc() || tok.value > 2147483647LL) {
        syntax_error(line, column, "integer literal out of range: " + tok.text);
      }
      advance(j - i);
    } else {
      bool matched = false;
      for (auto two : kTwoChar) {
        if (text.substr(i, 2) == two) {
          tok.kind = Token::Kind::kPunct;
          tok.text = std::string(two);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kOneChar.find(c) == std::string_view::npos) {
          syntax_error(line, column, std::string("unexpected character '") + c + "'");
        }
        tok.kind = Token::Kind::kPunct;
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::kEnd;
  end.line = line;
  end.column = column;
  tokens.push_back(end);
  return tokens;
}

const std::unordered_set<std::string_view>& keywords() {
  static const std::unordered_set<std::string_view> kw = {
      "class", "field", "ctor", "method", "observer", "private", "var", "if", "else",
      "while", "bound", "return", "throw", "true", "false", "new", "int", "bool",
  };
  return kw;
}

class Parser {
 public:
  Parser(std::string_view source, std::vector<Token> tokens)
      : tokens_(std::move(tokens)) {
    std::size_t start = 0;
    while (start <= source.size()) {
      auto end = source.find('\n', start);
      if (end == std::string_view::npos) end = source.size();
      auto line = source.substr(start, end - start);
      auto b = line.find_first_not_of(" \t\r");
      auto e = line.find_last_not_of(" \t\r");
      lines_.emplace_back(b == std::string_view::npos ? std::string_view{}
                                                      : line.substr(b, e - b + 1));
      start = end + 1;
    }
  }

  ParsedClass parse_class() {
    ParsedClass out;
    expect_keyword("class");
    out.name = expect_ident("class name");
    out.line = previous().line;
    expect("{");
    while (!check("}")) {
      if (at_end()) syntax_error(peek().line, peek().column, "unterminated class body");
      if (check_keyword("field")) {
        out.fields.push_back(parse_field());
        continue;
      }
      bool is_private = false;
      bool is_observer = false;
      for (;;) {
        if (match_keyword("private")) {
          is_private = true;
        } else if (match_keyword("observer")) {
          is_observer = true;
        } else {
          break;
        }
      }
      if (check_keyword("ctor")) {
        const Token& tok = advance();
        if (is_private || is_observer) {
          syntax_error(tok.line, tok.column, "constructors take no modifiers");
        }
        MethodDecl ctor;
        ctor.kind = MethodDecl::Kind::kConstructor;
        ctor.name = out.name;
        ctor.line = tok.line;
        ctor.params = parse_params();
        ctor.body = parse_block();
        out.routines.push_back(std::move(ctor));
      } else if (check_keyword("method")) {
        const Token& tok = advance();
        MethodDecl method;
        method.line = tok.line;
        method.is_private = is_private;
        method.is_observer = is_observer;
        method.name = expect_ident("method name");
        method.params = parse_params();
        if (match(":")) method.return_type = parse_type();
        method.body = parse_block();
        out.routines.push_back(std::move(method));
      } else {
        syntax_error(peek().line, peek().column,
                     "expected 'field', 'ctor' or 'method', found '" + peek().text + "'");
      }
    }
    expect("}");
    if (!at_end()) syntax_error(peek().line, peek().column, "trailing input after class body");
    return out;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& previous() const { return tokens_[pos_ - 1]; }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  const Token& advance() {
    if (!at_end()) ++pos_;
    return previous();
  }
  bool check(std::string_view punct) const {
    return peek().kind == Token::Kind::kPunct && peek().text == punct;
  }
  bool check_keyword(std::string_view kw) const {
    return peek().kind == Token::Kind::kIdent && peek().text == kw;
  }
  bool match(std::string_view punct) {
    if (!check(punct)) return false;
    advance();
    return true;
  }
  bool match_keyword(std::string_view kw) {
    if (!check_keyword(kw)) return false;
    advance();
    return true;
  }
  void expect(std::string_view punct) {
    if (!match(punct)) {
      syntax_error(peek().line, peek().column,
                   "expected '" + std::string(punct) + "', found '" + describe(peek()) + "'");
    }
  }
  void expect_keyword(std::string_view kw) {
    if (!match_keyword(kw)) {
      syntax_error(peek().line, peek().column,
                   "expected '" + std::string(kw) + "', found '" + describe(peek()) + "'");
    }
  }
  std::string expect_ident(std::string_view what) {
    if (peek().kind != Token::Kind::kIdent || keywords().contains(peek().text)) {
      syntax_error(peek().line, peek().column,
                   "expected " + std::string(what) + ", found '" + describe(peek()) + "'");
    }
    return advance().text;
  }
  static std::string describe(const Token& tok) {
    return tok.kind == Token::Kind::kEnd ? std::string("end of input") : tok.text;
  }
  std::string source_line(int line) const {
    if (line <= 0 || static_cast<std::size_t>(line) > lines_.size()) return {};
    return std::string(lines_[line - 1]);
  }

  ValueType parse_type() {
    if (match_keyword("bool")) return ValueType::kBool;
    if (match_keyword("int")) {
      if (match("[")) {
        expect("]");
        return ValueType::kIntArray;
      }
      return ValueType::kInt;
    }
    syntax_error(peek().line, peek().column, "expected type, found '" + describe(peek()) + "'");
  }

  std::int32_t parse_signed_int() {
    const bool negative = match("-");
    if (peek().kind != Token::Kind::kInt) {
      syntax_error(peek().line, peek().column, "expected integer literal");
    }
    std::int64_t v = advance().value;
    if (negative) v = -v;
    if (v > 2147483647LL) syntax_error(previous().line, previous().column, "integer out of range");
    return static_cast<std::int32_t>(v);
  }

  FieldDecl parse_field() {
    expect_keyword("field");
    FieldDecl field;
    field.name = expect_ident("field name");
    expect(":");
    field.type = parse_type();
    if (match("=")) {
      const Token& at = peek();
      switch (field.type) {
        case ValueType::kInt:
          field.int_init = parse_signed_int();
          break;
        case ValueType::kBool:
          if (match_keyword("true")) {
            field.bool_init = true;
          } else if (!match_keyword("false")) {
            syntax_error(at.line, at.column, "expected boolean literal");
          }
          break;
        case ValueType::kIntArray:
          expect("[");
          if (!check("]")) {
            do {
              field.array_init.push_back(parse_signed_int());
            } while (match(","));
          }
          expect("]");
          break;
        default:
          break;
      }
    }
    expect(";");
    return field;
  }

  std::vector<Parameter> parse_params() {
    std::vector<Parameter> params;
    expect("(");
    if (!check(")")) {
      do {
        Parameter p;
        p.name = expect_ident("parameter name");
        expect(":");
        p.type = parse_type();
        params.push_back(std::move(p));
      } while (match(","));
    }
    expect(")");
    return params;
  }

  Block parse_block() {
    expect("{");
    Block block;
    while (!check("}")) {
      if (at_end()) syntax_error(peek().line, peek().column, "unterminated block");
      block.push_back(parse_statement());
    }
    expect("}");
    return block;
  }

  std::unique_ptr<Stmt> parse_statement() {
    auto stmt = std::make_unique<Stmt>();
    const Token& first = peek();
    stmt->line = first.line;
    stmt->column = first.column;
    stmt->source = source_line(first.line);

    if (match_keyword("var")) {
      stmt->kind = Stmt::Kind::kVarDecl;
      stmt->name = expect_ident("variable name");
      expect(":");
      stmt->declared_type = parse_type();
      expect("=");
      stmt->value = parse_expr();
      expect(";");
    } else if (match_keyword("if")) {
      stmt->kind = Stmt::Kind::kIf;
      expect("(");
      stmt->value = parse_expr();
      expect(")");
      stmt->then_block = parse_block();
      if (match_keyword("else")) {
        if (check_keyword("if")) {
          stmt->else_block.push_back(parse_statement());
        } else {
          stmt->else_block = parse_block();
        }
      }
    } else if (match_keyword("while")) {
      stmt->kind = Stmt::Kind::kWhile;
      expect("(");
      stmt->value = parse_expr();
      expect(")");
      if (!match_keyword("bound")) {
        throw SubjectError(SubjectError::Kind::kSemantic, peek().line, peek().column,
                           "loop without a static 'bound'");
      }
      if (peek().kind != Token::Kind::kInt) {
        syntax_error(peek().line, peek().column, "expected integer loop bound");
      }
      const std::int64_t bound = advance().value;
      if (bound < 1 || bound > 100000) {
        throw SubjectError(SubjectError::Kind::kSemantic, previous().line, previous().column,
                           "loop bound must be in [1, 100000]");
      }
      stmt->bound = static_cast<int>(bound);
      stmt->then_block = parse_block();
    } else if (match_keyword("return")) {
      stmt->kind = Stmt::Kind::kReturn;
      if (!check(";")) stmt->value = parse_expr();
      expect(";");
    } else if (match_keyword("throw")) {
      stmt->kind = Stmt::Kind::kThrow;
      stmt->name = expect_ident("exception name");
      expect(";");
    } else {
      const Token& name_tok = peek();
      std::string name = expect_ident("statement");
      if (check("(")) {
        stmt->kind = Stmt::Kind::kCall;
        stmt->value = parse_call(name, name_tok);
      } else if (match("[")) {
        stmt->kind = Stmt::Kind::kArrayStore;
        stmt->name = std::move(name);
        stmt->index = parse_expr();
        expect("]");
        expect("=");
        stmt->value = parse_expr();
      } else {
        stmt->kind = Stmt::Kind::kAssign;
        stmt->name = std::move(name);
        expect("=");
        stmt->value = parse_expr();
      }
      expect(";");
    }
    return stmt;
  }

  std::unique_ptr<Expr> make(Expr::Kind kind, const Token& at) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->line = at.line;
    e->column = at.column;
    return e;
  }

  std::unique_ptr<Expr> parse_call(std::string name, const Token& at) {
    auto call = make(Expr::Kind::kCall, at);
    call->name = std::move(name);
    expect("(");
    if (!check(")")) {
      do {
        call->operands.push_back(parse_expr());
      } while (match(","));
    }
    expect(")");
    return call;
  }

  std::unique_ptr<Expr> parse_expr() { return parse_binary(1); }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return -1;
  }

  static BinaryOp to_op(std::string_view op) {
    if (op == "+") return BinaryOp::kAdd;
    if (op == "-") return BinaryOp::kSub;
    if (op == "*") return BinaryOp::kMul;
    if (op == "/") return BinaryOp::kDiv;
    if (op == "%") return BinaryOp::kMod;
    if (op == "<") return BinaryOp::kLt;
    if (op == "<=") return BinaryOp::kLe;
    if (op == ">") return BinaryOp::kGt;
    if (op == ">=") return BinaryOp::kGe;
    if (op == "==") return BinaryOp::kEq;
    if (op == "!=") return BinaryOp::kNe;
    if (op == "&&") return BinaryOp::kAnd;
    return BinaryOp::kOr;
  }

  std::unique_ptr<Expr> parse_binary(int min_prec) {
    auto lhs = parse_unary();
    for (;;) {
      if (peek().kind != Token::Kind::kPunct) break;
      const int prec = precedence(peek().text);
      if (prec < min_prec) break;
      const Token& op_tok = advance();
      auto rhs = parse_binary(prec + 1);
      auto node = make(Expr::Kind::kBinary, op_tok);
      node->binary = to_op(op_tok.text);
      node->operands.push_back(std::move(lhs));
      node->operands.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parse_unary() {
    if (check("-") || check("!")) {
      const Token& op_tok = advance();
      auto operand = parse_unary();
      if (op_tok.text == "-" && operand->kind == Expr::Kind::kIntLit && operand->int_value >= 0) {
        // Fold negative literals so they read back as literals.
        operand->int_value = -operand->int_value;
        operand->line = op_tok.line;
        operand->column = op_tok.column;
        return operand;
      }
      auto node = make(Expr::Kind::kUnary, op_tok);
      node->unary = op_tok.text == "-" ? UnaryOp::kNeg : UnaryOp::kNot;
      node->operands.push_back(std::move(operand));
      return node;
    }
    return parse_primary();
  }

  std::unique_ptr<Expr> parse_primary() {
    const Token& tok = peek();
    if (tok.kind == Token::Kind::kInt) {
      advance();
      auto e = make(Expr::Kind::kIntLit, tok);
      e->int_value = static_cast<std::int32_t>(tok.value);
      return e;
    }
    if (match_keyword("true") || match_keyword("false")) {
      auto e = make(Expr::Kind::kBoolLit, tok);
      e->bool_value = previous().text == "true";
      return e;
    }
    if (match_keyword("new")) {
      expect_keyword("int");
      auto e = make(Expr::Kind::kNewArray, tok);
      expect("[");
      e->operands.push_back(parse_expr());
      expect("]");
      return e;
    }
    if (match("(")) {
      auto inner = parse_expr();
      expect(")");
      return inner;
    }
    std::string name = expect_ident("expression");
    if (check("(")) return parse_call(std::move(name), tok);
    if (match("[")) {
      auto e = make(Expr::Kind::kIndex, tok);
      e->name = std::move(name);
      e->operands.push_back(parse_expr());
      expect("]");
      return e;
    }
    if (match(".")) {
      const Token& member = peek();
      if (expect_ident("member") != "length") {
        syntax_error(member.line, member.column, "only '.length' is supported");
      }
      auto e = make(Expr::Kind::kLength, tok);
      e->name = std::move(name);
      return e;
    }
    auto e = make(Expr::Kind::kVar, tok);
    e->name = std::move(name);
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string_view> lines_;
};

}  // namespace

ParsedClass parse_class(std::string_view text) {
  Parser parser(text, tokenize(text));
  return parser.parse_class();
}

}  // namespace readgen::detail
