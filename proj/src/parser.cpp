// Copyright 2026 The BASTS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive-descent parser for the method language. The grammar is in
// docs/grammar.md; one function per nonterminal.

#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "basts/errors.h"
#include "basts/frontend.h"

namespace basts {

namespace {

std::string JoinExpected(const std::vector<std::string>& expected) {
  std::string s;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) s += ", ";
    s += "'" + expected[i] + "'";
  }
  return s;
}

bool IsPrimitive(const Token& t) {
  if (t.kind != TokenKind::kKeyword) return false;
  static const char* kPrims[] = {"void", "int",  "long", "double", "float",
                                 "boolean", "char", "byte", "short"};
  for (const char* p : kPrims)
    if (t.text == p) return true;
  return false;
}

bool IsModifier(const Token& t) {
  return t.kind == TokenKind::kKeyword &&
         (t.text == "public" || t.text == "private" || t.text == "protected" ||
          t.text == "static" || t.text == "final");
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t pos)
      : toks_(tokens), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  bool AtEnd() const { return pos_ >= toks_.size(); }

  // Parses a method starting at the current position. Statement spans are
  // relative to `base`, the index of the method's first token.
  Method ParseMethodAt() {
    Method m;
    base_ = pos_;
    method_ = &m;
    while (!AtEnd() && IsModifier(Peek())) m.modifiers.push_back(Next().text);
    m.return_type = ParseType();
    m.name = ExpectIdent();
    Expect("(");
    if (!PeekIs(")")) {
      do {
        Param p;
        p.type = ParseType();
        p.name = ExpectIdent();
        m.params.push_back(std::move(p));
      } while (Accept(","));
    }
    Expect(")");
    if (!PeekIs("{")) Fail({"{"});
    m.body_open = pos_ - base_;
    Next();
    while (!PeekIs("}")) {
      if (AtEnd()) Fail({"}"});
      m.body.push_back(ParseStatement());
    }
    Next();
    m.tokens.assign(toks_.begin() + static_cast<std::ptrdiff_t>(base_),
                    toks_.begin() + static_cast<std::ptrdiff_t>(pos_));
    method_ = nullptr;
    return m;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& Peek(std::size_t ahead = 0) const {
    static const Token kEof{"<eof>", TokenKind::kPunct, 0};
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : kEof;
  }
  bool PeekIs(std::string_view text, std::size_t ahead = 0) const {
    if (pos_ + ahead >= toks_.size()) return false;
    const Token& t = toks_[pos_ + ahead];
    return t.text == text && t.kind != TokenKind::kStringLit &&
           t.kind != TokenKind::kIdentifier;
  }
  const Token& Next() {
    if (AtEnd()) Fail({"<token>"});
    return toks_[pos_++];
  }
  bool Accept(std::string_view text) {
    if (PeekIs(text)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void Expect(std::string_view text) {
    if (!Accept(text)) Fail({std::string(text)});
  }
  std::string ExpectIdent() {
    if (AtEnd() || Peek().kind != TokenKind::kIdentifier) Fail({"<identifier>"});
    return Next().text;
  }
  [[noreturn]] void Fail(std::vector<std::string> expected) const {
    throw ParseError(pos_, std::move(expected), AtEnd() ? "<eof>" : Peek().text);
  }
  std::size_t Rel() const { return pos_ - base_; }

  // -- types ----------------------------------------------------------------

  TypeRef ParseType() {
    TypeRef t;
    if (!AtEnd() && IsPrimitive(Peek())) {
      t.name = Next().text;
      t.primitive = true;
    } else {
      t.name = ExpectIdent();
      while (PeekIs(".") && Peek(1).kind == TokenKind::kIdentifier) {
        Next();
        t.name += "." + Next().text;
      }
      if (Accept("<")) {
        if (!PeekIs(">")) {
          do {
            if (Accept("?")) {
              t.args.push_back(TypeRef{"?", false, 0, {}});
            } else {
              t.args.push_back(ParseType());
            }
          } while (Accept(","));
        }
        Expect(">");
      }
    }
    while (PeekIs("[") && PeekIs("]", 1)) {
      pos_ += 2;
      ++t.array_dims;
    }
    return t;
  }

  // Declaration lookahead: Type Identifier ('=' | ';').
  bool LooksLikeDecl() {
    if (AtEnd()) return false;
    if (IsPrimitive(Peek())) return true;
    if (Peek().kind != TokenKind::kIdentifier) return false;
    const std::size_t save = pos_;
    bool ok = false;
    try {
      ParseType();
      ok = !AtEnd() && Peek().kind == TokenKind::kIdentifier &&
           (PeekIs("=", 1) || PeekIs(";", 1));
    } catch (const ParseError&) {
      ok = false;
    }
    pos_ = save;
    return ok;
  }

  // -- statements -----------------------------------------------------------

  StmtId NewStmt(StmtKind kind, std::size_t begin) {
    Statement s;
    s.kind = kind;
    s.span.begin = begin;
    method_->stmts.push_back(std::move(s));
    return static_cast<StmtId>(method_->stmts.size() - 1);
  }
  Statement& S(StmtId id) { return method_->stmts[static_cast<std::size_t>(id)]; }
  void Close(StmtId id) {
    S(id).span.end = Rel();
    if (!S(id).IsCompound()) S(id).header = S(id).span;
  }

  StmtId ParseStatement() {
    const std::size_t begin = Rel();
    if (PeekIs("{")) {
      StmtId id = NewStmt(StmtKind::kBlock, begin);
      Next();
      while (!PeekIs("}")) {
        if (AtEnd()) Fail({"}"});
        StmtId child = ParseStatement();
        S(id).children.push_back(child);
      }
      Next();
      Close(id);
      return id;
    }
    if (PeekIs("if")) {
      StmtId id = NewStmt(StmtKind::kIf, begin);
      Next();
      Expect("(");
      int cond = ParseExpr();
      Expect(")");
      S(id).cond = cond;
      S(id).header = {begin, Rel()};
      StmtId then_branch = ParseStatement();
      S(id).children.push_back(then_branch);
      if (Accept("else")) {
        StmtId else_branch = ParseStatement();
        S(id).children.push_back(else_branch);
      }
      Close(id);
      return id;
    }
    if (PeekIs("while")) {
      StmtId id = NewStmt(StmtKind::kWhile, begin);
      Next();
      Expect("(");
      int cond = ParseExpr();
      Expect(")");
      S(id).cond = cond;
      S(id).header = {begin, Rel()};
      StmtId body = ParseStatement();
      S(id).children.push_back(body);
      Close(id);
      return id;
    }
    if (PeekIs("for")) return ParseFor(begin);
    if (PeekIs("return")) {
      StmtId id = NewStmt(StmtKind::kReturn, begin);
      Next();
      if (!PeekIs(";")) {
        int e = ParseExpr();
        S(id).expr = e;
      }
      Expect(";");
      Close(id);
      return id;
    }
    if (PeekIs("break") || PeekIs("continue")) {
      StmtId id = NewStmt(PeekIs("break") ? StmtKind::kBreak : StmtKind::kContinue,
                          begin);
      Next();
      Expect(";");
      Close(id);
      return id;
    }
    StmtId id = ParseSimple(begin);
    Expect(";");
    Close(id);
    return id;
  }

  // Declaration or expression statement, without the trailing ';'.
  StmtId ParseSimple(std::size_t begin) {
    if (LooksLikeDecl()) {
      StmtId id = NewStmt(StmtKind::kDecl, begin);
      TypeRef type = ParseType();
      std::string name = ExpectIdent();
      S(id).decl_type = std::move(type);
      S(id).decl_name = std::move(name);
      if (Accept("=")) {
        int init = ParseExpr();
        S(id).decl_init = init;
      }
      return id;
    }
    int e = ParseExpr();
    StmtKind kind = method_->exprs[static_cast<std::size_t>(e)].kind == ExprKind::kAssign
                        ? StmtKind::kAssign
                        : StmtKind::kExprStmt;
    StmtId id = NewStmt(kind, begin);
    S(id).expr = e;
    return id;
  }

  StmtId ParseFor(std::size_t begin) {
    StmtId id = NewStmt(StmtKind::kFor, begin);
    Next();
    Expect("(");
    if (!PeekIs(";")) {
      StmtId init = ParseSimple(Rel());
      Expect(";");
      Close(init);
      S(id).for_init = init;
    } else {
      Next();
    }
    if (!PeekIs(";")) {
      int cond = ParseExpr();
      S(id).cond = cond;
    }
    Expect(";");
    if (!PeekIs(")")) {
      const std::size_t ubegin = Rel();
      int e = ParseExpr();
      StmtKind kind = method_->exprs[static_cast<std::size_t>(e)].kind == ExprKind::kAssign
                          ? StmtKind::kAssign
                          : StmtKind::kExprStmt;
      StmtId update = NewStmt(kind, ubegin);
      S(update).expr = e;
      S(update).is_for_update = true;
      Close(update);
      S(id).for_update = update;
    }
    Expect(")");
    S(id).header = {begin, Rel()};
    StmtId body = ParseStatement();
    S(id).children.push_back(body);
    Close(id);
    return id;
  }

  // -- expressions ----------------------------------------------------------

  int NewExpr(ExprKind kind, std::string text, std::vector<int> children = {}) {
    Expr e;
    e.kind = kind;
    e.text = std::move(text);
    e.children = std::move(children);
    method_->exprs.push_back(std::move(e));
    return static_cast<int>(method_->exprs.size() - 1);
  }

  int ParseExpr() { return ParseAssignment(); }

  int ParseAssignment() {
    int lhs = ParseTernary();
    static const char* kAssignOps[] = {"=",  "+=", "-=", "*=", "/=",
                                       "%=", "&=", "|=", "^=", "<<="};
    for (const char* op : kAssignOps) {
      if (PeekIs(op) && Peek().kind == TokenKind::kOperator) {
        Next();
        int rhs = ParseAssignment();
        return NewExpr(ExprKind::kAssign, op, {lhs, rhs});
      }
    }
    return lhs;
  }

  int ParseTernary() {
    int cond = ParseBinary(0);
    if (Accept("?")) {
      int a = ParseExpr();
      Expect(":");
      int b = ParseTernary();
      return NewExpr(ExprKind::kTernary, "?:", {cond, a, b});
    }
    return cond;
  }

  // Binary precedence levels, loosest first.
  static const std::vector<std::vector<std::string>>& Levels() {
    static const std::vector<std::vector<std::string>> kLevels = {
        {"||"}, {"&&"}, {"|"}, {"^"}, {"&"}, {"==", "!="},
        {"<", ">", "<=", ">="}, {"<<", ">>"}, {"+", "-"}, {"*", "/", "%"},
    };
    return kLevels;
  }

  // Returns the operator at the cursor for this level and its token count.
  std::pair<std::string, std::size_t> PeekBinaryOp(std::size_t level) const {
    if (AtEnd() || Peek().kind != TokenKind::kOperator) return {"", 0};
    const Token& t = Peek();
    // Adjacent '>' '>' is a right shift.
    if (t.text == ">" && pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == ">" &&
        toks_[pos_ + 1].offset == t.offset + 1) {
      return level == 7 ? std::pair<std::string, std::size_t>{">>", 2}
                        : std::pair<std::string, std::size_t>{"", 0};
    }
    for (const auto& op : Levels()[level])
      if (t.text == op) return {op, 1};
    return {"", 0};
  }

  int ParseBinary(std::size_t level) {
    if (level == Levels().size()) return ParseUnary();
    int lhs = ParseBinary(level + 1);
    for (;;) {
      auto [op, width] = PeekBinaryOp(level);
      if (width == 0) return lhs;
      pos_ += width;
      int rhs = ParseBinary(level + 1);
      lhs = NewExpr(ExprKind::kBinary, op, {lhs, rhs});
    }
  }

  int ParseUnary() {
    if (!AtEnd() && Peek().kind == TokenKind::kOperator) {
      const std::string& t = Peek().text;
      if (t == "-" || t == "+" || t == "!" || t == "~" || t == "++" || t == "--") {
        std::string op = Next().text;
        int operand = ParseUnary();
        return NewExpr(ExprKind::kUnary, op, {operand});
      }
    }
    return ParsePostfix(ParsePrimary());
  }

  std::vector<int> ParseArgs() {
    std::vector<int> args;
    Expect("(");
    if (!PeekIs(")")) {
      do {
        args.push_back(ParseExpr());
      } while (Accept(","));
    }
    Expect(")");
    return args;
  }

  int ParsePostfix(int e) {
    for (;;) {
      if (PeekIs(".")) {
        Next();
        std::string member = ExpectIdent();
        if (PeekIs("(")) {
          std::vector<int> children{e};
          for (int a : ParseArgs()) children.push_back(a);
          e = NewExpr(ExprKind::kCall, member, std::move(children));
          method_->exprs[static_cast<std::size_t>(e)].has_qualifier = true;
        } else {
          e = NewExpr(ExprKind::kFieldAccess, member, {e});
        }
      } else if (PeekIs("[")) {
        Next();
        int index = ParseExpr();
        Expect("]");
        e = NewExpr(ExprKind::kIndex, "[]", {e, index});
      } else if ((PeekIs("++") || PeekIs("--")) &&
                 Peek().kind == TokenKind::kOperator) {
        e = NewExpr(ExprKind::kPostfix, Next().text, {e});
      } else {
        return e;
      }
    }
  }

  int ParsePrimary() {
    if (AtEnd()) Fail({"<expression>"});
    const Token& t = Peek();
    if (t.IsLiteral()) {
      Next();
      return NewExpr(ExprKind::kLiteral, t.text);
    }
    if (t.kind == TokenKind::kIdentifier) {
      Next();
      if (PeekIs("(")) return NewExpr(ExprKind::kCall, t.text, ParseArgs());
      return NewExpr(ExprKind::kName, t.text);
    }
    if (PeekIs("null")) {
      Next();
      return NewExpr(ExprKind::kNull, "null");
    }
    if (PeekIs("this")) {
      Next();
      return NewExpr(ExprKind::kThis, "this");
    }
    if (PeekIs("(")) {
      Next();
      int e = ParseExpr();
      Expect(")");
      return e;
    }
    if (PeekIs("new")) {
      Next();
      TypeRef type = ParseType();
      if (PeekIs("[")) {
        std::vector<int> dims;
        while (Accept("[")) {
          dims.push_back(ParseExpr());
          Expect("]");
        }
        return NewExpr(ExprKind::kNewArray, type.ToString(), std::move(dims));
      }
      return NewExpr(ExprKind::kNew, type.ToString(), ParseArgs());
    }
    Fail({"<expression>"});
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  std::size_t base_ = 0;
  Method* method_ = nullptr;
};

}  // namespace

ParseError::ParseError(std::size_t token_index, std::vector<std::string> expected,
                       const std::string& found)
    : Error("parse error at token " + std::to_string(token_index) + ": expected " +
            JoinExpected(expected) + ", found '" + found + "'"),
      token_index_(token_index),
      expected_(std::move(expected)) {}

std::string TypeRef::ToString() const {
  std::string s = name;
  if (!args.empty()) {
    s += "<";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ",";
      s += args[i].ToString();
    }
    s += ">";
  }
  for (int i = 0; i < array_dims; ++i) s += "[]";
  return s;
}

const char* StmtKindName(StmtKind kind) {
  switch (kind) {
    case StmtKind::kDecl: return "Decl";
    case StmtKind::kAssign: return "Assign";
    case StmtKind::kExprStmt: return "ExprStmt";
    case StmtKind::kIf: return "If";
    case StmtKind::kWhile: return "While";
    case StmtKind::kFor: return "For";
    case StmtKind::kReturn: return "Return";
    case StmtKind::kBreak: return "Break";
    case StmtKind::kContinue: return "Continue";
    case StmtKind::kBlock: return "Block";
  }
  return "?";
}

std::vector<StmtId> Method::FlowStatements() const {
  std::vector<StmtId> out;
  std::function<void(StmtId)> visit = [&](StmtId id) {
    const Statement& s = stmt(id);
    if (s.kind == StmtKind::kBlock) {
      for (StmtId c : s.children) visit(c);
      return;
    }
    if (s.kind == StmtKind::kFor && s.for_init) out.push_back(*s.for_init);
    out.push_back(id);
    for (StmtId c : s.children) visit(c);
    if (s.kind == StmtKind::kFor && s.for_update) out.push_back(*s.for_update);
  };
  for (StmtId id : body) visit(id);
  return out;
}

Method ParseMethod(const std::vector<Token>& tokens) {
  Parser p(tokens, 0);
  Method m = p.ParseMethodAt();
  if (!p.AtEnd())
    throw ParseError(p.pos(), {"<eof>"}, tokens[p.pos()].text);
  return m;
}

std::vector<Method> ParseFile(const std::vector<Token>& tokens) {
  std::vector<Method> methods;
  Parser p(tokens, 0);
  while (!p.AtEnd()) methods.push_back(p.ParseMethodAt());
  return methods;
}

}  // namespace basts
