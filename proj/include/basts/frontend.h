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

// Lexer, parser and AST builder for the Java-like method language described
// in docs/grammar.md.

#ifndef BASTS_FRONTEND_H_
#define BASTS_FRONTEND_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "basts/ast.h"

namespace basts {

enum class TokenKind {
  kIdentifier,
  kKeyword,
  kNumberLit,
  kStringLit,
  kBoolLit,
  kOperator,
  kPunct,
};

const char* TokenKindName(TokenKind kind);

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kPunct;
  std::size_t offset = 0;  // byte offset in the source

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool IsLiteral() const {
    return kind == TokenKind::kNumberLit || kind == TokenKind::kStringLit ||
           kind == TokenKind::kBoolLit;
  }
};

inline constexpr std::string_view kNumToken = "<NUM>";
inline constexpr std::string_view kStrToken = "<STR>";
inline constexpr std::string_view kBoolToken = "<BOOL>";

// Splits source text into tokens. Comments and whitespace are skipped.
// Throws LexError with the byte offset of the first unrecognized character.
std::vector<Token> Tokenize(std::string_view source);

// Replaces number, string and boolean literal texts with <NUM>, <STR> and
// <BOOL>. Idempotent and length-preserving.
std::vector<Token> AbstractLiterals(std::vector<Token> tokens);

// camelCase / snake_case / acronym-aware identifier splitting. Subtokens are
// lowercased: "parseHTTPResponse" -> {"parse", "http", "response"}.
std::vector<std::string> SplitIdentifier(std::string_view name);

// Code-token sequence fed to the summarizer: identifiers are replaced by
// their subtokens, every other token keeps its text.
std::vector<std::string> CodeSequence(const std::vector<Token>& tokens);

// Reference comment words: lowercased, split on whitespace and punctuation,
// punctuation marks kept as separate words.
std::vector<std::string> TokenizeComment(std::string_view text);

// ---------------------------------------------------------------------------
// Parse tree.

struct TokenSpan {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  std::size_t size() const { return end - begin; }
  bool operator==(const TokenSpan&) const = default;
};

struct TypeRef {
  std::string name;
  bool primitive = false;
  int array_dims = 0;
  std::vector<TypeRef> args;

  std::string ToString() const;
};

enum class ExprKind {
  kLiteral,
  kName,
  kFieldAccess,  // children: {qualifier}; text: member
  kCall,         // children: {qualifier?, args...}; text: method name
  kBinary,       // text: operator
  kUnary,        // prefix operator
  kPostfix,      // postfix ++ / --
  kAssign,       // text: operator ("=", "+=", ...)
  kTernary,
  kNew,          // text: class name; children: args
  kNewArray,     // text: element type; children: dimension exprs
  kIndex,        // children: {array, index}
  kThis,
  kNull,
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  std::string text;
  std::vector<int> children;
  bool has_qualifier = false;  // kCall only
};

enum class StmtKind {
  kDecl,
  kAssign,
  kExprStmt,
  kIf,
  kWhile,
  kFor,
  kReturn,
  kBreak,
  kContinue,
  kBlock,
};

const char* StmtKindName(StmtKind kind);

using StmtId = int;

struct Statement {
  StmtKind kind = StmtKind::kExprStmt;
  TokenSpan span;    // whole statement, including nested bodies
  TokenSpan header;  // If/While/For: keyword through ')'; otherwise == span
  // Block: body statements. If: {then, else?}. While/For: {body}.
  std::vector<StmtId> children;
  std::optional<StmtId> for_init;
  std::optional<StmtId> for_update;  // synthetic statement, span has no ';'
  bool is_for_update = false;
  std::optional<int> cond;  // If/While/For condition expression
  std::optional<int> expr;  // Assign/ExprStmt/Return/update expression
  // kDecl
  TypeRef decl_type;
  std::string decl_name;
  std::optional<int> decl_init;

  bool IsCompound() const {
    return kind == StmtKind::kIf || kind == StmtKind::kWhile ||
           kind == StmtKind::kFor;
  }
};

struct Param {
  TypeRef type;
  std::string name;
};

struct Method {
  std::string name;
  std::vector<std::string> modifiers;
  TypeRef return_type;
  std::vector<Param> params;
  std::vector<Token> tokens;   // the whole method, declaration through '}'
  std::size_t body_open = 0;   // index of the body '{' in tokens
  std::vector<StmtId> body;    // top-level statements in source order
  std::vector<Statement> stmts;
  std::vector<Expr> exprs;

  const Statement& stmt(StmtId id) const { return stmts.at(static_cast<std::size_t>(id)); }
  std::vector<Token> DeclarationTokens() const {
    return {tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(body_open)};
  }
  // Statement ids in source pre-order. Blocks are skipped; a For loop
  // contributes init, header, body..., update.
  std::vector<StmtId> FlowStatements() const;
};

// Parses exactly one method. Throws ParseError on any syntax violation,
// including trailing tokens.
Method ParseMethod(const std::vector<Token>& tokens);

// Parses a file holding zero or more methods.
std::vector<Method> ParseFile(const std::vector<Token>& tokens);

// Builds the type_value AST of a parsed method. The root is a
// MethodDeclaration node; see docs/grammar.md for the node vocabulary.
Ast BuildAst(const Method& method);

}  // namespace basts

#endif  // BASTS_FRONTEND_H_
