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

#include <string>

#include "basts/frontend.h"

namespace basts {
namespace {

class AstBuilder {
 public:
  explicit AstBuilder(const Method& m) : m_(m) {}

  Ast Build() {
    int root = ast_.Add("MethodDeclaration", m_.name);
    for (const auto& mod : m_.modifiers) Link(root, ast_.Add("Modifier", mod));
    Link(root, Type(m_.return_type));
    for (const auto& p : m_.params) {
      int param = ast_.Add("FormalParameter", p.name);
      Link(param, Type(p.type));
      Link(root, param);
    }
    for (StmtId s : m_.body) Link(root, Stmt(s));
    return std::move(ast_);
  }

 private:
  void Link(int parent, int child) { ast_.AddChild(parent, child); }

  int Type(const TypeRef& t) {
    std::string label = t.name;
    for (int i = 0; i < t.array_dims; ++i) label += "[]";
    int node = ast_.Add(t.primitive ? "BasicType" : "ReferenceType", label);
    for (const auto& arg : t.args) Link(node, Type(arg));
    return node;
  }

  int Stmt(StmtId id) {
    const Statement& s = m_.stmt(id);
    switch (s.kind) {
      case StmtKind::kDecl: {
        int decl = ast_.Add("LocalVariableDeclaration");
        Link(decl, Type(s.decl_type));
        int var = ast_.Add("VariableDeclarator", s.decl_name);
        if (s.decl_init) Link(var, Expression(*s.decl_init));
        Link(decl, var);
        return decl;
      }
      case StmtKind::kAssign:
      case StmtKind::kExprStmt:
        return Expression(*s.expr);
      case StmtKind::kIf: {
        int node = ast_.Add("IfStatement");
        Link(node, Expression(*s.cond));
        for (StmtId c : s.children) Link(node, Stmt(c));
        return node;
      }
      case StmtKind::kWhile: {
        int node = ast_.Add("WhileStatement");
        Link(node, Expression(*s.cond));
        Link(node, Stmt(s.children.at(0)));
        return node;
      }
      case StmtKind::kFor: {
        int node = ast_.Add("ForStatement");
        int control = ast_.Add("ForControl");
        if (s.for_init) Link(control, Stmt(*s.for_init));
        if (s.cond) Link(control, Expression(*s.cond));
        if (s.for_update) Link(control, Stmt(*s.for_update));
        Link(node, control);
        Link(node, Stmt(s.children.at(0)));
        return node;
      }
      case StmtKind::kReturn: {
        int node = ast_.Add("ReturnStatement");
        if (s.expr) Link(node, Expression(*s.expr));
        return node;
      }
      case StmtKind::kBreak:
        return ast_.Add("BreakStatement");
      case StmtKind::kContinue:
        return ast_.Add("ContinueStatement");
      case StmtKind::kBlock: {
        int node = ast_.Add("BlockStatement");
        for (StmtId c : s.children) Link(node, Stmt(c));
        return node;
      }
    }
    return -1;
  }

  int Expression(int id) {
    const Expr& e = m_.exprs.at(static_cast<std::size_t>(id));
    int node = -1;
    switch (e.kind) {
      case ExprKind::kLiteral: node = ast_.Add("Literal", e.text); break;
      case ExprKind::kNull: node = ast_.Add("Literal", std::string("null")); break;
      case ExprKind::kName: node = ast_.Add("MemberReference", e.text); break;
      case ExprKind::kFieldAccess: node = ast_.Add("MemberReference", e.text); break;
      case ExprKind::kCall: node = ast_.Add("MethodInvocation", e.text); break;
      case ExprKind::kBinary: node = ast_.Add("BinaryOperation", e.text); break;
      case ExprKind::kUnary: node = ast_.Add("UnaryOperation", e.text); break;
      case ExprKind::kPostfix: node = ast_.Add("PostfixOperation", e.text); break;
      case ExprKind::kAssign: node = ast_.Add("Assignment", e.text); break;
      case ExprKind::kTernary: node = ast_.Add("TernaryExpression"); break;
      case ExprKind::kNew: node = ast_.Add("ClassCreator", e.text); break;
      case ExprKind::kNewArray: node = ast_.Add("ArrayCreator", e.text); break;
      case ExprKind::kIndex: node = ast_.Add("ArraySelector"); break;
      case ExprKind::kThis: node = ast_.Add("This"); break;
    }
    for (int c : e.children) Link(node, Expression(c));
    return node;
  }

  const Method& m_;
  Ast ast_;
};

}  // namespace

Ast BuildAst(const Method& method) { return AstBuilder(method).Build(); }

}  // namespace basts
