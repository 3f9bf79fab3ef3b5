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

#ifndef BASTS_CFG_H_
#define BASTS_CFG_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "basts/frontend.h"

namespace basts {

enum class CfgNodeKind { kStart, kEnd, kStmt };

struct CfgNode {
  int id = 0;
  CfgNodeKind kind = CfgNodeKind::kStmt;
  std::optional<StmtId> stmt;  // present iff kind == kStmt
};

using Edge = std::pair<int, int>;

// Statement-level control-flow graph with virtual start and end nodes.
//
// Node ids are dense: the start node is 0, statements follow in source
// pre-order (see Method::FlowStatements), the end node is last. Edges are
// kept sorted and unique.
struct Cfg {
  std::vector<CfgNode> nodes;
  std::vector<Edge> edges;
  int entry = 0;
  int exit = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  std::vector<std::vector<int>> Successors() const;
  std::vector<std::vector<int>> Predecessors() const;
  // CFG node holding the statement, if any.
  std::optional<int> NodeOf(StmtId stmt) const;
  bool IsVirtual(int id) const { return nodes.at(static_cast<std::size_t>(id)).kind != CfgNodeKind::kStmt; }
};

// Wires one node per simple statement and per If/While/For header. Block
// bodies are inlined; for loops run init -> header -> body -> update ->
// header. Loop headers always keep their exit edge, even for constant
// conditions. Throws CfgError for break/continue outside a loop and for
// statements no path reaches.
Cfg BuildCfg(const Method& method);

// True when every node lies on some entry -> exit path.
bool EveryNodeOnEntryExitPath(const Cfg& cfg);

// Graphviz text. With a method, statement nodes are labelled by their
// source tokens.
std::string CfgToDot(const Cfg& cfg, const Method* method = nullptr);

// Token text of the statement behind a node ("if ( c )" for headers).
std::string NodeLabel(const Cfg& cfg, int id, const Method* method);

}  // namespace basts

#endif  // BASTS_CFG_H_
