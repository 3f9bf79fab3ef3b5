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

// Block-wise code splitting: the dominator tree (virtual nodes removed) is
// cut at every edge whose source has more than one child or whose target
// has more than one parent. Each remaining component is one split.

#ifndef BASTS_SPLITTER_H_
#define BASTS_SPLITTER_H_

#include <vector>

#include "basts/ast.h"
#include "basts/cfg.h"
#include "basts/dominators.h"
#include "basts/frontend.h"

namespace basts {

struct CodeSplit {
  int split_id = 0;
  std::vector<StmtId> statements;  // execution-ordered source order
  bool includes_declaration = true;
};

struct SplitGraph {
  std::vector<CodeSplit> splits;
  std::vector<Edge> successor_edges;  // (a -> b) split ids, sorted, unique

  bool HasEdge(int a, int b) const;
};

struct SplitAst {
  int split_id = 0;
  Ast root;
};

// Split ids follow the smallest CFG node id in each block, so they are
// deterministic and ordered by first statement.
SplitGraph PartitionBlocks(const DomTree& domtree, const Cfg& cfg);

// Declaration tokens, then '{', the split's statements, '}'. Control-flow
// headers keep their surrounding syntax; branches with no statement in the
// split become empty blocks so the result always re-parses.
std::vector<Token> MakeSplitCode(const CodeSplit& split, const Method& method);

// Re-parses every split's code and builds its AST. Propagates ParseError.
std::vector<SplitAst> BuildSplitAsts(const SplitGraph& graph, const Method& method);

// Kahn topological order of the split ids; throws Error on a cycle.
std::vector<int> TopologicalOrder(const SplitGraph& graph);

// Everything the pipeline derives from one method.
struct SplitResult {
  Method method;
  Cfg cfg;
  DomTree domtree;
  SplitGraph graph;
  std::vector<SplitAst> asts;
};

SplitResult SplitMethod(Method method);

}  // namespace basts

#endif  // BASTS_SPLITTER_H_
