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

#include "basts/splitter.h"

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

#include "basts/errors.h"

namespace basts {
namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void Join(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Rebuilds parseable source for a subset of a method's statements.
class SplitEmitter {
 public:
  SplitEmitter(const Method& m, const std::set<StmtId>& members)
      : m_(m), in_(members) {}

  std::vector<Token> Emit() {
    out_ = m_.DeclarationTokens();
    Synth("{", TokenKind::kPunct);
    for (StmtId s : m_.body) Statement(s);
    Synth("}", TokenKind::kPunct);
    return std::move(out_);
  }

 private:
  void Synth(const char* text, TokenKind kind) { out_.push_back({text, kind, 0}); }
  void Span(TokenSpan span) {
    for (std::size_t i = span.begin; i < span.end; ++i) out_.push_back(m_.tokens[i]);
  }
  bool In(StmtId s) const { return in_.count(s) > 0; }

  // Any flow statement of the split inside this subtree.
  bool Contains(StmtId id) const {
    const auto& s = m_.stmt(id);
    if (In(id)) return true;
    if (s.for_init && In(*s.for_init)) return true;
    if (s.for_update && In(*s.for_update)) return true;
    return std::any_of(s.children.begin(), s.children.end(),
                       [&](StmtId c) { return Contains(c); });
  }

  void Statement(StmtId id) {
    const auto& s = m_.stmt(id);
    switch (s.kind) {
      case StmtKind::kBlock:
        if (Contains(id)) {
          Synth("{", TokenKind::kPunct);
          for (StmtId c : s.children) Statement(c);
          Synth("}", TokenKind::kPunct);
        }
        return;
      case StmtKind::kIf:
        if (In(id)) {
          Span(s.header);
          Branch(s.children.at(0));
          if (s.children.size() > 1) {
            Synth("else", TokenKind::kKeyword);
            Branch(s.children[1]);
          }
        } else {
          for (StmtId c : s.children) Flatten(c);
        }
        return;
      case StmtKind::kWhile:
        if (In(id)) {
          Span(s.header);
          Branch(s.children.at(0));
        } else {
          Flatten(s.children.at(0));
        }
        return;
      case StmtKind::kFor:
        if (In(id)) {
          ForHeader(s);
          Branch(s.children.at(0));
        } else {
          if (s.for_init && In(*s.for_init)) Span(m_.stmt(*s.for_init).span);
          Flatten(s.children.at(0));
          if (s.for_update && In(*s.for_update)) {
            Span(m_.stmt(*s.for_update).span);
            Synth(";", TokenKind::kPunct);
          }
        }
        return;
      default:
        if (In(id)) Span(s.span);
        return;
    }
  }

  // for ( init ; cond ; update ) with the parts outside the split removed.
  void ForHeader(const basts::Statement& s) {
    std::optional<TokenSpan> init_span, update_span;
    if (s.for_init) init_span = m_.stmt(*s.for_init).span;
    if (s.for_update) update_span = m_.stmt(*s.for_update).span;
    for (std::size_t i = s.header.begin; i < s.header.end;) {
      if (init_span && i == init_span->begin) {
        if (In(*s.for_init)) Span(*init_span);
        else Synth(";", TokenKind::kPunct);
        i = init_span->end;
      } else if (update_span && i == update_span->begin) {
        if (In(*s.for_update)) Span(*update_span);
        i = update_span->end;
      } else {
        out_.push_back(m_.tokens[i++]);
      }
    }
  }

  // Body of a header that belongs to the split.
  void Branch(StmtId id) {
    const auto& s = m_.stmt(id);
    if (s.kind == StmtKind::kBlock) {
      Synth("{", TokenKind::kPunct);
      for (StmtId c : s.children) Statement(c);
      Synth("}", TokenKind::kPunct);
    } else if (In(id)) {
      Statement(id);
    } else {
      Synth("{", TokenKind::kPunct);
      Statement(id);
      Synth("}", TokenKind::kPunct);
    }
  }

  // Body of a header outside the split: statements are hoisted in place.
  void Flatten(StmtId id) {
    const auto& s = m_.stmt(id);
    if (s.kind == StmtKind::kBlock) {
      for (StmtId c : s.children) Statement(c);
    } else {
      Statement(id);
    }
  }

  const Method& m_;
  const std::set<StmtId>& in_;
  std::vector<Token> out_;
};

}  // namespace

bool SplitGraph::HasEdge(int a, int b) const {
  return std::binary_search(successor_edges.begin(), successor_edges.end(), Edge{a, b});
}

SplitGraph PartitionBlocks(const DomTree& domtree, const Cfg& cfg) {
  const int n = cfg.size();
  std::vector<int> real_children(static_cast<std::size_t>(n), 0);
  std::vector<int> real_parents(static_cast<std::size_t>(n), 0);
  std::vector<Edge> edges;
  for (const auto& [p, c] : domtree.Edges()) {
    if (cfg.IsVirtual(p) || cfg.IsVirtual(c)) continue;
    edges.emplace_back(p, c);
    ++real_children[static_cast<std::size_t>(p)];
    ++real_parents[static_cast<std::size_t>(c)];
  }

  UnionFind uf(n);
  std::vector<Edge> removed;
  for (const auto& [p, c] : edges) {
    if (real_children[static_cast<std::size_t>(p)] > 1 ||
        real_parents[static_cast<std::size_t>(c)] > 1) {
      removed.emplace_back(p, c);
    } else {
      uf.Join(p, c);
    }
  }

  // Components keyed by their smallest node id.
  std::map<int, std::vector<int>> blocks;
  for (int v = 0; v < n; ++v)
    if (!cfg.IsVirtual(v)) blocks[uf.Find(v)].push_back(v);

  SplitGraph graph;
  std::map<int, int> split_of_root;
  for (auto& [root, members] : blocks) {
    CodeSplit split;
    split.split_id = static_cast<int>(graph.splits.size());
    for (int v : members) split.statements.push_back(*cfg.nodes[static_cast<std::size_t>(v)].stmt);
    split_of_root[root] = split.split_id;
    graph.splits.push_back(std::move(split));
  }
  if (graph.splits.empty()) graph.splits.push_back(CodeSplit{});

  for (const auto& [p, c] : removed)
    graph.successor_edges.emplace_back(split_of_root.at(uf.Find(p)),
                                       split_of_root.at(uf.Find(c)));
  std::sort(graph.successor_edges.begin(), graph.successor_edges.end());
  graph.successor_edges.erase(
      std::unique(graph.successor_edges.begin(), graph.successor_edges.end()),
      graph.successor_edges.end());
  return graph;
}

std::vector<Token> MakeSplitCode(const CodeSplit& split, const Method& method) {
  std::set<StmtId> members(split.statements.begin(), split.statements.end());
  return SplitEmitter(method, members).Emit();
}

std::vector<SplitAst> BuildSplitAsts(const SplitGraph& graph, const Method& method) {
  std::vector<SplitAst> asts;
  asts.reserve(graph.splits.size());
  for (const auto& split : graph.splits) {
    Method part = ParseMethod(MakeSplitCode(split, method));
    asts.push_back({split.split_id, BuildAst(part)});
  }
  return asts;
}

std::vector<int> TopologicalOrder(const SplitGraph& graph) {
  const std::size_t n = graph.splits.size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const auto& [a, b] : graph.successor_edges) {
    out[static_cast<std::size_t>(a)].push_back(b);
    ++indegree[static_cast<std::size_t>(b)];
  }
  // Smallest ready id first, so the order is unique.
  std::vector<int> order;
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(static_cast<int>(i));
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : out[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push(w);
  }
  if (order.size() != n) throw Error("split successor graph has a cycle");
  return order;
}

SplitResult SplitMethod(Method method) {
  SplitResult r;
  r.cfg = BuildCfg(method);
  r.domtree = ComputeDominators(r.cfg);
  r.graph = PartitionBlocks(r.domtree, r.cfg);
  r.asts = BuildSplitAsts(r.graph, method);
  r.method = std::move(method);
  return r;
}

}  // namespace basts
