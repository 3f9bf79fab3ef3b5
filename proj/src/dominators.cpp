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

#include "basts/dominators.h"

#include <deque>
#include <sstream>

#include "basts/errors.h"

namespace basts {

std::vector<Edge> DomTree::Edges() const {
  std::vector<Edge> edges;
  for (std::size_t p = 0; p < children.size(); ++p)
    for (int c : children[p]) edges.emplace_back(static_cast<int>(p), c);
  return edges;
}

bool DomTree::Dominates(int a, int b) const {
  for (std::optional<int> cur = b; cur; cur = idom[static_cast<std::size_t>(*cur)])
    if (*cur == a) return true;
  return false;
}

DomTree ComputeDominators(const Cfg& cfg) {
  const int n = cfg.size();
  const auto succ = cfg.Successors();
  const auto pred = cfg.Predecessors();

  // Reverse postorder by iterative DFS.
  std::vector<int> postorder;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, std::size_t>> stack{{cfg.entry, 0}};
  seen[static_cast<std::size_t>(cfg.entry)] = 1;
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& out = succ[static_cast<std::size_t>(u)];
    if (next < out.size()) {
      int v = out[next++];
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        stack.emplace_back(v, 0);
      }
    } else {
      postorder.push_back(u);
      stack.pop_back();
    }
  }
  if (static_cast<int>(postorder.size()) != n) {
    for (int v = 0; v < n; ++v)
      if (!seen[static_cast<std::size_t>(v)])
        throw DomError("node " + std::to_string(v) + " is unreachable from entry");
  }

  std::vector<int> rpo_index(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    rpo_index[static_cast<std::size_t>(postorder[static_cast<std::size_t>(i)])] = n - 1 - i;

  constexpr int kUndefined = -1;
  std::vector<int> idom(static_cast<std::size_t>(n), kUndefined);
  idom[static_cast<std::size_t>(cfg.entry)] = cfg.entry;

  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (rpo_index[static_cast<std::size_t>(a)] > rpo_index[static_cast<std::size_t>(b)])
        a = idom[static_cast<std::size_t>(a)];
      while (rpo_index[static_cast<std::size_t>(b)] > rpo_index[static_cast<std::size_t>(a)])
        b = idom[static_cast<std::size_t>(b)];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
      const int b = *it;
      if (b == cfg.entry) continue;
      int new_idom = kUndefined;
      for (int p : pred[static_cast<std::size_t>(b)]) {
        if (idom[static_cast<std::size_t>(p)] == kUndefined) continue;
        new_idom = new_idom == kUndefined ? p : intersect(p, new_idom);
      }
      if (idom[static_cast<std::size_t>(b)] != new_idom) {
        idom[static_cast<std::size_t>(b)] = new_idom;
        changed = true;
      }
    }
  }

  DomTree tree;
  tree.root = cfg.entry;
  tree.idom.assign(static_cast<std::size_t>(n), std::nullopt);
  tree.children.assign(static_cast<std::size_t>(n), {});
  for (int v = 0; v < n; ++v) {
    if (v == cfg.entry) continue;
    const int d = idom[static_cast<std::size_t>(v)];
    tree.idom[static_cast<std::size_t>(v)] = d;
    tree.children[static_cast<std::size_t>(d)].push_back(v);
  }
  return tree;
}

std::vector<std::set<int>> BruteForceDominators(const Cfg& cfg) {
  const int n = cfg.size();
  if (n > kMaxOracleNodes)
    throw OracleScaleError("brute-force dominators capped at " +
                           std::to_string(kMaxOracleNodes) + " nodes, got " +
                           std::to_string(n));
  const auto succ = cfg.Successors();

  auto reachable_without = [&](int removed) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    if (removed == cfg.entry) return seen;
    std::deque<int> queue{cfg.entry};
    seen[static_cast<std::size_t>(cfg.entry)] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : succ[static_cast<std::size_t>(u)]) {
        if (v == removed || seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = 1;
        queue.push_back(v);
      }
    }
    return seen;
  };

  std::vector<std::set<int>> dom(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    auto seen = reachable_without(u);
    for (int v = 0; v < n; ++v)
      if (v == u || !seen[static_cast<std::size_t>(v)]) dom[static_cast<std::size_t>(v)].insert(u);
  }
  return dom;
}

std::string DomTreeToDot(const DomTree& tree, const Cfg& cfg, const Method* method) {
  std::ostringstream os;
  os << "digraph domtree {\n";
  for (const auto& n : cfg.nodes) {
    std::string label = NodeLabel(cfg, n.id, method);
    std::string escaped;
    for (char c : label) {
      if (c == '"' || c == '\\') escaped.push_back('\\');
      escaped.push_back(c);
    }
    os << "  n" << n.id << " [label=\"" << escaped << "\"];\n";
  }
  for (const auto& [a, b] : tree.Edges()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace basts
