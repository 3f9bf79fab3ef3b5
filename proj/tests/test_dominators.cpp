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

#include <random>

#include "basts/dominators.h"
#include "basts/errors.h"
#include "doctest.h"
#include "test_util.h"

namespace basts {
namespace {

Cfg Graph(int n, std::vector<Edge> edges) {
  Cfg g;
  for (int i = 0; i < n; ++i)
    g.nodes.push_back({i, CfgNodeKind::kStmt, std::optional<StmtId>(i)});
  g.nodes[0].kind = CfgNodeKind::kStart;
  g.nodes[0].stmt.reset();
  g.entry = 0;
  g.exit = n - 1;
  g.edges = std::move(edges);
  return g;
}

// S=0, 1, 2, 3, 4, E=5
Cfg Diamond() { return Graph(6, {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}}); }

TEST_CASE("chain dominators") {
  DomTree t = ComputeDominators(Graph(4, {{0, 1}, {1, 2}, {2, 3}}));
  CHECK(!t.idom[0]);
  CHECK(t.idom[1] == 0);
  CHECK(t.idom[2] == 1);
  CHECK(t.idom[3] == 2);
}

TEST_CASE("diamond dominators") {
  DomTree t = ComputeDominators(Diamond());
  CHECK(t.idom[2] == 1);
  CHECK(t.idom[3] == 1);
  CHECK(t.idom[4] == 1);
  CHECK(t.idom[5] == 4);
  CHECK(t.children[1] == std::vector<int>{2, 3, 4});
  CHECK(t.Edges().size() == 5);
}

TEST_CASE("brute force oracle examples") {
  auto chain = BruteForceDominators(Graph(3, {{0, 1}, {1, 2}}));
  CHECK(chain[2] == std::set<int>{0, 1, 2});
  auto diamond = BruteForceDominators(Diamond());
  CHECK(diamond[4] == std::set<int>{0, 1, 4});
  auto single = BruteForceDominators(Graph(1, {}));
  CHECK(single[0] == std::set<int>{0});
}

TEST_CASE("oracle scale guard") {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < 65; ++i) edges.emplace_back(i, i + 1);
  Cfg big = Graph(65, edges);
  CHECK_THROWS_AS(BruteForceDominators(big), OracleScaleError);
  CHECK_NOTHROW(ComputeDominators(big));
}

TEST_CASE("unreachable node is an error") {
  CHECK_THROWS_AS(ComputeDominators(Graph(3, {{0, 1}})), DomError);
}

TEST_CASE("tree equals oracle on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 15);
    Cfg g = testing::RandomReachableGraph(n, rng);
    DomTree t = ComputeDominators(g);
    auto oracle = BruteForceDominators(g);
    int tree_edges = 0;
    for (int v = 0; v < n; ++v) {
      if (v != g.entry) {
        REQUIRE(t.idom[static_cast<std::size_t>(v)]);
        CHECK(*t.idom[static_cast<std::size_t>(v)] != v);
        ++tree_edges;
      }
      for (int u = 0; u < n; ++u)
        CHECK(t.Dominates(u, v) == (oracle[static_cast<std::size_t>(v)].count(u) == 1));
    }
    CHECK(tree_edges == n - 1);
    CHECK(static_cast<int>(t.Edges().size()) == n - 1);
  }
}

TEST_CASE("running example dominator tree") {
  Method m = testing::RunningExample();
  Cfg cfg = BuildCfg(m);
  DomTree t = ComputeDominators(cfg);
  // The outer conditional (node 6) immediately dominates the inner
  // conditional, the else branch and the loop update.
  CHECK(t.children[6] == std::vector<int>{7, 10, 11});
  CHECK(t.children[7] == std::vector<int>{8, 9});
  CHECK(t.children[3] == std::vector<int>{4, 12});
  auto dot = DomTreeToDot(t, cfg, &m);
  CHECK(dot.find("n6 -> n11;") != std::string::npos);
}

}  // namespace
}  // namespace basts
