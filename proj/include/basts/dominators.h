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

#ifndef BASTS_DOMINATORS_H_
#define BASTS_DOMINATORS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "basts/cfg.h"

namespace basts {

// Immediate-dominator tree over the nodes of a Cfg.
struct DomTree {
  int root = 0;
  std::vector<std::optional<int>> idom;  // absent for the root
  std::vector<std::vector<int>> children;  // ascending ids

  std::size_t size() const { return idom.size(); }
  // Edges (idom(u) -> u), sorted.
  std::vector<Edge> Edges() const;
  // True when a dominates b (reflexive).
  bool Dominates(int a, int b) const;
};

// Iterative dataflow over reverse postorder with the two-finger intersect.
// Throws DomError when some node is unreachable from the entry.
DomTree ComputeDominators(const Cfg& cfg);

// Dominator sets straight from the definition: u dominates v iff v is
// unreachable from the entry once u is deleted (u always dominates itself).
// Test oracle; throws OracleScaleError above kMaxOracleNodes nodes.
inline constexpr int kMaxOracleNodes = 64;
std::vector<std::set<int>> BruteForceDominators(const Cfg& cfg);

std::string DomTreeToDot(const DomTree& tree, const Cfg& cfg,
                         const Method* method = nullptr);

}  // namespace basts

#endif  // BASTS_DOMINATORS_H_
