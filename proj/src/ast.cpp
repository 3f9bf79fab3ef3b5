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

#include "basts/ast.h"

#include <algorithm>
#include <functional>
#include <utility>

namespace basts {

int Ast::Add(std::string type, std::optional<std::string> value) {
  AstNode n;
  n.id = static_cast<int>(nodes_.size());
  n.type = std::move(type);
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

void Ast::AddChild(int parent, int child) {
  nodes_.at(static_cast<std::size_t>(parent)).children.push_back(child);
}

std::vector<int> Ast::PostOrder() const {
  std::vector<int> order;
  if (nodes_.empty()) return order;
  order.reserve(nodes_.size());
  // Iterative to survive deep trees.
  std::vector<std::pair<int, std::size_t>> stack{{root(), 0}};
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& kids = node(id).children;
    if (next < kids.size()) {
      int child = kids[next++];
      stack.emplace_back(child, 0);
    } else {
      order.push_back(id);
      stack.pop_back();
    }
  }
  return order;
}

std::vector<int> Ast::Parents() const {
  std::vector<int> parent(nodes_.size(), -1);
  for (const auto& n : nodes_)
    for (int c : n.children) parent[static_cast<std::size_t>(c)] = n.id;
  return parent;
}

std::vector<std::string> Ast::Fringe() const {
  std::vector<std::string> leaves;
  std::function<void(int)> walk = [&](int id) {
    const auto& n = node(id);
    if (n.children.empty()) leaves.push_back(n.type_value());
    for (int c : n.children) walk(c);
  };
  if (!nodes_.empty()) walk(root());
  return leaves;
}

int Ast::Depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> depth(nodes_.size(), 1);
  for (int id : PostOrder()) {
    for (int c : node(id).children)
      depth[id] = std::max(depth[id], depth[c] + 1);
  }
  return depth[root()];
}

bool Ast::SameShape(const Ast& other) const {
  if (size() != other.size()) return false;
  if (empty()) return true;
  std::function<bool(int, int)> eq = [&](int a, int b) {
    const auto& x = node(a);
    const auto& y = other.node(b);
    if (x.type != y.type || x.value != y.value ||
        x.children.size() != y.children.size())
      return false;
    for (std::size_t i = 0; i < x.children.size(); ++i)
      if (!eq(x.children[i], y.children[i])) return false;
    return true;
  };
  return eq(root(), other.root());
}

nlohmann::ordered_json Ast::ToJson() const {
  std::function<nlohmann::ordered_json(int)> dump = [&](int id) {
    const auto& n = node(id);
    nlohmann::ordered_json j;
    j["id"] = n.id;
    j["type"] = n.type;
    j["value"] = n.value ? nlohmann::ordered_json(*n.value) : nlohmann::ordered_json(nullptr);
    auto kids = nlohmann::ordered_json::array();
    for (int c : n.children) kids.push_back(dump(c));
    j["children"] = std::move(kids);
    return j;
  };
  return nodes_.empty() ? nlohmann::ordered_json(nullptr) : dump(root());
}

}  // namespace basts
