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

#ifndef BASTS_AST_H_
#define BASTS_AST_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace basts {

struct AstNode {
  int id = 0;
  std::string type;
  std::optional<std::string> value;
  std::vector<int> children;

  // "MemberReference_timeMillis", or just the type when there is no value.
  std::string type_value() const {
    return value ? type + "_" + *value : type;
  }
};

// Arena-backed tree. Node ids are indices into nodes(); the root is node 0.
class Ast {
 public:
  Ast() = default;

  int Add(std::string type, std::optional<std::string> value = std::nullopt);
  void AddChild(int parent, int child);

  const AstNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<AstNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  int root() const { return 0; }

  // Children before parents; root last.
  std::vector<int> PostOrder() const;
  // Parent of every node (-1 for the root).
  std::vector<int> Parents() const;
  // Leaf labels left to right.
  std::vector<std::string> Fringe() const;
  int Depth() const;

  // Structural equality on labels and shape; ids are ignored.
  bool SameShape(const Ast& other) const;

  // {id, type, value, children} with nested child objects.
  nlohmann::ordered_json ToJson() const;

 private:
  std::vector<AstNode> nodes_;
};

}  // namespace basts

#endif  // BASTS_AST_H_
