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

// Child-Sum Tree-LSTM over split ASTs. Vectors are rows, so every gate is
// x W + h U + b with W, U of size L x L.

#ifndef BASTS_TREE_LSTM_H_
#define BASTS_TREE_LSTM_H_

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "basts/ast.h"
#include "basts/tensor.h"
#include "basts/vocab.h"

namespace basts {

// AST with labels resolved to vocabulary ids; node 0 is the root.
struct IndexedTree {
  std::vector<int> labels;
  std::vector<std::vector<int>> children;

  int size() const { return static_cast<int>(labels.size()); }
};

IndexedTree IndexTree(const Ast& ast, const Vocab& vocab);

// type_value label of every node, for vocabulary building.
std::vector<std::string> AstLabels(const Ast& ast);

class TreeLstm {
 public:
  // Registers "<prefix>/..." parameters in the store.
  TreeLstm(ParamStore& store, int vocab_size, int dim, const std::string& prefix = "tree_lstm");

  // Glorot weights, zero biases, uniform(-0.1, 0.1) virtual child.
  void Init(std::mt19937_64& rng);

  int dim() const { return dim_; }
  int vocab_size() const { return embedding_->value.rows; }
  std::vector<Parameter*> parameters() const;
  void SetFrozen(bool frozen);

  // One cell application; children must be non-empty.
  // Returns (h, m), both 1 x L.
  std::pair<Tensor, Tensor> Cell(Tape& tape, Tensor x, const std::vector<Tensor>& child_h,
                                 const std::vector<Tensor>& child_m) const;

  // Root hidden state of every tree, one row per tree, computed level by
  // level (all nodes of equal height in one batch).
  Tensor EncodeForest(Tape& tape, const std::vector<const IndexedTree*>& trees) const;

  // Same result by literal post-order recursion, one cell per node.
  Tensor EncodeReference(Tape& tape, const IndexedTree& tree) const;

  Parameter* embedding() const { return embedding_; }
  Parameter* virtual_h() const { return virtual_h_; }
  Parameter* virtual_m() const { return virtual_m_; }

  struct Gate {
    Parameter* w;
    Parameter* u;
    Parameter* b;
  };
  const Gate& input_gate() const { return i_; }
  const Gate& forget_gate() const { return f_; }
  const Gate& output_gate() const { return o_; }
  const Gate& update_gate() const { return u_; }

 private:
  int dim_;
  Parameter* embedding_;
  Gate i_, f_, o_, u_;
  Parameter* virtual_h_;
  Parameter* virtual_m_;
};

}  // namespace basts

#endif  // BASTS_TREE_LSTM_H_
