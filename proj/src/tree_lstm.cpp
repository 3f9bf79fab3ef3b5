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

#include "basts/tree_lstm.h"

#include <algorithm>
#include <functional>

#include "basts/errors.h"

namespace basts {

IndexedTree IndexTree(const Ast& ast, const Vocab& vocab) {
  IndexedTree t;
  t.labels.reserve(ast.size());
  for (const auto& n : ast.nodes()) {
    t.labels.push_back(vocab.Id(n.type_value()));
    t.children.push_back(n.children);
  }
  return t;
}

std::vector<std::string> AstLabels(const Ast& ast) {
  std::vector<std::string> labels;
  labels.reserve(ast.size());
  for (const auto& n : ast.nodes()) labels.push_back(n.type_value());
  return labels;
}

TreeLstm::TreeLstm(ParamStore& store, int vocab_size, int dim, const std::string& prefix)
    : dim_(dim) {
  if (dim <= 0 || vocab_size <= 0) throw ShapeError("tree-lstm needs positive sizes");
  embedding_ = &store.Add(prefix + "/embedding", vocab_size, dim);
  auto gate = [&](const std::string& g) {
    return Gate{&store.Add(prefix + "/W_" + g, dim, dim), &store.Add(prefix + "/U_" + g, dim, dim),
                &store.Add(prefix + "/b_" + g, 1, dim)};
  };
  i_ = gate("i");
  f_ = gate("f");
  o_ = gate("o");
  u_ = gate("u");
  virtual_h_ = &store.Add(prefix + "/virtual_h", 1, dim);
  virtual_m_ = &store.Add(prefix + "/virtual_m", 1, dim);
}

void TreeLstm::Init(std::mt19937_64& rng) {
  ParamStore::InitUniform(*embedding_, 0.1, rng);
  for (const Gate* g : {&i_, &f_, &o_, &u_}) {
    ParamStore::InitXavier(*g->w, rng);
    ParamStore::InitXavier(*g->u, rng);
    std::fill(g->b->value.data.begin(), g->b->value.data.end(), 0.0);
  }
  ParamStore::InitUniform(*virtual_h_, 0.1, rng);
  ParamStore::InitUniform(*virtual_m_, 0.1, rng);
}

std::vector<Parameter*> TreeLstm::parameters() const {
  return {embedding_, i_.w, i_.u, i_.b, f_.w, f_.u, f_.b, o_.w, o_.u, o_.b,
          u_.w,       u_.u, u_.b, virtual_h_, virtual_m_};
}

void TreeLstm::SetFrozen(bool frozen) {
  for (Parameter* p : parameters()) p->frozen = frozen;
}

std::pair<Tensor, Tensor> TreeLstm::Cell(Tape& t, Tensor x, const std::vector<Tensor>& child_h,
                                         const std::vector<Tensor>& child_m) const {
  if (child_h.empty() || child_h.size() != child_m.size())
    throw ShapeError("tree-lstm cell needs matching, non-empty child states");
  if (x.rows() != 1 || x.cols() != dim_)
    throw ShapeError("tree-lstm input " + x.value().ShapeString());
  for (std::size_t c = 0; c < child_h.size(); ++c)
    if (child_h[c].cols() != dim_ || child_m[c].cols() != dim_ || child_h[c].rows() != 1 ||
        child_m[c].rows() != 1)
      throw ShapeError("tree-lstm child state " + child_h[c].value().ShapeString());

  auto affine = [&](const Gate& g, Tensor h) {
    return t.add(t.add(t.matmul(x, t.param(*g.w)), t.matmul(h, t.param(*g.u))), t.param(*g.b));
  };
  Tensor h_sum = child_h[0];
  for (std::size_t c = 1; c < child_h.size(); ++c) h_sum = t.add(h_sum, child_h[c]);
  Tensor i = t.sigmoid(affine(i_, h_sum));
  Tensor o = t.sigmoid(affine(o_, h_sum));
  Tensor u = t.tanh(affine(u_, h_sum));
  Tensor m = t.mul(i, u);
  for (std::size_t c = 0; c < child_h.size(); ++c) {
    Tensor f = t.sigmoid(affine(f_, child_h[c]));
    m = t.add(m, t.mul(f, child_m[c]));
  }
  return {t.mul(o, t.tanh(m)), m};
}

Tensor TreeLstm::EncodeReference(Tape& t, const IndexedTree& tree) const {
  if (tree.size() == 0) throw ShapeError("cannot encode an empty tree");
  Tensor table = t.param(*embedding_);
  std::function<std::pair<Tensor, Tensor>(int)> visit = [&](int v) {
    std::vector<Tensor> hs, ms;
    const auto& kids = tree.children[static_cast<std::size_t>(v)];
    if (kids.empty()) {
      hs.push_back(t.param(*virtual_h_));
      ms.push_back(t.param(*virtual_m_));
    }
    for (int c : kids) {
      auto [h, m] = visit(c);
      hs.push_back(h);
      ms.push_back(m);
    }
    Tensor x = t.embedding(table, {tree.labels[static_cast<std::size_t>(v)]});
    return Cell(t, x, hs, ms);
  };
  return visit(0).first;
}

Tensor TreeLstm::EncodeForest(Tape& t, const std::vector<const IndexedTree*>& trees) const {
  if (trees.empty()) throw ShapeError("cannot encode an empty forest");
  // Height of every node (leaves are 0), and each node's (level, row) slot.
  struct Slot {
    int level = 0;
    int row = 0;
  };
  std::vector<std::vector<Slot>> slot(trees.size());
  std::vector<std::vector<std::pair<int, int>>> levels;  // (tree, node)
  for (std::size_t ti = 0; ti < trees.size(); ++ti) {
    const IndexedTree& tree = *trees[ti];
    if (tree.size() == 0) throw ShapeError("cannot encode an empty tree");
    std::vector<int> height(static_cast<std::size_t>(tree.size()), 0);
    // Pre-order ids put parents before children, but be general: iterate
    // an explicit post-order.
    std::vector<int> order;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& kids = tree.children[static_cast<std::size_t>(v)];
      if (next < kids.size()) {
        const int c = kids[next++];
        stack.emplace_back(c, 0);
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
    for (int v : order)
      for (int c : tree.children[static_cast<std::size_t>(v)])
        height[static_cast<std::size_t>(v)] =
            std::max(height[static_cast<std::size_t>(v)], height[static_cast<std::size_t>(c)] + 1);
    slot[ti].resize(static_cast<std::size_t>(tree.size()));
    for (int v = 0; v < tree.size(); ++v) {
      const int h = height[static_cast<std::size_t>(v)];
      if (static_cast<int>(levels.size()) <= h) levels.resize(static_cast<std::size_t>(h) + 1);
      slot[ti][static_cast<std::size_t>(v)] = {h, static_cast<int>(levels[static_cast<std::size_t>(h)].size())};
      levels[static_cast<std::size_t>(h)].emplace_back(static_cast<int>(ti), v);
    }
  }

  Tensor table = t.param(*embedding_);
  auto p = [&](Parameter* q) { return t.param(*q); };
  // Source 0 is the virtual child; level k lives at source k + 1.
  std::vector<Tensor> h_src{p(virtual_h_)}, m_src{p(virtual_m_)};
  for (const auto& level : levels) {
    const int n = static_cast<int>(level.size());
    std::vector<int> labels;
    std::vector<std::pair<int, int>> child_rows;
    std::vector<int> segment;
    for (int k = 0; k < n; ++k) {
      const auto [ti, v] = level[static_cast<std::size_t>(k)];
      labels.push_back(trees[static_cast<std::size_t>(ti)]->labels[static_cast<std::size_t>(v)]);
      const auto& kids = trees[static_cast<std::size_t>(ti)]->children[static_cast<std::size_t>(v)];
      if (kids.empty()) {
        child_rows.emplace_back(0, 0);
        segment.push_back(k);
      }
      for (int c : kids) {
        const Slot s = slot[static_cast<std::size_t>(ti)][static_cast<std::size_t>(c)];
        child_rows.emplace_back(s.level + 1, s.row);
        segment.push_back(k);
      }
    }
    Tensor x = t.embedding(table, labels);
    Tensor ch = t.gather(h_src, child_rows);
    Tensor cm = t.gather(m_src, child_rows);
    Tensor h_sum = t.segment_sum_rows(ch, segment, n);
    auto affine = [&](const Gate& g, Tensor h) {
      return t.add_rowwise(t.add(t.matmul(x, p(g.w)), t.matmul(h, p(g.u))), p(g.b));
    };
    Tensor i = t.sigmoid(affine(i_, h_sum));
    Tensor o = t.sigmoid(affine(o_, h_sum));
    Tensor u = t.tanh(affine(u_, h_sum));
    // Per-child forget gate: the parent's x W_f + b_f, repeated per child.
    Tensor xf = t.add_rowwise(t.matmul(x, p(f_.w)), p(f_.b));
    std::vector<std::pair<int, int>> parent_rows;
    parent_rows.reserve(segment.size());
    for (int s : segment) parent_rows.emplace_back(0, s);
    Tensor f = t.sigmoid(t.add(t.gather({xf}, parent_rows), t.matmul(ch, p(f_.u))));
    Tensor m = t.add(t.mul(i, u), t.segment_sum_rows(t.mul(f, cm), segment, n));
    Tensor h = t.mul(o, t.tanh(m));
    h_src.push_back(h);
    m_src.push_back(m);
  }
  std::vector<std::pair<int, int>> roots;
  for (std::size_t ti = 0; ti < trees.size(); ++ti)
    roots.emplace_back(slot[ti][0].level + 1, slot[ti][0].row);
  return t.gather(h_src, roots);
}

}  // namespace basts
