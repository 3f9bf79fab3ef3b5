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

#include "basts/sep.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "basts/errors.h"

namespace basts {
namespace {

// Per-method seed so adding a method does not reshuffle the others.
std::uint64_t Mix(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Batch {
  std::vector<const IndexedTree*> trees;
  std::vector<std::pair<int, int>> first, second;
  std::vector<int> labels;
};

Batch MakeBatch(const std::vector<SepMethod>& corpus, const std::vector<PairExample>& pairs,
                std::size_t begin, std::size_t end) {
  Batch b;
  std::map<std::pair<int, int>, int> row_of;
  auto row = [&](int method, int split) {
    auto [it, fresh] = row_of.emplace(std::pair{method, split}, static_cast<int>(b.trees.size()));
    if (fresh)
      b.trees.push_back(&corpus[static_cast<std::size_t>(method)].trees[static_cast<std::size_t>(split)]);
    return it->second;
  };
  for (std::size_t i = begin; i < end; ++i) {
    const PairExample& p = pairs[i];
    b.first.emplace_back(0, row(p.method, p.first));
    b.second.emplace_back(0, row(p.method, p.second));
    b.labels.push_back(p.label);
  }
  return b;
}

}  // namespace

SepHead::SepHead(ParamStore& store, int dim, const std::string& prefix) : dim_(dim) {
  w_ = &store.Add(prefix + "/w", 2 * dim, 1);
  b_ = &store.Add(prefix + "/b", 1, 1);
}

void SepHead::Init(std::mt19937_64& rng) {
  ParamStore::InitXavier(*w_, rng);
  b_->value.data[0] = 0.0;
}

Tensor SepHead::Score(Tape& t, Tensor e_first, Tensor e_second) const {
  if (e_first.cols() != dim_ || e_second.cols() != dim_ || e_first.rows() != e_second.rows())
    throw ShapeError("sep score: " + e_first.value().ShapeString() + " vs " +
                     e_second.value().ShapeString());
  Tensor z = t.matmul(t.concat_cols({e_first, e_second}), t.param(*w_));
  return t.sigmoid(t.add_rowwise(z, t.param(*b_)));
}

Tensor SepLoss(Tape& t, Tensor probs, const std::vector<int>& labels) {
  if (labels.empty()) throw EmptyInputError("sep loss over zero pairs");
  if (probs.cols() != 1 || probs.rows() != static_cast<int>(labels.size()))
    throw ShapeError("sep loss: " + probs.value().ShapeString() + " for " +
                     std::to_string(labels.size()) + " labels");
  Matrix y(probs.rows(), 1), not_y(probs.rows(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y.data[i] = labels[i] ? 1.0 : 0.0;
    not_y.data[i] = 1.0 - y.data[i];
  }
  Tensor log_p = t.log(probs);
  Tensor log_q = t.log(t.add_scalar(t.scale(probs, -1.0), 1.0));
  Tensor ll = t.add(t.mul(t.constant(std::move(y)), log_p), t.mul(t.constant(std::move(not_y)), log_q));
  return t.scale(t.sum(ll), -1.0 / static_cast<double>(labels.size()));
}

std::vector<PairExample> GeneratePairs(const SplitGraph& graph, int neg_ratio, std::uint64_t seed,
                                       int method) {
  if (neg_ratio < 0) throw ConfigError("neg_ratio must be non-negative");
  const int n = static_cast<int>(graph.splits.size());
  std::vector<PairExample> out;
  for (const auto& [a, b] : graph.successor_edges) out.push_back({method, a, b, 1});
  std::vector<PairExample> candidates;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && !graph.HasEdge(a, b)) candidates.push_back({method, a, b, 0});
  std::mt19937_64 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const std::size_t want = std::min(candidates.size(), out.size() * static_cast<std::size_t>(neg_ratio));
  out.insert(out.end(), candidates.begin(), candidates.begin() + static_cast<long>(want));
  return out;
}

std::vector<PairExample> CorpusPairs(const std::vector<SepMethod>& corpus, int neg_ratio,
                                     std::uint64_t seed) {
  std::vector<PairExample> pairs;
  for (std::size_t m = 0; m < corpus.size(); ++m) {
    auto p = GeneratePairs(corpus[m].graph, neg_ratio, Mix(seed, m), static_cast<int>(m));
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  return pairs;
}

SepHistory Pretrain(const std::vector<SepMethod>& corpus, TreeLstm& tree, SepHead& head,
                    ParamStore& store, const SepOptions& options) {
  if (options.epochs <= 0) throw ConfigError("pretrain epochs must be positive");
  if (!(options.lr > 0.0)) throw ConfigError("pretrain learning rate must be positive");
  if (options.batch_size <= 0) throw ConfigError("pretrain batch size must be positive");
  SepHistory history;
  std::vector<PairExample> pairs = CorpusPairs(corpus, options.neg_ratio, options.seed);
  history.pairs = pairs.size();
  if (pairs.empty()) return history;

  Adam adam(store, {.lr = options.lr});
  store.ZeroGrad();
  std::mt19937_64 rng(Mix(options.seed, 0xfeed));
  const std::size_t bs = static_cast<std::size_t>(options.batch_size);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < pairs.size(); begin += bs) {
      const std::size_t end = std::min(pairs.size(), begin + bs);
      Batch b = MakeBatch(corpus, pairs, begin, end);
      Tape t;
      Tensor e = tree.EncodeForest(t, b.trees);
      Tensor probs = head.Score(t, t.gather({e}, b.first), t.gather({e}, b.second));
      Tensor loss = SepLoss(t, probs, b.labels);
      if (!std::isfinite(loss.item()))
        throw NaNError("pretrain loss is not finite at epoch " + std::to_string(epoch + 1));
      t.backward(loss);
      AccumulateGrads(t.param_grads());
      adam.Step();
      loss_sum += loss.item() * static_cast<double>(end - begin);
      for (std::size_t i = 0; i < b.labels.size(); ++i)
        correct += ((probs.value().data[i] >= 0.5) == (b.labels[i] == 1));
    }
    history.loss.push_back(loss_sum / static_cast<double>(pairs.size()));
    history.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(pairs.size()));
  }
  return history;
}

double PairAccuracy(const std::vector<SepMethod>& corpus, const std::vector<PairExample>& pairs,
                    const TreeLstm& tree, const SepHead& head) {
  if (pairs.empty()) return 1.0;
  Batch b = MakeBatch(corpus, pairs, 0, pairs.size());
  Tape t(false);
  Tensor e = tree.EncodeForest(t, b.trees);
  Tensor probs = head.Score(t, t.gather({e}, b.first), t.gather({e}, b.second));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < b.labels.size(); ++i)
    correct += ((probs.value().data[i] >= 0.5) == (b.labels[i] == 1));
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

}  // namespace basts
