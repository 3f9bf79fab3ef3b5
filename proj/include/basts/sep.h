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

// Syntax-embedding pre-training: predict whether one split of a method
// directly precedes another.

#ifndef BASTS_SEP_H_
#define BASTS_SEP_H_

#include <cstdint>
#include <random>
#include <vector>

#include "basts/optimizer.h"
#include "basts/splitter.h"
#include "basts/tensor.h"
#include "basts/tree_lstm.h"

namespace basts {

// Affine 2L -> 1 map followed by a sigmoid over concat(e_t, e_t').
class SepHead {
 public:
  SepHead(ParamStore& store, int dim, const std::string& prefix = "sep");
  void Init(std::mt19937_64& rng);

  // Rows of e_first / e_second are paired; returns P x 1 probabilities.
  Tensor Score(Tape& tape, Tensor e_first, Tensor e_second) const;

  Parameter* weight() const { return w_; }  // 2L x 1
  Parameter* bias() const { return b_; }    // 1 x 1

 private:
  int dim_;
  Parameter* w_;
  Parameter* b_;
};

// Mean binary cross-entropy; probabilities clamped to [1e-12, 1 - 1e-12]
// through the log floor.
Tensor SepLoss(Tape& tape, Tensor probs, const std::vector<int>& labels);

struct PairExample {
  int method = 0;
  int first = 0;   // split ids within the method
  int second = 0;
  int label = 0;
};

// Every successor edge as a positive, then neg_ratio negatives per
// positive drawn uniformly without replacement from the other ordered
// pairs of distinct splits (fewer if not enough exist).
std::vector<PairExample> GeneratePairs(const SplitGraph& graph, int neg_ratio,
                                       std::uint64_t seed, int method = 0);

struct SepMethod {
  std::vector<IndexedTree> trees;  // by split id
  SplitGraph graph;
};

struct SepOptions {
  int epochs = 200;
  double lr = 1e-3;
  int batch_size = 32;
  std::uint64_t seed = 1;
  int neg_ratio = 1;
};

struct SepHistory {
  std::vector<double> loss;      // mean pair loss per epoch
  std::vector<double> accuracy;  // training pair accuracy per epoch
  std::size_t pairs = 0;
};

std::vector<PairExample> CorpusPairs(const std::vector<SepMethod>& corpus, int neg_ratio,
                                     std::uint64_t seed);

// Trains tree and head jointly with Adam on minibatches of pairs; pair
// order is reshuffled every epoch from the seed.
SepHistory Pretrain(const std::vector<SepMethod>& corpus, TreeLstm& tree, SepHead& head,
                    ParamStore& store, const SepOptions& options);

// Fraction of pairs whose thresholded score (>= 0.5) equals the label.
double PairAccuracy(const std::vector<SepMethod>& corpus, const std::vector<PairExample>& pairs,
                    const TreeLstm& tree, const SepHead& head);

}  // namespace basts

#endif  // BASTS_SEP_H_
