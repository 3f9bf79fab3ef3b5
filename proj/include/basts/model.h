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

// The complete model: Tree-LSTM syntax encoder, pre-training head and
// (once added) the summarizer Transformer, sharing one parameter store.

#ifndef BASTS_MODEL_H_
#define BASTS_MODEL_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "basts/sep.h"
#include "basts/transformer.h"
#include "basts/tree_lstm.h"
#include "basts/vocab.h"

namespace basts {

struct SummarizationExample {
  std::vector<int> code_ids;       // truncated code tokens, no PAD
  std::vector<IndexedTree> trees;  // one per split, at least one
  std::vector<int> comment_ids;    // BOS ... EOS
};

class BastsModel {
 public:
  BastsModel(Vocab ast_vocab, int dim);
  BastsModel(const BastsModel&) = delete;
  BastsModel& operator=(const BastsModel&) = delete;

  // Registers the Transformer; its dim must equal the tree dim.
  void AddTransformer(Vocab code_vocab, Vocab word_vocab, TransformerConfig config);
  bool has_transformer() const { return transformer_ != nullptr; }

  // Seeds the tree/head (and Transformer, if present) from one stream.
  void InitTree(std::mt19937_64& rng);
  void InitTransformer(std::mt19937_64& rng);

  int dim() const { return tree_->dim(); }
  const Vocab& ast_vocab() const { return ast_vocab_; }
  const Vocab& code_vocab() const { return code_vocab_; }
  const Vocab& word_vocab() const { return word_vocab_; }
  ParamStore& store() { return store_; }
  const ParamStore& store() const { return store_; }
  TreeLstm& tree() { return *tree_; }
  const TreeLstm& tree() const { return *tree_; }
  SepHead& sep() { return *sep_; }
  const SepHead& sep() const { return *sep_; }
  const Transformer& transformer() const;

  // Syntax embeddings of all splits, one row each.
  Tensor EncodeSplits(Tape& tape, const std::vector<IndexedTree>& trees) const;
  Tensor SummedLoss(Tape& tape, const SummarizationExample& ex) const;
  std::vector<int> Summarize(const SummarizationExample& ex, int max_len) const;

 private:
  Vocab ast_vocab_, code_vocab_, word_vocab_;
  ParamStore store_;
  std::unique_ptr<TreeLstm> tree_;
  std::unique_ptr<SepHead> sep_;
  std::unique_ptr<Transformer> transformer_;
};

struct TrainOptions {
  int epochs = 50;
  double lr = 1e-3;
  int batch_size = 16;
  std::uint64_t seed = 1;
  double target_loss = 0.0;  // stop once an epoch's loss is below; 0 = off
  bool freeze_tree = false;
};

struct TrainHistory {
  std::vector<double> loss;  // token-level cross-entropy per epoch
};

// Adam over minibatches; each example runs on its own tape (in parallel
// when threads allow) and gradients are summed in example order, so the
// result does not depend on the thread count. Batch loss is the summed
// token cross-entropy over the batch's total target tokens.
TrainHistory TrainSummarizer(BastsModel& model, const std::vector<SummarizationExample>& examples,
                             const TrainOptions& options);

// Token-level mean cross-entropy over all examples, no gradients.
double MeanTokenLoss(const BastsModel& model, const std::vector<SummarizationExample>& examples);

}  // namespace basts

#endif  // BASTS_MODEL_H_
