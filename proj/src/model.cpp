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

#include "basts/model.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "basts/errors.h"
#include "basts/kernels.h"
#include "basts/optimizer.h"

namespace basts {

BastsModel::BastsModel(Vocab ast_vocab, int dim) : ast_vocab_(std::move(ast_vocab)) {
  tree_ = std::make_unique<TreeLstm>(store_, ast_vocab_.size(), dim);
  sep_ = std::make_unique<SepHead>(store_, dim);
}

void BastsModel::AddTransformer(Vocab code_vocab, Vocab word_vocab, TransformerConfig config) {
  if (transformer_) throw Error("transformer already present");
  if (config.dim != dim())
    throw ConfigError("transformer width " + std::to_string(config.dim) +
                      " differs from syntax embedding size " + std::to_string(dim()));
  code_vocab_ = std::move(code_vocab);
  word_vocab_ = std::move(word_vocab);
  config.code_vocab = code_vocab_.size();
  config.word_vocab = word_vocab_.size();
  transformer_ = std::make_unique<Transformer>(store_, config);
}

void BastsModel::InitTree(std::mt19937_64& rng) {
  tree_->Init(rng);
  sep_->Init(rng);
}

void BastsModel::InitTransformer(std::mt19937_64& rng) { transformer_->Init(rng); }

const Transformer& BastsModel::transformer() const {
  if (!transformer_) throw Error("model has no summarizer section");
  return *transformer_;
}

Tensor BastsModel::EncodeSplits(Tape& tape, const std::vector<IndexedTree>& trees) const {
  if (trees.empty()) throw EmptyInputError("example has no split ASTs");
  std::vector<const IndexedTree*> ptrs;
  ptrs.reserve(trees.size());
  for (const auto& t : trees) ptrs.push_back(&t);
  return tree_->EncodeForest(tape, ptrs);
}

Tensor BastsModel::SummedLoss(Tape& tape, const SummarizationExample& ex) const {
  return transformer().SummedLoss(tape, EncodeSplits(tape, ex.trees), ex.code_ids, ex.comment_ids);
}

std::vector<int> BastsModel::Summarize(const SummarizationExample& ex, int max_len) const {
  Tape tape(false);
  return transformer().GreedyDecode(tape, EncodeSplits(tape, ex.trees), ex.code_ids, max_len);
}

namespace {

std::size_t Targets(const SummarizationExample& ex) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < ex.comment_ids.size(); ++i) n += ex.comment_ids[i] != kPadId;
  return n;
}

}  // namespace

TrainHistory TrainSummarizer(BastsModel& model, const std::vector<SummarizationExample>& examples,
                             const TrainOptions& options) {
  if (options.epochs <= 0) throw ConfigError("epochs must be positive");
  if (options.batch_size <= 0) throw ConfigError("batch size must be positive");
  if (examples.empty()) throw EmptyInputError("no training examples");
  model.tree().SetFrozen(options.freeze_tree);
  model.sep().weight()->frozen = true;  // the pre-training head is not used here
  model.sep().bias()->frozen = true;
  Adam adam(model.store(), {.lr = options.lr});
  model.store().ZeroGrad();

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed ^ 0x5eedf00dULL);
  TrainHistory history;
  const std::size_t bs = static_cast<std::size_t>(options.batch_size);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t epoch_tokens = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += bs) {
      const std::size_t end = std::min(order.size(), begin + bs);
      const int n = static_cast<int>(end - begin);
      std::size_t tokens = 0;
      for (std::size_t i = begin; i < end; ++i) tokens += Targets(examples[order[i]]);
      if (tokens == 0) continue;
      std::vector<double> losses(static_cast<std::size_t>(n));
      std::vector<GradBuffer> grads(static_cast<std::size_t>(n));
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) num_threads(kernels::MaxThreads())
      for (int j = 0; j < n; ++j) {
        try {
          Tape tape;
          Tensor loss = model.SummedLoss(tape, examples[order[begin + static_cast<std::size_t>(j)]]);
          losses[static_cast<std::size_t>(j)] = loss.item();
          tape.backward(tape.scale(loss, 1.0 / static_cast<double>(tokens)));
          grads[static_cast<std::size_t>(j)] = tape.TakeParamGrads();
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
      double batch_loss = 0.0;
      for (int j = 0; j < n; ++j) {
        batch_loss += losses[static_cast<std::size_t>(j)];
        AccumulateGrads(grads[static_cast<std::size_t>(j)]);
      }
      if (!std::isfinite(batch_loss))
        throw NaNError("training loss is not finite at epoch " + std::to_string(epoch + 1) +
                       ", batch starting at example " + std::to_string(begin));
      adam.Step();
      epoch_loss += batch_loss;
      epoch_tokens += tokens;
    }
    history.loss.push_back(epoch_tokens ? epoch_loss / static_cast<double>(epoch_tokens) : 0.0);
    if (options.target_loss > 0.0 && history.loss.back() < options.target_loss) break;
  }
  return history;
}

double MeanTokenLoss(const BastsModel& model, const std::vector<SummarizationExample>& examples) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& ex : examples) {
    Tape tape(false);
    total += model.SummedLoss(tape, ex).item();
    tokens += Targets(ex);
  }
  return tokens ? total / static_cast<double>(tokens) : 0.0;
}

}  // namespace basts
