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

// End-to-end stages shared by the CLI and the acceptance suite:
// preprocessing, vocabulary building, pre-training, training, evaluation
// and summarization.

#ifndef BASTS_PIPELINE_H_
#define BASTS_PIPELINE_H_

#include <memory>
#include <string>
#include <vector>

#include "basts/config.h"
#include "basts/corpus.h"
#include "basts/metrics.h"
#include "basts/model.h"
#include "basts/sep.h"
#include "basts/splitter.h"

namespace basts {

// One corpus record after every front-end stage.
struct PreparedMethod {
  std::string id;
  SplitResult split;
  std::vector<std::string> code_tokens;    // abstracted subtokens, truncated
  std::vector<std::string> comment_words;  // lowercased words, truncated
  std::string abstract_code;               // space-joined abstracted tokens
};

struct DroppedRecord {
  std::string id;
  std::string reason;
};

struct PreprocessResult {
  std::vector<PreparedMethod> methods;  // corpus order
  std::vector<DroppedRecord> dropped;   // corpus order
};

// Runs the front end on every record (in parallel). Records that fail a
// stage, or whose comment has no words when require_comment is set, are
// dropped with a reason. Throws EmptyInputError when none survive.
PreprocessResult Preprocess(const std::vector<CorpusRecord>& records, const RunConfig& config,
                            bool require_comment = true);

// Removes methods whose abstracted code occurs in `seen`; returns the
// removed count.
std::size_t DropDuplicates(std::vector<PreparedMethod>& methods,
                           const std::vector<PreparedMethod>& seen);

Vocab BuildAstVocab(const std::vector<PreparedMethod>& methods, int min_freq);
Vocab BuildCodeVocab(const std::vector<PreparedMethod>& methods, int min_freq);
Vocab BuildWordVocab(const std::vector<PreparedMethod>& methods, int min_freq);

SepMethod MakeSepMethod(const PreparedMethod& m, const Vocab& ast_vocab);
SummarizationExample MakeExample(const PreparedMethod& m, const BastsModel& model);

// One JSON object per method: id, splits (id, statement count, code,
// AST), successor edges and topological order.
std::string SplitsJsonl(const std::vector<PreparedMethod>& methods);

struct PretrainRun {
  std::unique_ptr<BastsModel> model;
  SepHistory history;
  double final_accuracy = 0.0;
};

// Builds the AST vocabulary from `train`, initialises the syntax encoder
// from the seed and pre-trains it on successor-pair prediction.
PretrainRun RunPretrain(const std::vector<PreparedMethod>& train, const RunConfig& config);

struct TrainRun {
  std::unique_ptr<BastsModel> model;
  TrainHistory history;
};

// Adds the summarizer to `pretrained` (or to a fresh syntax encoder when
// null) with vocabularies from `train` only, then trains end to end.
TrainRun RunTrain(const std::vector<PreparedMethod>& train, const RunConfig& config,
                  std::unique_ptr<BastsModel> pretrained);

// Greedy summaries as word lists, in input order (parallel over methods).
std::vector<Words> SummarizeMethods(const BastsModel& model, const std::vector<PreparedMethod>& methods,
                                    const RunConfig& config);

EvalReport EvaluateModel(const BastsModel& model, const std::vector<PreparedMethod>& methods,
                         const RunConfig& config);

// "epoch,loss\n" rows (plus accuracy for pre-training), values as %.17g.
std::string LossCsv(const std::vector<double>& loss, const std::vector<double>* accuracy = nullptr);

std::string JoinWords(const Words& words);

}  // namespace basts

#endif  // BASTS_PIPELINE_H_
