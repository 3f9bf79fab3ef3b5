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

#include "basts/pipeline.h"

#include <cstdio>
#include <exception>
#include <optional>
#include <random>
#include <unordered_set>

#include "basts/errors.h"
#include "basts/frontend.h"
#include "basts/kernels.h"
#include "basts/tree_lstm.h"
#include "json.hpp"

namespace basts {
namespace {

PreparedMethod PrepareOne(const CorpusRecord& r, const RunConfig& config) {
  PreparedMethod m;
  m.id = r.id;
  Method method = ParseMethod(AbstractLiterals(Tokenize(r.code)));
  for (const Token& t : method.tokens) {
    if (!m.abstract_code.empty()) m.abstract_code += ' ';
    m.abstract_code += t.text;
  }
  m.code_tokens = CodeSequence(method.tokens);
  if (static_cast<int>(m.code_tokens.size()) > config.max_code_len)
    m.code_tokens.resize(static_cast<std::size_t>(config.max_code_len));
  m.comment_words = TokenizeComment(r.comment);
  if (static_cast<int>(m.comment_words.size()) > config.max_comment_len)
    m.comment_words.resize(static_cast<std::size_t>(config.max_comment_len));
  m.split = SplitMethod(std::move(method));
  return m;
}

}  // namespace

PreprocessResult Preprocess(const std::vector<CorpusRecord>& records, const RunConfig& config,
                            bool require_comment) {
  const int n = static_cast<int>(records.size());
  std::vector<std::optional<PreparedMethod>> done(records.size());
  std::vector<std::string> why(records.size());
#pragma omp parallel for schedule(dynamic) num_threads(kernels::MaxThreads())
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      PreparedMethod m = PrepareOne(records[k], config);
      if (require_comment && m.comment_words.empty())
        why[k] = "comment has no words";
      else
        done[k] = std::move(m);
    } catch (const std::exception& e) {
      why[k] = e.what();
    }
  }
  PreprocessResult out;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (done[k])
      out.methods.push_back(std::move(*done[k]));
    else
      out.dropped.push_back({records[k].id, why[k]});
  }
  if (out.methods.empty())
    throw EmptyInputError("no record survived preprocessing (" + std::to_string(records.size()) +
                          " read, " + std::to_string(out.dropped.size()) + " dropped)");
  return out;
}

std::size_t DropDuplicates(std::vector<PreparedMethod>& methods,
                           const std::vector<PreparedMethod>& seen) {
  std::unordered_set<std::string> codes;
  for (const auto& m : seen) codes.insert(m.abstract_code);
  const std::size_t before = methods.size();
  std::erase_if(methods, [&](const PreparedMethod& m) { return codes.count(m.abstract_code) > 0; });
  return before - methods.size();
}

Vocab BuildAstVocab(const std::vector<PreparedMethod>& methods, int min_freq) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& m : methods)
    for (const auto& s : m.split.asts) docs.push_back(AstLabels(s.root));
  return Vocab::Build(docs, min_freq);
}

Vocab BuildCodeVocab(const std::vector<PreparedMethod>& methods, int min_freq) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& m : methods) docs.push_back(m.code_tokens);
  return Vocab::Build(docs, min_freq);
}

Vocab BuildWordVocab(const std::vector<PreparedMethod>& methods, int min_freq) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& m : methods) docs.push_back(m.comment_words);
  return Vocab::Build(docs, min_freq);
}

SepMethod MakeSepMethod(const PreparedMethod& m, const Vocab& ast_vocab) {
  SepMethod s;
  s.graph = m.split.graph;
  for (const auto& a : m.split.asts) s.trees.push_back(IndexTree(a.root, ast_vocab));
  return s;
}

SummarizationExample MakeExample(const PreparedMethod& m, const BastsModel& model) {
  SummarizationExample ex;
  ex.code_ids = model.code_vocab().Encode(m.code_tokens);
  for (const auto& a : m.split.asts) ex.trees.push_back(IndexTree(a.root, model.ast_vocab()));
  ex.comment_ids.push_back(kBosId);
  for (int id : model.word_vocab().Encode(m.comment_words)) ex.comment_ids.push_back(id);
  ex.comment_ids.push_back(kEosId);
  return ex;
}

std::string JoinWords(const Words& words) {
  std::string s;
  for (const auto& w : words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

std::string SplitsJsonl(const std::vector<PreparedMethod>& methods) {
  std::string out;
  for (const auto& m : methods) {
    nlohmann::ordered_json j;
    j["id"] = m.id;
    j["method"] = m.split.method.name;
    auto splits = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.split.graph.splits.size(); ++i) {
      const CodeSplit& s = m.split.graph.splits[i];
      Words code;
      for (const Token& t : MakeSplitCode(s, m.split.method)) code.push_back(t.text);
      nlohmann::ordered_json js;
      js["id"] = s.split_id;
      js["statements"] = s.statements.size();
      js["code"] = JoinWords(code);
      js["ast"] = m.split.asts[i].root.ToJson();
      splits.push_back(std::move(js));
    }
    j["splits"] = std::move(splits);
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : m.split.graph.successor_edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    j["order"] = TopologicalOrder(m.split.graph);
    out += j.dump() + "\n";
  }
  return out;
}

PretrainRun RunPretrain(const std::vector<PreparedMethod>& train, const RunConfig& config) {
  config.Validate();
  PretrainRun run;
  run.model = std::make_unique<BastsModel>(BuildAstVocab(train, config.min_ast_freq),
                                           config.embedding_size);
  std::mt19937_64 rng(config.seed);
  run.model->InitTree(rng);
  std::vector<SepMethod> corpus;
  for (const auto& m : train) corpus.push_back(MakeSepMethod(m, run.model->ast_vocab()));
  SepOptions opt;
  opt.epochs = config.pretrain_epochs;
  opt.lr = config.pretrain_learning_rate;
  opt.batch_size = config.pretrain_batch_size;
  opt.seed = config.seed;
  opt.neg_ratio = config.neg_ratio;
  run.history = Pretrain(corpus, run.model->tree(), run.model->sep(), run.model->store(), opt);
  run.final_accuracy = run.history.accuracy.empty() ? 0.0 : run.history.accuracy.back();
  return run;
}

TrainRun RunTrain(const std::vector<PreparedMethod>& train, const RunConfig& config,
                  std::unique_ptr<BastsModel> pretrained) {
  config.Validate();
  const bool from_pretrained = pretrained != nullptr;
  TrainRun run;
  if (from_pretrained) {
    if (pretrained->dim() != config.embedding_size)
      throw ConfigError("embedding_size " + std::to_string(config.embedding_size) +
                        " differs from the pre-trained encoder's " +
                        std::to_string(pretrained->dim()));
    if (pretrained->has_transformer()) throw ConfigError("checkpoint already holds a summarizer");
    run.model = std::move(pretrained);
  } else {
    run.model = std::make_unique<BastsModel>(BuildAstVocab(train, config.min_ast_freq),
                                             config.embedding_size);
    std::mt19937_64 rng(config.seed);
    run.model->InitTree(rng);
  }
  TransformerConfig tc;
  tc.dim = config.embedding_size;
  tc.heads = config.heads;
  tc.encoder_layers = config.encoder_layers;
  tc.decoder_layers = config.decoder_layers;
  tc.ffn_dim = config.ffn_size;
  run.model->AddTransformer(BuildCodeVocab(train, config.min_code_freq),
                            BuildWordVocab(train, config.min_word_freq), tc);
  std::mt19937_64 rng(config.seed ^ 0x7472616e73ULL);
  run.model->InitTransformer(rng);

  std::vector<SummarizationExample> examples;
  for (const auto& m : train) examples.push_back(MakeExample(m, *run.model));
  TrainOptions opt;
  opt.epochs = config.epochs;
  opt.lr = config.learning_rate;
  opt.batch_size = config.batch_size;
  opt.seed = config.seed;
  opt.target_loss = config.target_loss;
  opt.freeze_tree = from_pretrained && config.freeze_pretrained;
  run.history = TrainSummarizer(*run.model, examples, opt);
  return run;
}

std::vector<Words> SummarizeMethods(const BastsModel& model, const std::vector<PreparedMethod>& methods,
                                    const RunConfig& config) {
  const int n = static_cast<int>(methods.size());
  std::vector<Words> out(methods.size());
  std::vector<std::exception_ptr> errors(methods.size());
#pragma omp parallel for schedule(dynamic) num_threads(kernels::MaxThreads())
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = model.word_vocab().Decode(
          model.Summarize(MakeExample(methods[k], model), config.max_comment_len));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

EvalReport EvaluateModel(const BastsModel& model, const std::vector<PreparedMethod>& methods,
                         const RunConfig& config) {
  std::vector<Words> refs;
  for (const auto& m : methods) refs.push_back(m.comment_words);
  return Evaluate(SummarizeMethods(model, methods, config), refs, config.bleu_smoothing);
}

std::string LossCsv(const std::vector<double>& loss, const std::vector<double>* accuracy) {
  std::string out = accuracy ? "epoch,loss,accuracy\n" : "epoch,loss\n";
  char buf[96];
  for (std::size_t i = 0; i < loss.size(); ++i) {
    if (accuracy)
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1, loss[i], (*accuracy)[i]);
    else
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, loss[i]);
    out += buf;
  }
  return out;
}

}  // namespace basts
