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

// basts: command-line front end for splitting, pre-training, training,
// evaluation and summarization. Every subcommand exits nonzero with a
// one-line diagnostic on failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "basts/cfg.h"
#include "basts/checkpoint.h"
#include "basts/config.h"
#include "basts/corpus.h"
#include "basts/dominators.h"
#include "basts/errors.h"
#include "basts/frontend.h"
#include "basts/metrics.h"
#include "basts/pipeline.h"

namespace {

using namespace basts;

struct Options {
  std::string config;
  std::string input;
  std::string checkpoint;
  std::string pretrained;
  std::string log;
  std::string output;
  std::string hyp, ref, train;
  std::string json;
  bool from_scratch = false;
  long long seed = -1;
};

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// A .jsonl path is a corpus; anything else is source text whose methods
// become records named after the methods (comment left empty).
std::vector<CorpusRecord> ReadInput(const std::string& path) {
  if (EndsWith(path, ".jsonl")) return LoadCorpus(path);
  const std::vector<Token> tokens = Tokenize(ReadTextFile(path));
  std::vector<CorpusRecord> records;
  std::map<std::string, int> seen;
  for (const Method& m : ParseFile(tokens)) {
    std::string code;
    for (const Token& t : m.tokens) code += t.text + " ";
    const int n = seen[m.name]++;
    records.push_back({n == 0 ? m.name : m.name + "#" + std::to_string(n), code, ""});
  }
  return records;
}

RunConfig ResolveConfig(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : LoadConfig(o.config);
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  c.Validate();
  return c;
}

PreprocessResult Prepare(const Options& o, const RunConfig& c, bool require_comment) {
  PreprocessResult r = Preprocess(ReadInput(o.input), c, require_comment);
  for (const auto& d : r.dropped) std::cerr << "dropped " << d.id << ": " << d.reason << "\n";
  std::cerr << r.methods.size() << " methods kept, " << r.dropped.size() << " dropped\n";
  return r;
}

void Emit(const Options& o, const std::string& text) {
  if (o.output.empty())
    std::cout << text;
  else
    WriteTextFile(o.output, text);
}

int Split(const Options& o) {
  const RunConfig c = ResolveConfig(o);
  Emit(o, SplitsJsonl(Prepare(o, c, false).methods));
  return 0;
}

int PretrainCmd(const Options& o) {
  const RunConfig c = ResolveConfig(o);
  PretrainRun run = RunPretrain(Prepare(o, c, false).methods, c);
  SaveCheckpoint(*run.model, o.checkpoint);
  if (!o.log.empty()) WriteTextFile(o.log, LossCsv(run.history.loss, &run.history.accuracy));
  std::printf("pretrain: %zu pairs, %zu epochs, final loss %.6f, pair accuracy %.4f\n",
              run.history.pairs, run.history.loss.size(), run.history.loss.back(),
              run.final_accuracy);
  return 0;
}

int TrainCmd(const Options& o) {
  const RunConfig c = ResolveConfig(o);
  std::unique_ptr<BastsModel> pretrained;
  if (!o.pretrained.empty()) pretrained = LoadCheckpoint(o.pretrained);
  TrainRun run = RunTrain(Prepare(o, c, true).methods, c, std::move(pretrained));
  SaveCheckpoint(*run.model, o.checkpoint);
  if (!o.log.empty()) WriteTextFile(o.log, LossCsv(run.history.loss));
  std::printf("train: %zu epochs, final loss %.6f\n", run.history.loss.size(),
              run.history.loss.back());
  return 0;
}

std::vector<Words> ReadLines(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<Words> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ws(line);
    Words w;
    for (std::string t; ws >> t;) w.push_back(t);
    out.push_back(std::move(w));
  }
  return out;
}

int EvalCmd(const Options& o) {
  const RunConfig c = ResolveConfig(o);
  EvalReport report;
  if (!o.hyp.empty()) {
    report = Evaluate(ReadLines(o.hyp), ReadLines(o.ref), c.bleu_smoothing);
  } else {
    auto model = LoadCheckpoint(o.checkpoint);
    PreprocessResult test = Prepare(o, c, true);
    if (c.dedupe) {
      if (o.train.empty()) throw ConfigError("dedupe = true needs --train <corpus>");
      const auto train = Preprocess(LoadCorpus(o.train), c).methods;
      const std::size_t removed = DropDuplicates(test.methods, train);
      std::cerr << removed << " test methods also in the training set removed\n";
    }
    report = EvaluateModel(*model, test.methods, c);
  }
  std::cout << FormatReportTable(report) << FormatReportJson(report) << "\n";
  if (!o.json.empty()) WriteTextFile(o.json, FormatReportJson(report) + "\n");
  return 0;
}

int SummarizeCmd(const Options& o) {
  const RunConfig c = ResolveConfig(o);
  auto model = LoadCheckpoint(o.checkpoint);
  const auto methods = Prepare(o, c, false).methods;
  const auto summaries = SummarizeMethods(*model, methods, c);
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i)
    out += methods[i].id + "\t" + JoinWords(summaries[i]) + "\n";
  Emit(o, out);
  return 0;
}

Method FirstMethod(const std::string& path) {
  const auto methods = ParseFile(AbstractLiterals(Tokenize(ReadTextFile(path))));
  if (methods.empty()) throw EmptyInputError(path + " holds no method");
  return methods.front();
}

int CfgDump(const Options& o) {
  const Method m = FirstMethod(o.input);
  Emit(o, CfgToDot(BuildCfg(m), &m));
  return 0;
}

int DomDump(const Options& o) {
  const Method m = FirstMethod(o.input);
  const Cfg cfg = BuildCfg(m);
  Emit(o, DomTreeToDot(ComputeDominators(cfg), cfg, &m));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code summarization with block-wise AST splitting"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool needs_input = true) {
    sub->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    auto* in = sub->add_option("--input", o.input, "corpus (.jsonl) or source file");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "override the configured seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--output", o.output, "write to this file instead of standard output");
  };
  std::function<int()> run;

  auto* split = app.add_subcommand("split", "dump the code splits of every method as JSON Lines");
  common(split);
  split->callback([&] { run = [&] { return Split(o); }; });

  auto* pre = app.add_subcommand("pretrain", "pre-train the syntax encoder on successor pairs");
  common(pre);
  pre->add_option("--checkpoint", o.checkpoint, "output checkpoint")->required();
  pre->add_option("--log", o.log, "per-epoch loss CSV");
  pre->callback([&] { run = [&] { return PretrainCmd(o); }; });

  auto* train = app.add_subcommand("train", "train the summarizer");
  common(train);
  train->add_option("--checkpoint", o.checkpoint, "output checkpoint")->required();
  train->add_option("--log", o.log, "per-epoch loss CSV");
  auto* pt = train->add_option("--pretrained", o.pretrained, "pre-trained encoder checkpoint")
                 ->check(CLI::ExistingFile);
  auto* fs = train->add_flag("--from-scratch", o.from_scratch, "start from a fresh encoder");
  pt->excludes(fs);
  fs->excludes(pt);
  train->callback([&] {
    if (o.pretrained.empty() && !o.from_scratch)
      throw CLI::ValidationError("train", "give --pretrained <checkpoint> or --from-scratch");
    run = [&] { return TrainCmd(o); };
  });

  auto* eval = app.add_subcommand("eval", "score summaries against references");
  common(eval, false);
  eval->add_option("--hyp", o.hyp, "hypothesis file, one comment per line")->check(CLI::ExistingFile);
  eval->add_option("--ref", o.ref, "reference file, one comment per line")->check(CLI::ExistingFile);
  eval->add_option("--checkpoint", o.checkpoint, "trained checkpoint")->check(CLI::ExistingFile);
  eval->add_option("--train", o.train, "training corpus for dedupe = true")
      ->check(CLI::ExistingFile);
  eval->add_option("--json", o.json, "also write the JSON report here");
  eval->callback([&] {
    const bool files = !o.hyp.empty() || !o.ref.empty();
    if (files && (o.hyp.empty() || o.ref.empty()))
      throw CLI::ValidationError("eval", "--hyp and --ref go together");
    if (!files && (o.checkpoint.empty() || o.input.empty()))
      throw CLI::ValidationError("eval", "give --hyp/--ref or --checkpoint with --input");
    run = [&] { return EvalCmd(o); };
  });

  auto* summ = app.add_subcommand("summarize", "print one generated comment per method");
  common(summ);
  summ->add_option("--checkpoint", o.checkpoint, "trained checkpoint")->required()->check(CLI::ExistingFile);
  summ->callback([&] { run = [&] { return SummarizeCmd(o); }; });

  auto* cfg = app.add_subcommand("cfg", "control-flow graph tools");
  auto* cfg_dump = cfg->add_subcommand("dump", "Graphviz CFG of the first method");
  cfg->require_subcommand(1);
  common(cfg_dump);
  cfg_dump->callback([&] { run = [&] { return CfgDump(o); }; });

  auto* dom = app.add_subcommand("dom", "dominator tree tools");
  auto* dom_dump = dom->add_subcommand("dump", "Graphviz dominator tree of the first method");
  dom->require_subcommand(1);
  common(dom_dump);
  dom_dump->callback([&] { run = [&] { return DomDump(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
