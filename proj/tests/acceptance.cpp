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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each check compares against an independent oracle or a
// directly evaluated formula.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "basts/checkpoint.h"
#include "basts/config.h"
#include "basts/dominators.h"
#include "basts/kernels.h"
#include "basts/metrics.h"
#include "basts/pipeline.h"
#include "basts/sep.h"
#include "basts/splitter.h"
#include "basts/transformer.h"
#include "basts/tree_lstm.h"
#include "test_util.h"

namespace basts {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s [%.1fs / %.0fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, budget_s);
  std::fflush(stdout);
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome Dominators() {
  std::mt19937_64 rng(20240611);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 14);
    const Cfg g = testing::RandomReachableGraph(n, rng);
    const DomTree t = ComputeDominators(g);
    const auto oracle = BruteForceDominators(g);
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u)
        mismatches += t.Dominates(u, v) != (oracle[static_cast<std::size_t>(v)].count(u) == 1);
  }
  return {mismatches == 0, Fmt("200 graphs, %.0f mismatched (u, v) pairs", mismatches)};
}

Outcome GoldenSplit() {
  const SplitResult fig = SplitMethod(testing::RunningExample());
  const std::size_t splits = fig.graph.splits.size(), edges = fig.graph.successor_edges.size();
  bool straight = true;
  for (const char* src : {"void f() { a(); }", "int g(int x) { int y = x + 1; y = y * 2; return y; }",
                          "void h() { }", "void k() { s.close(); log.info(\"done\"); }"})
    straight = straight && SplitMethod(testing::Parse(src)).graph.splits.size() == 1;
  return {splits == 6 && edges == 5 && straight,
          Fmt("running example %.0f splits, %.0f edges; straight-line single split: ", static_cast<double>(splits),
              static_cast<double>(edges)) +
              (straight ? "yes" : "no")};
}

Outcome Gradients() {
  std::mt19937_64 rng(99);
  ParamStore ps;
  TreeLstm tree(ps, 12, 4);
  tree.Init(rng);
  SepHead head(ps, 4);
  head.Init(rng);
  double worst = 0.0;
  bool all = true;
  auto note = [&](const GradCheckReport& r) {
    worst = std::max(worst, r.max_rel_error);
    all = all && r.passed && r.max_rel_error < 1e-4;
  };
  auto row = [&] {
    Matrix m(1, 4);
    for (double& v : m.data) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    return m;
  };
  // (a) one cell with two children.
  const Matrix x = row(), h1 = row(), m1 = row(), h2 = row(), m2 = row();
  note(GradCheck(
      [&](Tape& t) {
        auto [h, m] = tree.Cell(t, t.constant(x), {t.constant(h1), t.constant(h2)},
                                {t.constant(m1), t.constant(m2)});
        return t.add(t.sum(t.mul(h, h)), t.sum(m));
      },
      tree.parameters()));
  // (b) whole 10-node trees.
  for (int k = 0; k < 3; ++k) {
    const IndexedTree tr = testing::RandomTree(10, 12, rng);
    note(GradCheck(
        [&](Tape& t) {
          Tensor e = tree.EncodeForest(t, {&tr});
          return t.sum(t.mul(e, e));
        },
        tree.parameters()));
  }
  // (c) pair loss through encoder and head.
  const IndexedTree a = testing::RandomTree(6, 12, rng), b = testing::RandomTree(4, 12, rng),
                    c = testing::RandomTree(5, 12, rng);
  std::vector<Parameter*> sep_params = tree.parameters();
  sep_params.push_back(head.weight());
  sep_params.push_back(head.bias());
  note(GradCheck(
      [&](Tape& t) {
        Tensor e = tree.EncodeForest(t, {&a, &b, &c});
        auto r = [&](int i) { return t.slice_rows(e, i, 1); };
        Tensor probs = t.concat_rows({head.Score(t, r(0), r(1)), head.Score(t, r(1), r(2)),
                                      head.Score(t, r(2), r(0))});
        return SepLoss(t, probs, {1, 1, 0});
      },
      sep_params));
  // (d) full summarizer forward at L = 8, H = 2, one layer each side.
  std::vector<std::string> ast_doc, code_doc, word_doc;
  for (int i = 0; i < 5; ++i) {
    ast_doc.push_back("a" + std::to_string(i));
    code_doc.push_back("c" + std::to_string(i));
    word_doc.push_back("w" + std::to_string(i));
  }
  BastsModel model(Vocab::Build({ast_doc}, 1), 8);
  TransformerConfig tc;
  tc.dim = 8;
  tc.heads = 2;
  tc.encoder_layers = 1;
  tc.decoder_layers = 1;
  model.AddTransformer(Vocab::Build({code_doc}, 1), Vocab::Build({word_doc}, 1), tc);
  model.InitTree(rng);
  model.InitTransformer(rng);
  for (Parameter* p : model.transformer().parameters())
    if (p->value.rows == 1)
      for (double& v : p->value.data) v += std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
  SummarizationExample ex{{7, 8, 9, 10, 11},
                          {testing::RandomTree(4, 12, rng), testing::RandomTree(3, 12, rng)},
                          {kBosId, 9, 10, 8, kEosId}};
  std::vector<Parameter*> all_params = model.transformer().parameters();
  for (Parameter* p : model.tree().parameters()) all_params.push_back(p);
  // The training objective: mean cross-entropy over the 4 target tokens.
  note(GradCheck([&](Tape& t) { return t.scale(model.SummedLoss(t, ex), 0.25); }, all_params));
  return {all, Fmt("max relative error %.3g over cell, 10-node trees, pair loss, summarizer", worst)};
}

Outcome SepOverfit() {
  const RunConfig c = LoadConfig(testing::DataPath("desk.conf"));
  const auto methods = Preprocess(LoadCorpus(testing::DataPath("sep_toy.jsonl")), c).methods;
  std::size_t min_splits = 1000;
  for (const auto& m : methods) min_splits = std::min(min_splits, m.split.graph.splits.size());
  const PretrainRun run = RunPretrain(methods, c);
  // Epoch-smoothed: means over consecutive 20-epoch windows.
  const auto& loss = run.history.loss;
  std::vector<double> smooth;
  for (std::size_t b = 0; b + 20 <= loss.size(); b += 20) {
    double s = 0;
    for (std::size_t i = b; i < b + 20; ++i) s += loss[i];
    smooth.push_back(s / 20);
  }
  bool decreasing = smooth.size() >= 2;
  for (std::size_t i = 1; i < smooth.size(); ++i) decreasing = decreasing && smooth[i] < smooth[i - 1];
  const bool ok = methods.size() == 8 && min_splits >= 3 && loss.size() == 200 &&
                  run.final_accuracy >= 0.95 && decreasing;
  return {ok, Fmt("%.0f methods (min %.0f splits), pair accuracy %.4f", static_cast<double>(methods.size()),
                  static_cast<double>(min_splits), run.final_accuracy) +
                  Fmt(", loss %.4f -> %.6f", smooth.front(), smooth.back()) +
                  (decreasing ? ", smoothed loss strictly decreasing" : ", smoothed loss NOT decreasing")};
}

Outcome SummarizerOverfit() {
  const RunConfig c = LoadConfig(testing::DataPath("desk.conf"));
  const auto methods = Preprocess(LoadCorpus(testing::DataPath("summarize_toy.jsonl")), c).methods;
  const TrainRun run = RunTrain(methods, c, nullptr);
  std::vector<SummarizationExample> examples;
  for (const auto& m : methods) examples.push_back(MakeExample(m, *run.model));
  const double ce = MeanTokenLoss(*run.model, examples);
  const auto hyps = SummarizeMethods(*run.model, methods, c);
  int exact = 0;
  std::vector<Words> refs;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    exact += hyps[i] == methods[i].comment_words;
    refs.push_back(methods[i].comment_words);
  }
  const EvalReport report = Evaluate(hyps, refs, c.bleu_smoothing);
  const bool ok = methods.size() == 16 && run.history.loss.size() <= 500 && ce < 0.05 && exact >= 15 &&
                  report.s_bleu >= 0.95;
  return {ok, Fmt("%.0f epochs, train cross-entropy %.5f, exact %.0f/16", static_cast<double>(run.history.loss.size()),
                  ce, exact) +
                  Fmt(", S-BLEU %.2f", 100 * report.s_bleu)};
}

Outcome Metrics() {
  double worst = 0.0;
  bool ok = true;
  for (const char* s : {"a", "the cat", "returns the number of idle connections"}) {
    const Words w = testing::Split(s);
    for (double v : {SentenceBleu(w, w), CorpusBleu({{w, w}}, static_cast<int>(std::min<std::size_t>(4, w.size()))),
                     RougeN(w, w, 1), RougeN(w, w, 2), RougeL(w, w), MeteorLite(w, w)})
      worst = std::max(worst, std::abs(v - 1.0));
  }
  auto near = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    ok = ok && std::abs(got - want) <= 1e-6;
  };
  ok = ok && worst <= 1e-6;
  near(RougeN(testing::Split("a b c"), testing::Split("a b d"), 1), 2.0 / 3);
  near(RougeL(testing::Split("a b c"), testing::Split("a c b")), 2.0 / 3);
  near(SentenceBleu(testing::Split("a a a"), testing::Split("a b"), 1, false), 1.0 / 3);
  near(SentenceBleu(testing::Split("a b c d"), testing::Split("a b c e"), 4, false), 0.0);
  return {ok, Fmt("largest deviation %.3g", worst)};
}

Outcome Positional() {
  const Matrix pe = PositionalEncodingMatrix(100, 64);
  double worst = 0.0;
  for (int d = 0; d < 100; ++d)
    for (int l = 0; l < 64; ++l) {
      const double angle = d / std::pow(10000.0, l / 64.0);
      worst = std::max(worst, std::abs(pe(d, l) - (l % 2 ? std::cos(angle) : std::sin(angle))));
    }
  return {pe.rows == 100 && pe.cols == 64 && worst <= 1e-12, Fmt("100 x 64, max |error| %.3g", worst)};
}

Outcome Attention() {
  std::mt19937_64 rng(8);
  auto rand = [&](int r, int c, double s = 1.0) {
    Matrix m(r, c);
    for (double& v : m.data) v = std::uniform_real_distribution<double>(-s, s)(rng);
    return m;
  };
  double row_err = 0.0, same_err = 0.0;
  int causal_ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ParamStore ps;
    TransformerConfig c;
    c.dim = 8;
    c.heads = 2;
    c.encoder_layers = 2;
    c.decoder_layers = 2;
    c.code_vocab = 20;
    c.word_vocab = 20;
    Transformer tr(ps, c);
    tr.Init(rng);
    Tape t;
    AttentionTrace trace;
    const std::vector<int> code{7, 8, 9, 10, 11, 12};
    Tensor mem = tr.Encode(t, t.constant(rand(3, 8)), code, 9, &trace);
    std::vector<int> prefix{kBosId};
    for (int i = 0; i < 7; ++i) prefix.push_back(7 + static_cast<int>(rng() % 13));
    const Matrix a = tr.DecodeLogits(t, mem, 6, prefix, &trace).value();
    for (const Tensor& w : trace)
      for (int r = 0; r < w.rows(); ++r) {
        double s = 0;
        for (int k = 0; k < w.cols(); ++k) s += w.value()(r, k);
        row_err = std::max(row_err, std::abs(s - 1.0));
      }
    // Perturb one target position; earlier logits must not move.
    const int s = 1 + static_cast<int>(rng() % 7);
    std::vector<int> changed = prefix;
    changed[static_cast<std::size_t>(s)] = changed[static_cast<std::size_t>(s)] == 7 ? 8 : 7;
    const Matrix b = tr.DecodeLogits(t, mem, 6, changed).value();
    bool same = true;
    for (int r = 0; r < s; ++r)
      for (int k = 0; k < a.cols; ++k) same = same && a(r, k) == b(r, k);
    causal_ok += same;
    // Identical value rows: every output row equals v Wv Wo.
    const auto& att = tr.encoder()[0].self;
    const Matrix v = rand(1, 8);
    Matrix kv(5, 8);
    for (int r = 0; r < 5; ++r) std::copy(v.data.begin(), v.data.end(), kv.row(r));
    Tape t2;
    const Matrix out = MultiHeadAttention(t2, t2.constant(rand(4, 8, 3.0)), t2.constant(kv), att, 2, nullptr).value();
    std::vector<double> want(8, 0.0), vw(8, 0.0);
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) vw[j] += v.data[k] * att.wv->value(k, j);
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) want[j] += vw[k] * att.wo->value(k, j);
    for (int r = 0; r < 4; ++r)
      for (int j = 0; j < 8; ++j) same_err = std::max(same_err, std::abs(out(r, j) - want[j]));
  }
  return {row_err <= 1e-12 && same_err <= 1e-14 && causal_ok == 20,
          Fmt("row-sum error %.3g, identical-V error %.3g, causality %.0f/20", row_err, same_err, causal_ok)};
}

Outcome Determinism() {
  const RunConfig c = LoadConfig(testing::DataPath("tiny.conf"));
  auto once = [&](int threads) {
    kernels::SetMaxThreads(threads);
    const auto methods = Preprocess(LoadCorpus(testing::DataPath("summarize_toy.jsonl")), c).methods;
    PretrainRun pre = RunPretrain(methods, c);
    const std::string pre_log = LossCsv(pre.history.loss, &pre.history.accuracy);
    TrainRun run = RunTrain(methods, c, std::move(pre.model));
    return std::make_pair(SerializeCheckpoint(*run.model), pre_log + LossCsv(run.history.loss));
  };
  const auto a = once(1), b = once(1), p = once(3);
  kernels::SetMaxThreads(0);
  const bool ok = a == b && a == p;
  return {ok, Fmt("checkpoint %.0f bytes, FNV %.0f; repeat identical: ", static_cast<double>(a.first.size()),
                  static_cast<double>(Fnv1a64(a.first) % 100000)) +
                  (a == b ? "yes" : "no") + ", 3-thread run identical: " + (a == p ? "yes" : "no")};
}

}  // namespace
}  // namespace basts

int main() {
  using namespace basts;
  Criterion(1, "dominators match brute force on random graphs", 10, Dominators);
  Criterion(2, "running example splits into 6 parts with 5 edges", 10, GoldenSplit);
  Criterion(3, "finite-difference gradient checks", 60, Gradients);
  Criterion(4, "successor-pair pre-training overfits the toy corpus", 120, SepOverfit);
  Criterion(5, "summarizer overfits 16 toy pairs", 600, SummarizerOverfit);
  Criterion(6, "metric golden values", 10, Metrics);
  Criterion(7, "positional encoding matrix", 10, Positional);
  Criterion(8, "attention row sums, identical values, causality", 30, Attention);
  Criterion(9, "training is bit-reproducible", 300, Determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
