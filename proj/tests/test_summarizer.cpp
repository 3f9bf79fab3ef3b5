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

#include <algorithm>
#include <cmath>
#include <random>

#include "basts/errors.h"
#include "basts/model.h"
#include "basts/transformer.h"
#include "doctest.h"
#include "test_util.h"

namespace basts {
namespace {

using Grid = std::vector<std::vector<double>>;

// Plain-loop reference algebra, independent of the tape and the kernels.
Grid ToGrid(const Matrix& m) {
  Grid g(static_cast<std::size_t>(m.rows), std::vector<double>(static_cast<std::size_t>(m.cols)));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) g[r][c] = m(r, c);
  return g;
}

Grid Mul(const Grid& a, const Grid& b) {
  Grid out(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Grid Add(Grid a, const Grid& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
  return a;
}

Grid AddRow(Grid a, const std::vector<double>& b) {
  for (auto& row : a)
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += b[j];
  return a;
}

Grid Relu(Grid a) {
  for (auto& row : a)
    for (double& v : row) v = std::max(0.0, v);
  return a;
}

Grid Transpose(const Grid& a) {
  Grid t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Grid Norm(Grid a, const std::vector<double>& g, const std::vector<double>& b) {
  for (auto& row : a) {
    double mean = 0, var = 0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(row.size());
    for (double v : row) var += (v - mean) * (v - mean);
    var /= static_cast<double>(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
      row[j] = g[j] * (row[j] - mean) / std::sqrt(var + 1e-6) + b[j];
  }
  return a;
}

// Single-head attention with optional key-validity limit.
Grid Attend(const Grid& q, const Grid& kv, const Grid& wq, const Grid& wk, const Grid& wv,
            const Grid& wo, std::size_t valid_keys) {
  Grid Q = Mul(q, wq), K = Mul(kv, wk), V = Mul(kv, wv);
  Grid S = Mul(Q, Transpose(K));
  const double scale = 1.0 / std::sqrt(static_cast<double>(wq[0].size()));
  for (auto& row : S) {
    double mx = -1e300;
    for (std::size_t j = 0; j < valid_keys; ++j) mx = std::max(mx, row[j] * scale);
    double z = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = j < valid_keys ? std::exp(row[j] * scale - mx) : 0.0;
      z += row[j];
    }
    for (double& v : row) v /= z;
  }
  return Mul(Mul(S, V), wo);
}

std::vector<double> Vec(const Parameter* p) { return p->value.data; }

Vocab WordVocab(int regular) {
  std::vector<std::string> doc;
  for (int i = 0; i < regular; ++i) doc.push_back("w" + std::to_string(i));
  return Vocab::Build({doc}, 1);
}

TransformerConfig SmallConfig(int dim, int heads, int enc, int dec, int code, int word) {
  TransformerConfig c;
  c.dim = dim;
  c.heads = heads;
  c.encoder_layers = enc;
  c.decoder_layers = dec;
  c.code_vocab = code;
  c.word_vocab = word;
  return c;
}

Matrix RandomMatrix(int r, int c, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(r, c);
  for (double& v : m.data) v = u(rng);
  return m;
}

void SetValues(Parameter* p, std::vector<double> v) {
  REQUIRE(v.size() == p->value.data.size());
  p->value.data = std::move(v);
}

TEST_CASE("average pooling") {
  ParamStore ps;
  Transformer tr(ps, SmallConfig(2, 1, 0, 0, 8, 8));
  Tape t;
  CHECK(tr.AvgPool(t, t.constant(Matrix::FromRows({{1, 3}, {3, 1}}))).value().data ==
        std::vector<double>{2, 2});
  CHECK(tr.AvgPool(t, t.constant(Matrix::FromRows({{0.25, -7}}))).value().data ==
        std::vector<double>{0.25, -7});
  CHECK(tr.AvgPool(t, t.constant(Matrix::FromRows({{0.25, -0.375}, {0.25, -0.375}, {0.25, -0.375}})))
            .value()
            .data == std::vector<double>{0.25, -0.375});
  CHECK_THROWS_AS(tr.AvgPool(t, t.constant(Matrix(0, 2))), EmptyInputError);
}

TEST_CASE("fusion layer") {
  ParamStore ps;
  Transformer tr(ps, SmallConfig(2, 1, 0, 0, 8, 8));
  Tape t;
  Tensor pooled = t.constant(Matrix::FromRows({{0.5, -0.25}}));
  Tensor tokens = t.constant(Matrix::FromRows({{1.0, 2.0}, {-3.0, 0.5}}));
  CHECK(tr.Fuse(t, pooled, tokens).value().data == std::vector<double>(4, 0.0));

  // [I | 0]: the first half of the concatenation passes through.
  SetValues(tr.fuse_weight(), {1, 0, 0, 1, 0, 0, 0, 0});
  Tape t2;
  Tensor f = tr.Fuse(t2, t2.constant(Matrix::FromRows({{0.5, -0.25}})),
                     t2.constant(Matrix::FromRows({{1.0, 2.0}, {-3.0, 0.5}})));
  CHECK(f.value().data == std::vector<double>{0.5, 0.0, 0.5, 0.0});

  // Hand-evaluated affine map then ReLU.
  SetValues(tr.fuse_weight(), {0.1, -0.2, 0.3, 0.4, -0.5, 0.6, 0.7, -0.8});
  SetValues(tr.fuse_bias(), {0.05, -0.1});
  Tape t3;
  Tensor g = tr.Fuse(t3, t3.constant(Matrix::FromRows({{1.0, 2.0}})),
                     t3.constant(Matrix::FromRows({{3.0, -1.0}})));
  // x = [1, 2, 3, -1]
  const double c0 = 1 * 0.1 + 2 * 0.3 + 3 * -0.5 + -1 * 0.7 + 0.05;  // -1.45 -> 0
  const double c1 = 1 * -0.2 + 2 * 0.4 + 3 * 0.6 + -1 * -0.8 - 0.1;  // 3.1
  CHECK(g.value()(0, 0) == doctest::Approx(std::max(0.0, c0)).epsilon(1e-14));
  CHECK(g.value()(0, 1) == doctest::Approx(c1).epsilon(1e-14));
  CHECK_THROWS_AS(tr.Fuse(t3, t3.constant(Matrix(1, 3)), t3.constant(Matrix(1, 2))), ShapeError);
}

TEST_CASE("positional encoding values") {
  CHECK(PositionalEncoding(0, 0, 64) == 0.0);
  CHECK(PositionalEncoding(0, 6, 64) == 0.0);
  CHECK(PositionalEncoding(0, 1, 64) == 1.0);
  CHECK(PositionalEncoding(3, 0, 64) == doctest::Approx(0.141120).epsilon(1e-6));
  CHECK(PositionalEncoding(1, 1, 64) ==
        doctest::Approx(std::cos(1.0 / std::pow(10000.0, 1.0 / 64))).epsilon(1e-15));
  const Matrix pe = PositionalEncodingMatrix(100, 64);
  double worst = 0.0;
  for (int d = 0; d < 100; ++d)
    for (int l = 0; l < 64; ++l) {
      const double a = d * std::exp(-std::log(10000.0) * l / 64.0);
      const double want = l % 2 == 0 ? std::sin(a) : std::cos(a);
      worst = std::max(worst, std::abs(pe(d, l) - want));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("two-position single-head attention by hand") {
  ParamStore ps;
  AttentionParams p{&ps.Add("q", 2, 2), &ps.Add("k", 2, 2), &ps.Add("v", 2, 2), &ps.Add("o", 2, 2)};
  SetValues(p.wq, {1, 0, 0, 1});
  SetValues(p.wk, {0.5, 0, 0, 2});
  SetValues(p.wv, {1, 1, 0, 1});
  SetValues(p.wo, {1, 0, 0, -1});
  Tape t;
  Tensor x = t.constant(Matrix::FromRows({{1, 0}, {0, 1}}));
  Tensor out = MultiHeadAttention(t, x, x, p, 1, nullptr);
  // Q = X, K = diag(0.5, 2), scores = K / sqrt 2.
  const double s = 1 / std::sqrt(2.0);
  const double a0 = std::exp(0.5 * s) / (std::exp(0.5 * s) + 1.0);  // row 0: [0.5s, 0]
  const double a1 = 1.0 / (1.0 + std::exp(2 * s));                  // row 1: [0, 2s]
  // V = [[1,1],[0,1]]; out = A V Wo.
  const double r0c0 = a0, r0c1 = -(a0 + (1 - a0));
  const double r1c0 = a1, r1c1 = -(a1 + (1 - a1));
  CHECK(out.value()(0, 0) == doctest::Approx(r0c0).epsilon(1e-14));
  CHECK(out.value()(0, 1) == doctest::Approx(r0c1).epsilon(1e-14));
  CHECK(out.value()(1, 0) == doctest::Approx(r1c0).epsilon(1e-14));
  CHECK(out.value()(1, 1) == doctest::Approx(r1c1).epsilon(1e-14));
  CHECK_THROWS_AS(MultiHeadAttention(t, t.constant(Matrix(1, 3)), x, p, 1, nullptr), ShapeError);
  CHECK_THROWS_AS(MultiHeadAttention(t, x, x, p, 3, nullptr), ShapeError);
}

TEST_CASE("identical value rows and single positions pass straight through") {
  std::mt19937_64 rng(3);
  ParamStore ps;
  const int L = 8;
  AttentionParams p{&ps.Add("q", L, L), &ps.Add("k", L, L), &ps.Add("v", L, L), &ps.Add("o", L, L)};
  for (Parameter* w : {p.wq, p.wk, p.wv, p.wo}) w->value = RandomMatrix(L, L, rng);
  for (int trial = 0; trial < 10; ++trial) {
    Tape t;
    const Matrix row = RandomMatrix(1, L, rng);
    Matrix kv(5, L);
    for (int r = 0; r < 5; ++r) std::copy(row.data.begin(), row.data.end(), kv.row(r));
    Tensor q = t.constant(RandomMatrix(3, L, rng, 2.0));
    Tensor out = MultiHeadAttention(t, q, t.constant(kv), p, 2, nullptr);
    const Grid want = Mul(Mul(ToGrid(row), ToGrid(p.wv->value)), ToGrid(p.wo->value));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < L; ++c) CHECK(std::abs(out.value()(r, c) - want[0][c]) <= 1e-14);
  }
  Tape t;
  const Matrix x = RandomMatrix(1, L, rng);
  Tensor single = MultiHeadAttention(t, t.constant(x), t.constant(x), p, 4, nullptr);
  const Grid want = Mul(Mul(ToGrid(x), ToGrid(p.wv->value)), ToGrid(p.wo->value));
  for (int c = 0; c < L; ++c) CHECK(std::abs(single.value()(0, c) - want[0][c]) <= 1e-14);
}

TEST_CASE("attention rows are distributions") {
  std::mt19937_64 rng(5);
  ParamStore ps;
  TransformerConfig c = SmallConfig(8, 2, 2, 2, 12, 12);
  Transformer tr(ps, c);
  tr.Init(rng);
  Tape t;
  AttentionTrace trace;
  Tensor mem = tr.Encode(t, t.constant(RandomMatrix(3, 8, rng)), {7, 8, 9, 10}, 7, &trace);
  tr.DecodeLogits(t, mem, 4, {kBosId, 7, 8, 9}, &trace);
  CHECK(trace.size() == 2 * 2 + 2 * 2 * 2);
  for (const Tensor& w : trace)
    for (int r = 0; r < w.rows(); ++r) {
      double sum = 0.0;
      for (int k = 0; k < w.cols(); ++k) sum += w.value()(r, k);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("encoder with no layers is fused input plus positions") {
  std::mt19937_64 rng(7);
  ParamStore ps;
  Transformer tr(ps, SmallConfig(4, 2, 0, 1, 10, 10));
  tr.Init(rng);
  Tape t;
  const Matrix splits = RandomMatrix(2, 4, rng);
  const std::vector<int> ids{7, 8, 9};
  Tensor enc = tr.Encode(t, t.constant(splits), ids);
  CHECK(enc.rows() == 3);
  CHECK(enc.cols() == 4);
  Grid pooled{{0, 0, 0, 0}};
  for (int c = 0; c < 4; ++c) pooled[0][c] = (splits(0, c) + splits(1, c)) / 2;
  const Grid table = ToGrid(tr.code_embedding()->value);
  Grid x;
  for (int id : ids) {
    std::vector<double> row = pooled[0];
    row.insert(row.end(), table[id].begin(), table[id].end());
    x.push_back(row);
  }
  Grid fused = Relu(AddRow(Mul(x, ToGrid(tr.fuse_weight()->value)), Vec(tr.fuse_bias())));
  for (int d = 0; d < 3; ++d)
    for (int l = 0; l < 4; ++l)
      CHECK(enc.value()(d, l) == doctest::Approx(fused[d][l] + PositionalEncoding(d, l, 4)).epsilon(1e-14));
  // Output shape is D x L whatever the depth.
  for (int layers : {1, 3}) {
    ParamStore ps2;
    Transformer deep(ps2, SmallConfig(4, 2, layers, 1, 10, 10));
    deep.Init(rng);
    Tape t2;
    Tensor e = deep.Encode(t2, t2.constant(splits), ids, 5);
    CHECK(e.rows() == 5);
    CHECK(e.cols() == 4);
  }
}

TEST_CASE("one encoder layer matches manual composition") {
  std::mt19937_64 rng(11);
  ParamStore ps;
  Transformer tr(ps, SmallConfig(2, 1, 1, 0, 9, 9));
  tr.Init(rng);
  // Random (not default) norm and bias values so every term matters.
  for (Parameter* p : tr.parameters()) p->value = RandomMatrix(p->value.rows, p->value.cols, rng);
  Tape t;
  const Matrix splits = RandomMatrix(3, 2, rng);
  const std::vector<int> ids{7, 8, 7};
  Tensor enc = tr.Encode(t, t.constant(splits), ids);

  const auto& layer = tr.encoder()[0];
  Grid pooled{{0, 0}};
  for (int c = 0; c < 2; ++c) pooled[0][c] = (splits(0, c) + splits(1, c) + splits(2, c)) / 3;
  const Grid table = ToGrid(tr.code_embedding()->value);
  Grid x;
  for (int id : ids) x.push_back({pooled[0][0], pooled[0][1], table[id][0], table[id][1]});
  Grid h = Relu(AddRow(Mul(x, ToGrid(tr.fuse_weight()->value)), Vec(tr.fuse_bias())));
  for (int d = 0; d < 3; ++d)
    for (int l = 0; l < 2; ++l) h[d][l] += PositionalEncoding(d, l, 2);
  const Grid att = Attend(h, h, ToGrid(layer.self.wq->value), ToGrid(layer.self.wk->value),
                          ToGrid(layer.self.wv->value), ToGrid(layer.self.wo->value), 3);
  h = Norm(Add(h, att), Vec(layer.norm1.gamma), Vec(layer.norm1.beta));
  Grid ff = Relu(AddRow(Mul(h, ToGrid(layer.ffn.w1->value)), Vec(layer.ffn.b1)));
  ff = AddRow(Mul(ff, ToGrid(layer.ffn.w2->value)), Vec(layer.ffn.b2));
  h = Norm(Add(h, ff), Vec(layer.norm2.gamma), Vec(layer.norm2.beta));
  for (int d = 0; d < 3; ++d)
    for (int l = 0; l < 2; ++l) CHECK(enc.value()(d, l) == doctest::Approx(h[d][l]).epsilon(1e-12));
}

TEST_CASE("decoder logits never see later target tokens") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    ParamStore ps;
    Transformer tr(ps, SmallConfig(8, 2, 1, 2, 15, 15));
    tr.Init(rng);
    Tape t;
    Tensor mem = tr.Encode(t, t.constant(RandomMatrix(2, 8, rng)), {7, 8, 9, 10, 11});
    std::uniform_int_distribution<int> word(3, 14);
    std::vector<int> prefix{kBosId};
    for (int i = 0; i < 6; ++i) prefix.push_back(word(rng));
    const int s = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<int> changed = prefix;
    changed[static_cast<std::size_t>(s)] = changed[static_cast<std::size_t>(s)] == 3 ? 4 : 3;
    const Matrix a = tr.DecodeLogits(t, mem, 5, prefix).value();
    const Matrix b = tr.DecodeLogits(t, mem, 5, changed).value();
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < a.cols; ++c) CHECK(a(r, c) == b(r, c));
    bool differs = false;
    for (int c = 0; c < a.cols; ++c) differs = differs || a(s, c) != b(s, c);
    CHECK(differs);
  }
}

TEST_CASE("padding leaves real encoder rows unchanged") {
  std::mt19937_64 rng(17);
  ParamStore ps;
  Transformer tr(ps, SmallConfig(8, 2, 2, 1, 15, 15));
  tr.Init(rng);
  const Matrix splits = RandomMatrix(3, 8, rng);
  const std::vector<int> ids{7, 12, 9, 14};
  Tape t;
  const Matrix plain = tr.Encode(t, t.constant(splits), ids).value();
  for (int pad : {5, 9, 30}) {
    const Matrix padded = tr.Encode(t, t.constant(splits), ids, pad).value();
    CHECK(padded.rows == pad);
    double worst = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 8; ++c) worst = std::max(worst, std::abs(plain(r, c) - padded(r, c)));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("end-to-end gradient check on a tiny summarizer") {
  std::mt19937_64 rng(19);
  BastsModel model(WordVocab(3), 8);
  model.AddTransformer(WordVocab(5), WordVocab(5), SmallConfig(8, 2, 1, 1, 0, 0));
  model.InitTree(rng);
  model.InitTransformer(rng);
  // Nonzero norms and biases so their gradients are exercised.
  for (Parameter* p : model.transformer().parameters())
    if (p->value.rows == 1)
      for (double& v : p->value.data) v += std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
  SummarizationExample ex;
  ex.code_ids = {7, 8, 9, 10, 11};
  ex.trees = {testing::RandomTree(4, 10, rng), testing::RandomTree(3, 10, rng)};
  ex.comment_ids = {kBosId, 9, 11, 8, kEosId};
  std::vector<Parameter*> params = model.transformer().parameters();
  for (Parameter* p : model.tree().parameters()) params.push_back(p);
  const GradCheckReport report =
      GradCheck([&](Tape& t) { return t.scale(model.SummedLoss(t, ex), 0.25); }, params, 1e-5, 1e-4);
  INFO("worst " << report.worst << " rel " << report.max_rel_error);
  CHECK(report.passed);
  CHECK(report.max_rel_error < 1e-4);
  CHECK(report.checked == static_cast<int>(model.store().NumValues()) - 2 * 8 - 1);
}

TEST_CASE("uniform outputs cost ln|W| per token") {
  std::mt19937_64 rng(23);
  BastsModel model(WordVocab(3), 8);
  model.AddTransformer(WordVocab(4), WordVocab(13), SmallConfig(8, 2, 1, 1, 0, 0));
  model.InitTree(rng);
  model.InitTransformer(rng);
  std::fill(model.transformer().output_projection()->value.data.begin(),
            model.transformer().output_projection()->value.data.end(), 0.0);
  SummarizationExample ex{{7, 8}, {testing::RandomTree(3, 10, rng)}, {kBosId, 7, 9, kEosId}};
  CHECK(MeanTokenLoss(model, {ex}) == doctest::Approx(std::log(20.0)).epsilon(1e-12));
  // All logits tie: the lowest eligible id is EOS, so nothing is emitted.
  CHECK(model.Summarize(ex, 30).empty());
}

TEST_CASE("a batch of duplicates trains like the single example") {
  auto run = [](int copies) {
    std::mt19937_64 rng(29);
    auto model = std::make_unique<BastsModel>(WordVocab(3), 8);
    model->AddTransformer(WordVocab(4), WordVocab(6), SmallConfig(8, 2, 1, 1, 0, 0));
    model->InitTree(rng);
    model->InitTransformer(rng);
    SummarizationExample ex{{7, 8, 9}, {testing::RandomTree(4, 10, rng)}, {kBosId, 7, 10, kEosId}};
    TrainOptions opt;
    opt.epochs = 1;
    opt.batch_size = 8;
    const auto history = TrainSummarizer(*model, std::vector<SummarizationExample>(copies, ex), opt);
    return std::make_pair(history.loss[0], std::move(model));
  };
  auto [loss1, m1] = run(1);
  auto [loss2, m2] = run(2);
  CHECK(loss1 == doctest::Approx(loss2).epsilon(1e-14));
  double worst = 0.0;
  for (std::size_t i = 0; i < m1->store().params().size(); ++i) {
    const auto& a = m1->store().params()[i]->value.data;
    const auto& b = m2->store().params()[i]->value.data;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("greedy decoding: determinism, length cap and exclusions") {
  std::mt19937_64 rng(31);
  BastsModel model(WordVocab(3), 8);
  model.AddTransformer(WordVocab(4), WordVocab(6), SmallConfig(8, 2, 1, 1, 0, 0));
  model.InitTree(rng);
  model.InitTransformer(rng);
  SummarizationExample ex{{7, 8, 9}, {testing::RandomTree(5, 10, rng)}, {kBosId, 7, kEosId}};
  const auto first = model.Summarize(ex, 30);
  CHECK(model.Summarize(ex, 30) == first);
  CHECK(first.size() <= 30);
  for (int w : first) {
    CHECK(w != kPadId);
    CHECK(w != kBosId);
    CHECK(w != kEosId);
  }
  // Make word 9 dominate every position; PAD and BOS are even larger but
  // must be skipped.
  Parameter* out = model.transformer().output_projection();
  std::fill(out->value.data.begin(), out->value.data.end(), 0.0);
  for (int r = 0; r < out->value.rows; ++r) {
    out->value(r, 9) = 5.0;
    out->value(r, kPadId) = 50.0;
    out->value(r, kBosId) = 50.0;
  }
  for (auto& v : model.transformer().decoder().back().norm3.beta->value.data) v = 1.0;
  for (auto& v : model.transformer().decoder().back().norm3.gamma->value.data) v = 0.0;
  CHECK(model.Summarize(ex, 1) == std::vector<int>{9});
  CHECK(model.Summarize(ex, 4) == std::vector<int>(4, 9));
  CHECK(model.Summarize(ex, 0).empty());
}

TEST_CASE("short training run lowers the loss") {
  std::mt19937_64 rng(37);
  BastsModel model(WordVocab(3), 16);
  model.AddTransformer(WordVocab(6), WordVocab(8), SmallConfig(16, 2, 1, 1, 0, 0));
  model.InitTree(rng);
  model.InitTransformer(rng);
  std::vector<SummarizationExample> data{
      {{7, 8, 9}, {testing::RandomTree(4, 10, rng)}, {kBosId, 7, 8, kEosId}},
      {{10, 11, 12}, {testing::RandomTree(5, 10, rng)}, {kBosId, 12, 13, 14, kEosId}}};
  TrainOptions opt;
  opt.epochs = 60;
  opt.lr = 3e-3;
  const double before = MeanTokenLoss(model, data);
  const auto history = TrainSummarizer(model, data, opt);
  CHECK(history.loss.size() == 60);
  CHECK(history.loss.back() < 0.5 * history.loss.front());
  CHECK(MeanTokenLoss(model, data) < 0.5 * before);
  CHECK(model.Summarize(data[0], 10) == std::vector<int>{7, 8});
  CHECK(model.Summarize(data[1], 10) == std::vector<int>{12, 13, 14});
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(SmallConfig(6, 4, 1, 1, 10, 10).Validate(), ConfigError);
  CHECK_THROWS_AS(SmallConfig(8, 2, -1, 1, 10, 10).Validate(), ConfigError);
  CHECK_THROWS_AS(SmallConfig(8, 2, 1, 1, 3, 10).Validate(), ConfigError);
  CHECK_NOTHROW(SmallConfig(8, 2, 0, 0, 10, 10).Validate());
  BastsModel model(WordVocab(3), 8);
  CHECK_THROWS_AS(model.transformer(), Error);
  CHECK_THROWS_AS(model.AddTransformer(WordVocab(2), WordVocab(2), SmallConfig(16, 2, 1, 1, 0, 0)),
                  ConfigError);
  TrainOptions bad;
  bad.epochs = 0;
  CHECK_THROWS_AS(TrainSummarizer(model, {}, bad), ConfigError);
}

}  // namespace
}  // namespace basts
