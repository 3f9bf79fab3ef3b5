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

#include "basts/transformer.h"

#include <cmath>

#include "basts/errors.h"
#include "basts/vocab.h"

namespace basts {

void TransformerConfig::Validate() const {
  if (dim <= 0 || heads <= 0) throw ConfigError("embedding size and heads must be positive");
  if (dim % heads != 0)
    throw ConfigError("embedding size " + std::to_string(dim) + " not divisible by " +
                      std::to_string(heads) + " heads");
  if (encoder_layers < 0 || decoder_layers < 0) throw ConfigError("negative layer count");
  if (ffn_dim < 0) throw ConfigError("negative feed-forward size");
  if (code_vocab <= kNumSpecials - 1 || word_vocab <= kNumSpecials - 1)
    throw ConfigError("vocabulary sizes must include the special tokens");
}

double PositionalEncoding(int d, int l, int dim) {
  const double angle = d / std::pow(10000.0, static_cast<double>(l) / dim);
  return (l % 2 == 0) ? std::sin(angle) : std::cos(angle);
}

Matrix PositionalEncodingMatrix(int positions, int dim) {
  Matrix m(positions, dim);
  for (int d = 0; d < positions; ++d)
    for (int l = 0; l < dim; ++l) m(d, l) = PositionalEncoding(d, l, dim);
  return m;
}

Tensor MultiHeadAttention(Tape& t, Tensor queries, Tensor keys_values, const AttentionParams& p,
                          int heads, const Mask* mask, AttentionTrace* trace) {
  const int dim = p.wq->value.rows;
  if (queries.cols() != dim || keys_values.cols() != dim)
    throw ShapeError("attention inputs " + queries.value().ShapeString() + " / " +
                     keys_values.value().ShapeString() + " for width " + std::to_string(dim));
  if (heads <= 0 || dim % heads != 0) throw ShapeError("attention width not divisible by heads");
  const int hw = dim / heads;
  Tensor q = t.matmul(queries, t.param(*p.wq));
  Tensor k = t.matmul(keys_values, t.param(*p.wk));
  Tensor v = t.matmul(keys_values, t.param(*p.wv));
  std::vector<Tensor> outs;
  for (int h = 0; h < heads; ++h) {
    Tensor qh = t.slice_cols(q, h * hw, hw);
    Tensor kh = t.slice_cols(k, h * hw, hw);
    Tensor vh = t.slice_cols(v, h * hw, hw);
    Tensor scores = t.scale(t.matmul_nt(qh, kh), 1.0 / std::sqrt(static_cast<double>(hw)));
    Tensor weights = t.softmax_rows(scores, mask);
    if (trace != nullptr) trace->push_back(weights);
    outs.push_back(t.matmul(weights, vh));
  }
  Tensor joined = heads == 1 ? outs[0] : t.concat_cols(outs);
  return t.matmul(joined, t.param(*p.wo));
}

Transformer::Transformer(ParamStore& store, const TransformerConfig& config,
                         const std::string& prefix)
    : config_(config) {
  config_.Validate();
  const int L = config_.dim, F = config_.ffn();
  auto add = [&](const std::string& name, int r, int c) {
    Parameter* p = &store.Add(prefix + "/" + name, r, c);
    params_.push_back(p);
    return p;
  };
  auto attention = [&](const std::string& s) {
    return AttentionParams{add(s + "/Wq", L, L), add(s + "/Wk", L, L), add(s + "/Wv", L, L),
                           add(s + "/Wo", L, L)};
  };
  auto norm = [&](const std::string& s) {
    return NormParams{add(s + "/gamma", 1, L), add(s + "/beta", 1, L)};
  };
  auto ffn = [&](const std::string& s) {
    return FeedForwardParams{add(s + "/W1", L, F), add(s + "/b1", 1, F), add(s + "/W2", F, L),
                             add(s + "/b2", 1, L)};
  };
  code_embed_ = add("code_embedding", config_.code_vocab, L);
  word_embed_ = add("word_embedding", config_.word_vocab, L);
  fuse_w_ = add("fuse/W", 2 * L, L);
  fuse_b_ = add("fuse/b", 1, L);
  for (int i = 0; i < config_.encoder_layers; ++i) {
    const std::string s = "encoder" + std::to_string(i);
    EncoderLayerParams e;
    e.self = attention(s + "/self");
    e.norm1 = norm(s + "/norm1");
    e.ffn = ffn(s + "/ffn");
    e.norm2 = norm(s + "/norm2");
    enc_.push_back(e);
  }
  for (int i = 0; i < config_.decoder_layers; ++i) {
    const std::string s = "decoder" + std::to_string(i);
    DecoderLayerParams d;
    d.self = attention(s + "/self");
    d.norm1 = norm(s + "/norm1");
    d.cross = attention(s + "/cross");
    d.norm2 = norm(s + "/norm2");
    d.ffn = ffn(s + "/ffn");
    d.norm3 = norm(s + "/norm3");
    dec_.push_back(d);
  }
  out_proj_ = add("output", L, config_.word_vocab);
}

void Transformer::Init(std::mt19937_64& rng) {
  for (Parameter* p : params_) {
    const std::string& n = p->name;
    const bool is_gamma = n.size() >= 5 && n.compare(n.size() - 5, 5, "gamma") == 0;
    if (is_gamma) {
      std::fill(p->value.data.begin(), p->value.data.end(), 1.0);
    } else if (p->value.rows == 1) {
      std::fill(p->value.data.begin(), p->value.data.end(), 0.0);
    } else {
      ParamStore::InitXavier(*p, rng);
    }
  }
}

Tensor Transformer::AvgPool(Tape& t, Tensor split_embeddings) const {
  if (split_embeddings.rows() == 0) throw EmptyInputError("no syntax embeddings to pool");
  return t.mean_rows(split_embeddings);
}

Tensor Transformer::Fuse(Tape& t, Tensor pooled, Tensor tokens) const {
  if (pooled.rows() != 1 || pooled.cols() != config_.dim || tokens.cols() != config_.dim)
    throw ShapeError("fuse: " + pooled.value().ShapeString() + " / " +
                     tokens.value().ShapeString());
  std::vector<std::pair<int, int>> repeat(static_cast<std::size_t>(tokens.rows()), {0, 0});
  Tensor x = t.concat_cols({t.gather({pooled}, repeat), tokens});
  return t.relu(t.add_rowwise(t.matmul(x, t.param(*fuse_w_)), t.param(*fuse_b_)));
}

Tensor Transformer::FeedForward(Tape& t, Tensor x, const FeedForwardParams& p) const {
  Tensor h = t.relu(t.add_rowwise(t.matmul(x, t.param(*p.w1)), t.param(*p.b1)));
  return t.add_rowwise(t.matmul(h, t.param(*p.w2)), t.param(*p.b2));
}

Tensor Transformer::Norm(Tape& t, Tensor x, const NormParams& p) const {
  return t.layer_norm_rows(x, t.param(*p.gamma), t.param(*p.beta), 1e-6);
}

Tensor Transformer::Encode(Tape& t, Tensor split_embeddings, const std::vector<int>& code_ids,
                           int pad_to, AttentionTrace* trace) const {
  if (code_ids.empty()) throw EmptyInputError("empty code sequence");
  const int valid = static_cast<int>(code_ids.size());
  std::vector<int> ids = code_ids;
  if (pad_to > valid) ids.resize(static_cast<std::size_t>(pad_to), kPadId);
  const int D = static_cast<int>(ids.size());
  Tensor tokens = t.embedding(t.param(*code_embed_), ids);
  Tensor x = Fuse(t, AvgPool(t, split_embeddings), tokens);
  x = t.add(x, t.constant(PositionalEncodingMatrix(D, config_.dim)));
  const Mask mask = Mask::KeyPadding(D, D, valid);
  for (const auto& layer : enc_) {
    x = Norm(t, t.add(x, MultiHeadAttention(t, x, x, layer.self, config_.heads, &mask, trace)),
             layer.norm1);
    x = Norm(t, t.add(x, FeedForward(t, x, layer.ffn)), layer.norm2);
  }
  return x;
}

Tensor Transformer::DecodeLogits(Tape& t, Tensor memory, int memory_valid,
                                 const std::vector<int>& prefix, AttentionTrace* trace) const {
  if (prefix.empty()) throw EmptyInputError("empty decoder input");
  const int T = static_cast<int>(prefix.size());
  Tensor y = t.embedding(t.param(*word_embed_), prefix);
  y = t.add(y, t.constant(PositionalEncodingMatrix(T, config_.dim)));
  const Mask causal = Mask::Causal(T);
  const Mask cross = Mask::KeyPadding(T, memory.rows(), memory_valid);
  for (const auto& layer : dec_) {
    y = Norm(t, t.add(y, MultiHeadAttention(t, y, y, layer.self, config_.heads, &causal, trace)),
             layer.norm1);
    y = Norm(t,
             t.add(y, MultiHeadAttention(t, y, memory, layer.cross, config_.heads, &cross, trace)),
             layer.norm2);
    y = Norm(t, t.add(y, FeedForward(t, y, layer.ffn)), layer.norm3);
  }
  return t.matmul(y, t.param(*out_proj_));
}

Tensor Transformer::SummedLoss(Tape& t, Tensor split_embeddings, const std::vector<int>& code_ids,
                               const std::vector<int>& comment_ids) const {
  if (comment_ids.size() < 2) throw EmptyInputError("comment needs BOS and EOS");
  Tensor memory = Encode(t, split_embeddings, code_ids);
  std::vector<int> input(comment_ids.begin(), comment_ids.end() - 1);
  std::vector<int> target(comment_ids.begin() + 1, comment_ids.end());
  for (int& id : target)
    if (id == kPadId) id = -1;
  Tensor logits = DecodeLogits(t, memory, static_cast<int>(code_ids.size()), input);
  return t.cross_entropy_rows(logits, target);
}

std::vector<int> Transformer::GreedyDecode(Tape& t, Tensor split_embeddings,
                                           const std::vector<int>& code_ids, int max_len) const {
  Tensor memory = Encode(t, split_embeddings, code_ids);
  std::vector<int> prefix{kBosId};
  std::vector<int> out;
  while (static_cast<int>(out.size()) < max_len) {
    Tensor logits = DecodeLogits(t, memory, static_cast<int>(code_ids.size()), prefix);
    const double* row = logits.value().row(logits.rows() - 1);
    int best = -1;
    for (int w = 0; w < logits.cols(); ++w) {
      if (w == kPadId || w == kBosId) continue;
      if (best < 0 || row[w] > row[best]) best = w;
    }
    if (best == kEosId) break;
    out.push_back(best);
    prefix.push_back(best);
  }
  return out;
}

}  // namespace basts
