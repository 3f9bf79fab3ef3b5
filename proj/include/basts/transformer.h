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

// Encoder-decoder Transformer whose encoder input fuses every code token
// with the mean of the method's syntax embeddings.

#ifndef BASTS_TRANSFORMER_H_
#define BASTS_TRANSFORMER_H_

#include <random>
#include <string>
#include <vector>

#include "basts/tensor.h"

namespace basts {

struct TransformerConfig {
  int dim = 64;
  int heads = 4;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int ffn_dim = 0;  // 0 means 4 * dim
  int code_vocab = 0;
  int word_vocab = 0;

  int ffn() const { return ffn_dim > 0 ? ffn_dim : 4 * dim; }
  // Throws ConfigError on inconsistent sizes.
  void Validate() const;
};

// sin(d / 10000^(l/L)) for even l, cos for odd l.
double PositionalEncoding(int d, int l, int dim);
Matrix PositionalEncodingMatrix(int positions, int dim);

struct AttentionParams {
  Parameter* wq;
  Parameter* wk;
  Parameter* wv;
  Parameter* wo;
};

struct FeedForwardParams {
  Parameter* w1;
  Parameter* b1;
  Parameter* w2;
  Parameter* b2;
};

struct NormParams {
  Parameter* gamma;
  Parameter* beta;
};

struct EncoderLayerParams {
  AttentionParams self;
  NormParams norm1;
  FeedForwardParams ffn;
  NormParams norm2;
};

struct DecoderLayerParams {
  AttentionParams self;
  NormParams norm1;
  AttentionParams cross;
  NormParams norm2;
  FeedForwardParams ffn;
  NormParams norm3;
};

// Attention weight matrices of every head, in call order.
using AttentionTrace = std::vector<Tensor>;

// Scaled dot-product attention split over `heads` column groups; heads are
// concatenated and projected by wo. Masked positions get weight 0.
Tensor MultiHeadAttention(Tape& tape, Tensor queries, Tensor keys_values,
                          const AttentionParams& p, int heads, const Mask* mask,
                          AttentionTrace* trace = nullptr);

class Transformer {
 public:
  Transformer(ParamStore& store, const TransformerConfig& config,
              const std::string& prefix = "transformer");
  void Init(std::mt19937_64& rng);

  const TransformerConfig& config() const { return config_; }
  std::vector<Parameter*> parameters() const { return params_; }

  // Mean of the split embeddings (rows); EmptyInputError for zero rows.
  Tensor AvgPool(Tape& tape, Tensor split_embeddings) const;
  // ReLU(concat(pooled, token) W_F + b_F) for every token row.
  Tensor Fuse(Tape& tape, Tensor pooled, Tensor tokens) const;

  // D x L encoder states. With pad_to > ids.size() the sequence is padded
  // with PAD tokens that are masked as keys.
  Tensor Encode(Tape& tape, Tensor split_embeddings, const std::vector<int>& code_ids,
                int pad_to = 0, AttentionTrace* trace = nullptr) const;

  // T x |W| logits for decoder inputs `prefix` (starting with BOS), given
  // encoder memory whose first memory_valid rows are real tokens.
  Tensor DecodeLogits(Tape& tape, Tensor memory, int memory_valid,
                      const std::vector<int>& prefix, AttentionTrace* trace = nullptr) const;

  // Summed token cross-entropy of comment_ids (BOS ... EOS) under teacher
  // forcing; predicts comment_ids[1..] from comment_ids[..-1].
  Tensor SummedLoss(Tape& tape, Tensor split_embeddings, const std::vector<int>& code_ids,
                    const std::vector<int>& comment_ids) const;

  // BOS, then argmax words until EOS or max_len words. PAD and BOS are
  // never emitted; ties go to the lowest id. EOS is not returned.
  std::vector<int> GreedyDecode(Tape& tape, Tensor split_embeddings,
                                const std::vector<int>& code_ids, int max_len) const;

  Parameter* code_embedding() const { return code_embed_; }
  Parameter* word_embedding() const { return word_embed_; }
  Parameter* fuse_weight() const { return fuse_w_; }
  Parameter* fuse_bias() const { return fuse_b_; }
  Parameter* output_projection() const { return out_proj_; }
  const std::vector<EncoderLayerParams>& encoder() const { return enc_; }
  const std::vector<DecoderLayerParams>& decoder() const { return dec_; }

 private:
  Tensor FeedForward(Tape& tape, Tensor x, const FeedForwardParams& p) const;
  Tensor Norm(Tape& tape, Tensor x, const NormParams& p) const;

  TransformerConfig config_;
  Parameter* code_embed_;
  Parameter* word_embed_;
  Parameter* fuse_w_;
  Parameter* fuse_b_;
  std::vector<EncoderLayerParams> enc_;
  std::vector<DecoderLayerParams> dec_;
  Parameter* out_proj_;
  std::vector<Parameter*> params_;
};

}  // namespace basts

#endif  // BASTS_TRANSFORMER_H_
