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

#ifndef BASTS_CONFIG_H_
#define BASTS_CONFIG_H_

#include <cstdint>
#include <string>

namespace basts {

// Hyperparameters and run flags. Text form is one `key = value` per line;
// '#' starts a comment. Every key is listed in docs/formats.md.
struct RunConfig {
  int embedding_size = 64;
  int heads = 4;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int ffn_size = 0;  // 0 means 4 * embedding_size
  int max_code_len = 100;
  int max_comment_len = 30;

  int batch_size = 16;
  double learning_rate = 1e-3;
  int epochs = 50;
  double target_loss = 0.0;  // early stop below this epoch loss; 0 = off

  int pretrain_epochs = 200;
  double pretrain_learning_rate = 1e-3;
  int pretrain_batch_size = 32;
  int neg_ratio = 1;

  int min_ast_freq = 2;
  int min_code_freq = 1;
  int min_word_freq = 1;

  std::uint64_t seed = 1;
  bool freeze_pretrained = false;
  bool bleu_smoothing = true;
  bool dedupe = false;

  // Throws ConfigError naming the offending key.
  void Validate() const;
  // Canonical key = value listing of every field.
  std::string ToString() const;
};

// Parses text; unknown keys and malformed lines throw ConfigError with the
// line number. The result is validated.
RunConfig ParseConfig(const std::string& text);
RunConfig LoadConfig(const std::string& path);

}  // namespace basts

#endif  // BASTS_CONFIG_H_
