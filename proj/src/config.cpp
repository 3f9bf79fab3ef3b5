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

#include "basts/config.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "basts/errors.h"

namespace basts {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int ToInt(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || x < -(1LL << 31) || x > (1LL << 31) - 1)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

double ToDouble(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> kSetters = [] {
    std::map<std::string, Setter> m;
    auto i = [&](const char* k, int RunConfig::*f) {
      m[k] = [f](RunConfig& c, const std::string& key, const std::string& v) { c.*f = ToInt(key, v); };
    };
    auto d = [&](const char* k, double RunConfig::*f) {
      m[k] = [f](RunConfig& c, const std::string& key, const std::string& v) { c.*f = ToDouble(key, v); };
    };
    auto b = [&](const char* k, bool RunConfig::*f) {
      m[k] = [f](RunConfig& c, const std::string& key, const std::string& v) { c.*f = ToBool(key, v); };
    };
    i("embedding_size", &RunConfig::embedding_size);
    i("heads", &RunConfig::heads);
    i("encoder_layers", &RunConfig::encoder_layers);
    i("decoder_layers", &RunConfig::decoder_layers);
    i("ffn_size", &RunConfig::ffn_size);
    i("max_code_len", &RunConfig::max_code_len);
    i("max_comment_len", &RunConfig::max_comment_len);
    i("batch_size", &RunConfig::batch_size);
    d("learning_rate", &RunConfig::learning_rate);
    i("epochs", &RunConfig::epochs);
    d("target_loss", &RunConfig::target_loss);
    i("pretrain_epochs", &RunConfig::pretrain_epochs);
    d("pretrain_learning_rate", &RunConfig::pretrain_learning_rate);
    i("pretrain_batch_size", &RunConfig::pretrain_batch_size);
    i("neg_ratio", &RunConfig::neg_ratio);
    i("min_ast_freq", &RunConfig::min_ast_freq);
    i("min_code_freq", &RunConfig::min_code_freq);
    i("min_word_freq", &RunConfig::min_word_freq);
    m["seed"] = [](RunConfig& c, const std::string& key, const std::string& v) {
      std::size_t used = 0;
      unsigned long long x = 0;
      try {
        x = std::stoull(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != v.size() || v.empty() || v[0] == '-')
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
      c.seed = x;
    };
    b("freeze_pretrained", &RunConfig::freeze_pretrained);
    b("bleu_smoothing", &RunConfig::bleu_smoothing);
    b("dedupe", &RunConfig::dedupe);
    return m;
  }();
  return kSetters;
}

}  // namespace

void RunConfig::Validate() const {
  auto positive = [](const char* key, double v) {
    if (!(v > 0)) throw ConfigError(std::string(key) + " must be positive");
  };
  positive("embedding_size", embedding_size);
  positive("heads", heads);
  if (embedding_size % heads != 0)
    throw ConfigError("embedding_size " + std::to_string(embedding_size) +
                      " is not divisible by heads " + std::to_string(heads));
  if (encoder_layers < 0 || decoder_layers < 0) throw ConfigError("layer counts must be >= 0");
  if (ffn_size < 0) throw ConfigError("ffn_size must be >= 0");
  positive("max_code_len", max_code_len);
  positive("max_comment_len", max_comment_len);
  positive("batch_size", batch_size);
  positive("learning_rate", learning_rate);
  positive("epochs", epochs);
  if (target_loss < 0) throw ConfigError("target_loss must be >= 0");
  positive("pretrain_epochs", pretrain_epochs);
  positive("pretrain_learning_rate", pretrain_learning_rate);
  positive("pretrain_batch_size", pretrain_batch_size);
  positive("neg_ratio", neg_ratio);
  positive("min_ast_freq", min_ast_freq);
  positive("min_code_freq", min_code_freq);
  positive("min_word_freq", min_word_freq);
}

std::string RunConfig::ToString() const {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  std::ostringstream o;
  o << "embedding_size = " << embedding_size << "\n"
    << "heads = " << heads << "\n"
    << "encoder_layers = " << encoder_layers << "\n"
    << "decoder_layers = " << decoder_layers << "\n"
    << "ffn_size = " << ffn_size << "\n"
    << "max_code_len = " << max_code_len << "\n"
    << "max_comment_len = " << max_comment_len << "\n"
    << "batch_size = " << batch_size << "\n"
    << "learning_rate = " << num(learning_rate) << "\n"
    << "epochs = " << epochs << "\n"
    << "target_loss = " << num(target_loss) << "\n"
    << "pretrain_epochs = " << pretrain_epochs << "\n"
    << "pretrain_learning_rate = " << num(pretrain_learning_rate) << "\n"
    << "pretrain_batch_size = " << pretrain_batch_size << "\n"
    << "neg_ratio = " << neg_ratio << "\n"
    << "min_ast_freq = " << min_ast_freq << "\n"
    << "min_code_freq = " << min_code_freq << "\n"
    << "min_word_freq = " << min_word_freq << "\n"
    << "seed = " << seed << "\n"
    << "freeze_pretrained = " << flag(freeze_pretrained) << "\n"
    << "bleu_smoothing = " << flag(bleu_smoothing) << "\n"
    << "dedupe = " << flag(dedupe) << "\n";
  return o.str();
}

RunConfig ParseConfig(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    auto it = Setters().find(key);
    if (it == Setters().end())
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    try {
      it->second(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  c.Validate();
  return c;
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

}  // namespace basts
