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

#include "basts/checkpoint.h"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "basts/errors.h"

namespace basts {
namespace {

class Writer {
 public:
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void F64(double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    U64(bits);
  }
  void Str(const std::string& s) {
    U32(static_cast<std::uint32_t>(s.size()));
    out_ += s;
  }
  void Raw(const char* s, std::size_t n) { out_.append(s, n); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in, std::size_t end) : in_(in), end_(end) {}
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_++])) << (8 * i);
    return v;
  }
  double F64() {
    std::uint64_t bits = U64();
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
  }
  std::string Str() {
    const std::uint32_t n = U32();
    Need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string Raw(std::size_t n) {
    Need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  void Need(std::size_t n) const {
    if (end_ - pos_ < n) throw FormatError(0, "checkpoint truncated at byte " + std::to_string(pos_));
  }
  const std::string& in_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

struct Section {
  std::string name;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::pair<std::string, const Vocab*>> vocabs;
  std::vector<const Parameter*> params;
};

void WriteSection(Writer& w, const Section& s) {
  w.Str(s.name);
  w.U32(static_cast<std::uint32_t>(s.meta.size()));
  for (const auto& [k, v] : s.meta) {
    w.Str(k);
    w.Str(v);
  }
  w.U32(static_cast<std::uint32_t>(s.vocabs.size()));
  for (const auto& [name, vocab] : s.vocabs) {
    w.Str(name);
    w.U32(static_cast<std::uint32_t>(vocab->size()));
    for (const auto& tok : vocab->tokens()) w.Str(tok);
  }
  w.U32(static_cast<std::uint32_t>(s.params.size()));
  for (const Parameter* p : s.params) {
    w.Str(p->name);
    w.U32(static_cast<std::uint32_t>(p->value.rows));
    w.U32(static_cast<std::uint32_t>(p->value.cols));
    for (double v : p->value.data) w.F64(v);
  }
}

struct LoadedSection {
  std::map<std::string, std::string> meta;
  std::map<std::string, std::vector<std::string>> vocabs;
  std::vector<std::pair<std::string, Matrix>> params;
};

LoadedSection ReadSection(Reader& r) {
  LoadedSection s;
  for (std::uint32_t i = 0, n = r.U32(); i < n; ++i) {
    std::string k = r.Str();
    s.meta[k] = r.Str();
  }
  for (std::uint32_t i = 0, n = r.U32(); i < n; ++i) {
    std::string name = r.Str();
    std::vector<std::string> toks(r.U32());
    for (auto& t : toks) t = r.Str();
    s.vocabs[name] = std::move(toks);
  }
  for (std::uint32_t i = 0, n = r.U32(); i < n; ++i) {
    std::string name = r.Str();
    const std::uint32_t rows = r.U32(), cols = r.U32();
    Matrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (double& v : m.data) v = r.F64();
    s.params.emplace_back(std::move(name), std::move(m));
  }
  return s;
}

int MetaInt(const LoadedSection& s, const std::string& key) {
  auto it = s.meta.find(key);
  if (it == s.meta.end()) throw FormatError(0, "checkpoint section lacks " + key);
  return std::stoi(it->second);
}

const std::vector<std::string>& VocabOf(const LoadedSection& s, const std::string& name) {
  auto it = s.vocabs.find(name);
  if (it == s.vocabs.end()) throw FormatError(0, "checkpoint lacks vocabulary " + name);
  return it->second;
}

// Copies stored values into the freshly built parameters, checking that
// names, order and shapes agree.
void Restore(const std::vector<Parameter*>& expected,
             const std::vector<std::pair<std::string, Matrix>>& stored) {
  if (expected.size() != stored.size())
    throw FormatError(0, "checkpoint holds " + std::to_string(stored.size()) +
                             " parameters, model expects " + std::to_string(expected.size()));
  for (std::size_t i = 0; i < expected.size(); ++i) {
    Parameter& p = *expected[i];
    const auto& [name, m] = stored[i];
    if (name != p.name || m.rows != p.value.rows || m.cols != p.value.cols)
      throw FormatError(0, "checkpoint parameter " + name + " " + m.ShapeString() +
                               " does not match " + p.name + " " + p.value.ShapeString());
    p.value = m;
  }
}

std::vector<Parameter*> TreeSectionParams(BastsModel& model) {
  auto params = model.tree().parameters();
  params.push_back(model.sep().weight());
  params.push_back(model.sep().bias());
  return params;
}

}  // namespace

std::uint64_t Fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string SerializeCheckpoint(const BastsModel& model) {
  Writer w;
  w.Raw(kCheckpointMagic, 8);
  w.U32(kCheckpointVersion);
  w.U32(static_cast<std::uint32_t>(model.dim()));
  w.U32(model.has_transformer() ? 2 : 1);

  Section tree{"tree_lstm", {}, {{"ast", &model.ast_vocab()}}, {}};
  for (Parameter* p : model.tree().parameters()) tree.params.push_back(p);
  tree.params.push_back(model.sep().weight());
  tree.params.push_back(model.sep().bias());
  WriteSection(w, tree);

  if (model.has_transformer()) {
    const auto& cfg = model.transformer().config();
    Section xf{"transformer",
               {{"heads", std::to_string(cfg.heads)},
                {"encoder_layers", std::to_string(cfg.encoder_layers)},
                {"decoder_layers", std::to_string(cfg.decoder_layers)},
                {"ffn_dim", std::to_string(cfg.ffn())}},
               {{"code", &model.code_vocab()}, {"word", &model.word_vocab()}},
               {}};
    for (Parameter* p : model.transformer().parameters()) xf.params.push_back(p);
    WriteSection(w, xf);
  }
  w.U64(Fnv1a64(w.bytes()));
  return std::move(w.bytes());
}

std::unique_ptr<BastsModel> DeserializeCheckpoint(const std::string& bytes) {
  if (bytes.size() < 8 + 8) throw FormatError(0, "checkpoint too short");
  const std::size_t body = bytes.size() - 8;
  Reader tail(bytes, bytes.size());
  (void)tail.Raw(body);
  if (tail.U64() != Fnv1a64(bytes.substr(0, body)))
    throw FormatError(0, "checkpoint checksum mismatch");
  Reader r(bytes, body);
  if (r.Raw(8) != std::string(kCheckpointMagic, 8)) throw FormatError(0, "not a checkpoint file");
  if (const auto v = r.U32(); v != kCheckpointVersion)
    throw FormatError(0, "unsupported checkpoint version " + std::to_string(v));
  const int dim = static_cast<int>(r.U32());
  const std::uint32_t sections = r.U32();
  std::map<std::string, LoadedSection> loaded;
  for (std::uint32_t i = 0; i < sections; ++i) {
    std::string name = r.Str();
    loaded[name] = ReadSection(r);
  }
  if (r.pos() != body) throw FormatError(0, "trailing bytes in checkpoint");
  auto tree_it = loaded.find("tree_lstm");
  if (tree_it == loaded.end()) throw FormatError(0, "checkpoint lacks the tree_lstm section");

  auto model = std::make_unique<BastsModel>(Vocab::FromTokens(VocabOf(tree_it->second, "ast")), dim);
  Restore(TreeSectionParams(*model), tree_it->second.params);
  if (auto xf = loaded.find("transformer"); xf != loaded.end()) {
    TransformerConfig cfg;
    cfg.dim = dim;
    cfg.heads = MetaInt(xf->second, "heads");
    cfg.encoder_layers = MetaInt(xf->second, "encoder_layers");
    cfg.decoder_layers = MetaInt(xf->second, "decoder_layers");
    cfg.ffn_dim = MetaInt(xf->second, "ffn_dim");
    model->AddTransformer(Vocab::FromTokens(VocabOf(xf->second, "code")),
                          Vocab::FromTokens(VocabOf(xf->second, "word")), cfg);
    Restore(model->transformer().parameters(), xf->second.params);
  }
  return model;
}

void SaveCheckpoint(const BastsModel& model, const std::string& path) {
  const std::string bytes = SerializeCheckpoint(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path);
}

std::unique_ptr<BastsModel> LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return DeserializeCheckpoint(ss.str());
}

}  // namespace basts
