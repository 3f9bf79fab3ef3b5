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

#include "basts/vocab.h"

#include <algorithm>
#include <map>

#include "basts/errors.h"
#include "basts/frontend.h"

namespace basts {

const std::vector<std::string>& SpecialTokens() {
  static const std::vector<std::string> kSpecials = {
      "<PAD>", "<BOS>", "<EOS>", "<UNK>", std::string(kNumToken), std::string(kStrToken),
      std::string(kBoolToken)};
  return kSpecials;
}

Vocab::Vocab() : tokens_(SpecialTokens()) {
  for (int i = 0; i < size(); ++i) index_[tokens_[static_cast<std::size_t>(i)]] = i;
}

Vocab Vocab::Build(const std::vector<std::vector<std::string>>& docs, int min_freq) {
  std::map<std::string, long> counts;
  for (const auto& doc : docs)
    for (const auto& tok : doc) ++counts[tok];
  std::vector<std::pair<std::string, long>> kept;
  Vocab v;
  for (auto& [tok, n] : counts)
    if (n >= min_freq && !v.Contains(tok)) kept.emplace_back(tok, n);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (auto& [tok, n] : kept) {
    v.index_[tok] = v.size();
    v.tokens_.push_back(tok);
  }
  return v;
}

Vocab Vocab::FromTokens(std::vector<std::string> tokens) {
  const auto& specials = SpecialTokens();
  if (tokens.size() < specials.size() ||
      !std::equal(specials.begin(), specials.end(), tokens.begin()))
    throw FormatError(0, "vocabulary does not start with the special tokens");
  Vocab v;
  v.tokens_ = std::move(tokens);
  v.index_.clear();
  for (int i = 0; i < v.size(); ++i)
    if (!v.index_.emplace(v.tokens_[static_cast<std::size_t>(i)], i).second)
      throw FormatError(0, "duplicate vocabulary token " + v.tokens_[static_cast<std::size_t>(i)]);
  return v;
}

int Vocab::Id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

const std::string& Vocab::Token(int id) const {
  if (id < 0 || id >= size()) throw Error("vocabulary id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocab::Encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(Id(t));
  return ids;
}

std::vector<std::string> Vocab::Decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(Token(id));
  return out;
}

std::uint64_t Vocab::Hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& t : tokens_) {
    for (unsigned char c : t) h = (h ^ c) * 1099511628211ULL;
    h = (h ^ 0xffU) * 1099511628211ULL;  // separator
  }
  return h;
}

}  // namespace basts
