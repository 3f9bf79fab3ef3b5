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

#ifndef BASTS_VOCAB_H_
#define BASTS_VOCAB_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace basts {

inline constexpr int kPadId = 0;
inline constexpr int kBosId = 1;
inline constexpr int kEosId = 2;
inline constexpr int kUnkId = 3;
inline constexpr int kNumId = 4;
inline constexpr int kStrId = 5;
inline constexpr int kBoolId = 6;
inline constexpr int kNumSpecials = 7;

// Token <-> id bijection. The seven special tokens always hold ids 0..6;
// regular tokens follow by descending frequency, ties broken by byte order.
class Vocab {
 public:
  Vocab();

  // Tokens seen fewer than min_freq times map to UNK.
  static Vocab Build(const std::vector<std::vector<std::string>>& docs, int min_freq);
  // Rebuilds from a stored token list; throws FormatError when the
  // specials are not in place or a token repeats.
  static Vocab FromTokens(std::vector<std::string> tokens);

  int Id(const std::string& token) const;
  bool Contains(const std::string& token) const { return index_.count(token) > 0; }
  const std::string& Token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> Encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> Decode(const std::vector<int>& ids) const;
  // FNV-1a over the token list; equal hashes mean equal vocabularies in
  // practice (used by the leakage check).
  std::uint64_t Hash() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

const std::vector<std::string>& SpecialTokens();

}  // namespace basts

#endif  // BASTS_VOCAB_H_
