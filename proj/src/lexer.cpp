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
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "basts/errors.h"
#include "basts/frontend.h"

namespace basts {
namespace {

const std::unordered_set<std::string_view>& Keywords() {
  static const std::unordered_set<std::string_view> kKeywords = {
      "void",   "int",     "long",   "double",    "float",   "boolean",
      "char",   "byte",    "short",  "if",        "else",    "while",
      "for",    "return",  "break",  "continue",  "new",     "null",
      "this",   "public",  "private", "protected", "static", "final",
  };
  return kKeywords;
}

// Longest match first. '>' is always emitted alone so that nested generic
// arguments close cleanly; the parser rebuilds shift operators.
constexpr std::array<std::string_view, 27> kOperators = {
    "<<=", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
    "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "<<", "+",  "-",
    "*",   "/",  "%",  "<",  ">",  "=",  "!",
};
constexpr std::string_view kSingleOps = "&|^~?:";
constexpr std::string_view kPuncts = "(){}[];,.";

bool IsIdentStart(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}
bool IsIdentPart(unsigned char c) { return IsIdentStart(c) || std::isdigit(c); }

}  // namespace

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdentifier: return "Identifier";
    case TokenKind::kKeyword: return "Keyword";
    case TokenKind::kNumberLit: return "NumberLit";
    case TokenKind::kStringLit: return "StringLit";
    case TokenKind::kBoolLit: return "BoolLit";
    case TokenKind::kOperator: return "Operator";
    case TokenKind::kPunct: return "Punct";
  }
  return "?";
}

std::vector<Token> Tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto at = [&](std::size_t k) -> unsigned char {
    return k < n ? static_cast<unsigned char>(src[k]) : '\0';
  };

  while (i < n) {
    unsigned char c = at(i);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '*') {
      std::size_t close = src.find("*/", i + 2);
      if (close == std::string_view::npos)
        throw LexError(i, "unterminated block comment");
      i = close + 2;
      continue;
    }

    const std::size_t start = i;
    if (IsIdentStart(c)) {
      while (i < n && IsIdentPart(at(i))) ++i;
      std::string text(src.substr(start, i - start));
      TokenKind kind = TokenKind::kIdentifier;
      if (text == "true" || text == "false")
        kind = TokenKind::kBoolLit;
      else if (Keywords().count(text))
        kind = TokenKind::kKeyword;
      out.push_back({std::move(text), kind, start});
      continue;
    }

    if (std::isdigit(c) || (c == '.' && std::isdigit(at(i + 1)))) {
      if (c == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X')) {
        i += 2;
        while (std::isxdigit(at(i)) || at(i) == '_') ++i;
      } else {
        while (std::isdigit(at(i)) || at(i) == '_') ++i;
        if (at(i) == '.' && std::isdigit(at(i + 1))) {
          ++i;
          while (std::isdigit(at(i)) || at(i) == '_') ++i;
        }
        if (at(i) == 'e' || at(i) == 'E') {
          std::size_t k = i + 1;
          if (at(k) == '+' || at(k) == '-') ++k;
          if (std::isdigit(at(k))) {
            i = k;
            while (std::isdigit(at(i))) ++i;
          }
        }
      }
      if (std::string_view("lLfFdD").find(static_cast<char>(at(i))) !=
              std::string_view::npos &&
          at(i) != '\0')
        ++i;
      out.push_back({std::string(src.substr(start, i - start)),
                     TokenKind::kNumberLit, start});
      continue;
    }

    if (c == '"' || c == '\'') {
      const unsigned char quote = c;
      ++i;
      while (i < n && at(i) != quote) {
        if (at(i) == '\\') ++i;
        if (at(i) == '\n') throw LexError(start, "newline in literal");
        ++i;
      }
      if (i >= n) throw LexError(start, "unterminated literal");
      ++i;
      out.push_back({std::string(src.substr(start, i - start)),
                     TokenKind::kStringLit, start});
      continue;
    }

    bool matched = false;
    for (std::string_view op : kOperators) {
      if (src.substr(i, op.size()) == op) {
        out.push_back({std::string(op), TokenKind::kOperator, start});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingleOps.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({std::string(1, static_cast<char>(c)), TokenKind::kOperator, start});
      ++i;
      continue;
    }
    if (kPuncts.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({std::string(1, static_cast<char>(c)), TokenKind::kPunct, start});
      ++i;
      continue;
    }
    throw LexError(i, std::string("unrecognized character '") +
                          static_cast<char>(c) + "'");
  }
  return out;
}

std::vector<Token> AbstractLiterals(std::vector<Token> tokens) {
  for (auto& t : tokens) {
    switch (t.kind) {
      case TokenKind::kNumberLit: t.text = kNumToken; break;
      case TokenKind::kStringLit: t.text = kStrToken; break;
      case TokenKind::kBoolLit: t.text = kBoolToken; break;
      default: break;
    }
  }
  return tokens;
}

std::vector<std::string> SplitIdentifier(std::string_view name) {
  enum class Cls { kLower, kUpper, kDigit, kSep };
  auto cls = [](unsigned char c) {
    if (std::isdigit(c)) return Cls::kDigit;
    if (std::isupper(c)) return Cls::kUpper;
    if (c == '_' || c == '$') return Cls::kSep;
    return Cls::kLower;  // lowercase letters and any non-ASCII byte
  };

  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) parts.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const auto c = static_cast<unsigned char>(name[i]);
    const Cls k = cls(c);
    if (k == Cls::kSep) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const Cls prev = cls(static_cast<unsigned char>(name[i - 1]));
      const bool next_lower =
          i + 1 < name.size() &&
          cls(static_cast<unsigned char>(name[i + 1])) == Cls::kLower;
      if ((prev == Cls::kLower && k == Cls::kUpper) ||
          (prev == Cls::kDigit) != (k == Cls::kDigit) ||
          (prev == Cls::kUpper && k == Cls::kUpper && next_lower))
        flush();
    }
    cur.push_back(static_cast<char>(std::tolower(c)));
  }
  flush();
  if (parts.empty()) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    parts.push_back(lowered);
  }
  return parts;
}

std::vector<std::string> CodeSequence(const std::vector<Token>& tokens) {
  std::vector<std::string> seq;
  seq.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::kIdentifier) {
      for (auto& s : SplitIdentifier(t.text)) seq.push_back(std::move(s));
    } else {
      seq.push_back(t.text);
    }
  }
  return seq;
}

std::vector<std::string> TokenizeComment(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else if (std::ispunct(c)) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
      words.emplace_back(1, ch);
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace basts
