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

#include "basts/corpus.h"

#include <fstream>
#include <set>
#include <sstream>

#include "basts/errors.h"
#include "json.hpp"

namespace basts {

std::vector<CorpusRecord> ParseCorpus(const std::string& text) {
  std::vector<CorpusRecord> records;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(number, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError(number, "expected a JSON object");
    CorpusRecord r;
    for (auto [field, dest] : {std::pair{"id", &r.id}, {"code", &r.code}, {"comment", &r.comment}}) {
      auto it = j.find(field);
      if (it == j.end()) throw FormatError(number, std::string("missing field \"") + field + "\"");
      if (!it->is_string()) throw FormatError(number, std::string("field \"") + field + "\" is not a string");
      *dest = it->get<std::string>();
    }
    if (!seen.insert(r.id).second) throw FormatError(number, "duplicate id \"" + r.id + "\"");
    records.push_back(std::move(r));
  }
  return records;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::vector<CorpusRecord> LoadCorpus(const std::string& path) { return ParseCorpus(ReadTextFile(path)); }

}  // namespace basts
