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

// JSON Lines corpus files: one {"id", "code", "comment"} object per line.

#ifndef BASTS_CORPUS_H_
#define BASTS_CORPUS_H_

#include <string>
#include <vector>

namespace basts {

struct CorpusRecord {
  std::string id;
  std::string code;
  std::string comment;
};

// Records in file order. Blank lines are skipped. Malformed JSON, missing
// or non-string fields and repeated ids throw FormatError naming the line.
std::vector<CorpusRecord> ParseCorpus(const std::string& text);
// IoError when the file cannot be read.
std::vector<CorpusRecord> LoadCorpus(const std::string& path);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace basts

#endif  // BASTS_CORPUS_H_
