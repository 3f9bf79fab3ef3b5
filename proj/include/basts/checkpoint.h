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

// Versioned little-endian binary checkpoint. Layout (see docs/formats.md):
//
//   "BASTSCKP" | u32 version | u32 dim | u32 sections
//   per section: str name | u32 n_meta {str key, str value}
//                | u32 n_vocab {str name, u32 n, str token...}
//                | u32 n_param {str name, u32 rows, u32 cols, f64 values...}
//   u64 FNV-1a of every preceding byte
//
// str is a u32 byte length followed by the bytes.

#ifndef BASTS_CHECKPOINT_H_
#define BASTS_CHECKPOINT_H_

#include <cstdint>
#include <memory>
#include <string>

#include "basts/model.h"

namespace basts {

inline constexpr char kCheckpointMagic[9] = "BASTSCKP";
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string SerializeCheckpoint(const BastsModel& model);
// Throws FormatError on a bad magic, version, checksum or layout.
std::unique_ptr<BastsModel> DeserializeCheckpoint(const std::string& bytes);

void SaveCheckpoint(const BastsModel& model, const std::string& path);
std::unique_ptr<BastsModel> LoadCheckpoint(const std::string& path);

std::uint64_t Fnv1a64(const std::string& bytes);

}  // namespace basts

#endif  // BASTS_CHECKPOINT_H_
