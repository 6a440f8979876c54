// Copyright 2026 The lpbench Authors
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

#ifndef LPB_CHECKPOINT_H_
#define LPB_CHECKPOINT_H_

#include <string>

#include "json.hpp"
#include "lpb/params.h"

namespace lpb {

// On-disk checkpoint: a little-endian u32 header length, a JSON header
// {format_version, kind, dtype:"f32", names, shapes, offsets, meta}, then the
// concatenated little-endian f32 payloads. save(load(x)) is byte-identical.
void save_checkpoint(const std::string& path, const ParamSet& params,
                     const std::string& kind, const nlohmann::json& meta);

struct LoadedCheckpoint {
  ParamSet params;
  std::string kind;
  nlohmann::json meta;
};
LoadedCheckpoint load_checkpoint(const std::string& path);

// Header-only peek (kind + meta), without the payload.
nlohmann::json read_checkpoint_header(const std::string& path);

}  // namespace lpb

#endif  // LPB_CHECKPOINT_H_
