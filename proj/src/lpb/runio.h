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

#ifndef LPB_RUNIO_H_
#define LPB_RUNIO_H_

#include <string>
#include <vector>

#include "lpb/env.h"
#include "lpb/world_model.h"

namespace lpb {

// Filesystem layout under one output root:
//   <root>/data/<env>{.json,.bin}         demonstration datasets
//   <root>/data/<env>_val{.json,.bin}     held-out datasets
//   <root>/models/<env>/wm.ckpt           world model (+ wm_curve.csv)
//   <root>/models/<env>/gc_idm_s<seed>[_<tag>].ckpt
//   <root>/models/<env>/pairwise_<tag>.ckpt
//   <root>/eval/<protocol>/records.jsonl + CSV/SVG artifacts
struct Workspace {
  std::string root;

  // Resolves --root flag, LPB_OUTPUT_ROOT, then the default "runs".
  static Workspace resolve(const std::string& flag_root);

  std::string data_dir() const { return root + "/data"; }
  std::string dataset_prefix(EnvId env) const;
  std::string val_prefix(EnvId env) const;
  std::string model_dir(EnvId env) const;
  std::string wm_path(EnvId env) const;
  std::string idm_path(EnvId env, uint64_t seed, const std::string& tag = "") const;
  std::string pairwise_path(EnvId env, const std::string& tag) const;
  std::string eval_dir(const std::string& protocol) const;
};

void ensure_dir(const std::string& path);
bool file_exists(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Removes declared outputs unless committed; keeps failures from leaving
// partial artifacts behind.
class OutputGuard {
 public:
  ~OutputGuard();
  void add(const std::string& path) { paths_.push_back(path); }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> paths_;
  bool committed_ = false;
};

// Resolved-config snapshot plus the build identifier, written beside every
// run's outputs.
void write_run_info(const std::string& dir, const std::string& command,
                    const std::string& resolved_config);

std::string curve_to_csv(const std::vector<TrainCurveRow>& curve,
                         const std::string& a_name, const std::string& b_name);

}  // namespace lpb

#endif  // LPB_RUNIO_H_
