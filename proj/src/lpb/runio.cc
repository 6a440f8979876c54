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

#include "lpb/runio.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lpb/build_info.h"
#include "lpb/check.h"
#include "lpb/metrics.h"

namespace lpb {

namespace fs = std::filesystem;

Workspace Workspace::resolve(const std::string& flag_root) {
  Workspace w;
  if (!flag_root.empty()) {
    w.root = flag_root;
  } else if (const char* env = std::getenv("LPB_OUTPUT_ROOT")) {
    w.root = env;
  } else {
    w.root = "runs";
  }
  return w;
}

std::string Workspace::dataset_prefix(EnvId env) const {
  return data_dir() + "/" + env_name(env);
}

std::string Workspace::val_prefix(EnvId env) const {
  return data_dir() + "/" + env_name(env) + "_val";
}

std::string Workspace::model_dir(EnvId env) const {
  return root + "/models/" + env_name(env);
}

std::string Workspace::wm_path(EnvId env) const {
  return model_dir(env) + "/wm.ckpt";
}

std::string Workspace::idm_path(EnvId env, uint64_t seed,
                                const std::string& tag) const {
  std::string name = model_dir(env) + "/gc_idm_s" + std::to_string(seed);
  if (!tag.empty()) name += "_" + tag;
  return name + ".ckpt";
}

std::string Workspace::pairwise_path(EnvId env, const std::string& tag) const {
  return model_dir(env) + "/pairwise_" + tag + ".ckpt";
}

std::string Workspace::eval_dir(const std::string& protocol) const {
  return root + "/eval/" + protocol;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw MissingArtifact("cannot create directory: " + path);
}

bool file_exists(const std::string& path) { return fs::exists(path); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw MissingArtifact("cannot write: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("cannot read: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

OutputGuard::~OutputGuard() {
  if (committed_) return;
  for (const std::string& p : paths_) {
    std::error_code ec;
    fs::remove_all(p, ec);
  }
}

void write_run_info(const std::string& dir, const std::string& command,
                    const std::string& resolved_config) {
  ensure_dir(dir);
  std::ostringstream os;
  os << "# build: " << LPB_BUILD_ID << "\n";
  os << "# command: " << command << "\n";
  os << resolved_config;
  if (!resolved_config.empty() && resolved_config.back() != '\n') os << "\n";
  write_text_file(dir + "/run_info.txt", os.str());
}

std::string curve_to_csv(const std::vector<TrainCurveRow>& curve,
                         const std::string& a_name, const std::string& b_name) {
  std::ostringstream os;
  os << "step," << a_name << "," << b_name << ",lr\n";
  for (const TrainCurveRow& r : curve) {
    os << r.step << ',' << format_double(r.loss_a) << ','
       << format_double(r.loss_b) << ',' << format_double(r.lr) << '\n';
  }
  return os.str();
}

}  // namespace lpb
