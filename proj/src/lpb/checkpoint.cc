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

#include "lpb/checkpoint.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "lpb/check.h"

namespace lpb {

namespace {

// Payload floats are written little-endian; this codebase only targets
// little-endian hosts, which the loader asserts once.
void assert_little_endian() {
  uint32_t probe = 1;
  char byte;
  std::memcpy(&byte, &probe, 1);
  LPB_CHECK_MSG(byte == 1, "big-endian hosts are unsupported");
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamSet& params,
                     const std::string& kind, const nlohmann::json& meta) {
  assert_little_endian();
  nlohmann::json header;
  header["format_version"] = 1;
  header["kind"] = kind;
  header["dtype"] = "f32";
  header["meta"] = meta;
  nlohmann::json names = nlohmann::json::array();
  nlohmann::json shapes = nlohmann::json::array();
  nlohmann::json offsets = nlohmann::json::array();
  int64_t offset = 0;
  for (int i = 0; i < params.size(); ++i) {
    const Param& p = params.at(i);
    names.push_back(p.name);
    shapes.push_back(p.value.shape);
    offsets.push_back(offset);
    offset += p.value.numel() * static_cast<int64_t>(sizeof(float));
  }
  header["names"] = std::move(names);
  header["shapes"] = std::move(shapes);
  header["offsets"] = std::move(offsets);

  std::string header_str = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MissingArtifact("cannot open checkpoint for write: " + path);
  uint32_t hlen = static_cast<uint32_t>(header_str.size());
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header_str.data(), header_str.size());
  std::vector<float> buf;
  for (int i = 0; i < params.size(); ++i) {
    const Param& p = params.at(i);
    buf.resize(p.value.data.size());
    for (size_t j = 0; j < buf.size(); ++j) {
      double v = p.value.data[j];
      if (!std::isfinite(v)) {
        throw NumericalError("non-finite value in parameter '" + p.name +
                             "' while saving " + path);
      }
      buf[j] = static_cast<float>(v);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw MissingArtifact("short write on checkpoint: " + path);
}

namespace {

nlohmann::json read_header(std::ifstream& in, const std::string& path) {
  uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen == 0 || hlen > (64u << 20)) {
    throw MissingArtifact("bad checkpoint header: " + path);
  }
  std::string header_str(hlen, '\0');
  in.read(header_str.data(), hlen);
  if (!in) throw MissingArtifact("truncated checkpoint header: " + path);
  nlohmann::json header = nlohmann::json::parse(header_str, nullptr, false);
  if (header.is_discarded() || header.value("format_version", 0) != 1 ||
      header.value("dtype", "") != "f32") {
    throw MissingArtifact("unrecognized checkpoint format: " + path);
  }
  return header;
}

}  // namespace

LoadedCheckpoint load_checkpoint(const std::string& path) {
  assert_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("checkpoint not found: " + path);
  nlohmann::json header = read_header(in, path);
  LoadedCheckpoint ckpt;
  ckpt.kind = header.value("kind", "");
  ckpt.meta = header.value("meta", nlohmann::json::object());
  const auto& names = header.at("names");
  const auto& shapes = header.at("shapes");
  LPB_CHECK(names.size() == shapes.size());
  std::vector<float> buf;
  for (size_t i = 0; i < names.size(); ++i) {
    std::vector<int64_t> shape = shapes[i].get<std::vector<int64_t>>();
    Tensor t(shape);
    buf.resize(t.data.size());
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in) throw MissingArtifact("truncated checkpoint payload: " + path);
    for (size_t j = 0; j < buf.size(); ++j) {
      if (!std::isfinite(buf[j])) {
        throw NumericalError("non-finite value in parameter '" +
                             names[i].get<std::string>() + "' while loading " +
                             path);
      }
      t.data[j] = static_cast<double>(buf[j]);
    }
    ckpt.params.add(names[i].get<std::string>(), std::move(t));
  }
  return ckpt;
}

nlohmann::json read_checkpoint_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("checkpoint not found: " + path);
  return read_header(in, path);
}

}  // namespace lpb
