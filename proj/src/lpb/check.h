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

#ifndef LPB_CHECK_H_
#define LPB_CHECK_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace lpb {

// Violated precondition or shape contract.
struct ContractViolation : std::runtime_error {
  explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf or diverging computation; aborts the run.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Referenced dataset/checkpoint does not exist or has a bad header.
struct MissingArtifact : std::runtime_error {
  explicit MissingArtifact(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad CLI/config input.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace internal {
inline void check_failed(const char* expr, const char* file, int line,
                         const std::string& msg) {
  std::ostringstream os;
  os << "contract violation: " << expr << " (" << file << ":" << line << ")";
  if (!msg.empty()) os << ": " << msg;
  throw ContractViolation(os.str());
}
}  // namespace internal

}  // namespace lpb

#define LPB_CHECK(cond)                                               \
  do {                                                                \
    if (!(cond)) ::lpb::internal::check_failed(#cond, __FILE__, __LINE__, ""); \
  } while (0)

#define LPB_CHECK_MSG(cond, msg)                                      \
  do {                                                                \
    if (!(cond))                                                      \
      ::lpb::internal::check_failed(#cond, __FILE__, __LINE__, (msg)); \
  } while (0)

#endif  // LPB_CHECK_H_
