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

#ifndef LPB_SVG_H_
#define LPB_SVG_H_

#include <string>
#include <vector>

#include "lpb/metrics.h"

namespace lpb {

// Static scatter of the planner compute sweep: success rate vs per-plan
// wall-clock (log axis), one panel per environment, with the amortized
// controller as a reference marker.
std::string pareto_svg(const std::vector<AggregateRow>& sweep_rows,
                       const std::vector<AggregateRow>& reference_rows);

}  // namespace lpb

#endif  // LPB_SVG_H_
