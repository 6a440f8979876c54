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

#ifndef LPB_METRICS_H_
#define LPB_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "lpb/record.h"

namespace lpb {

// Mean L2 norm of the second finite difference of the executed action
// sequence; undefined (absent) below three actions.
std::optional<double> action_jerk(const std::vector<std::vector<double>>& actions);

// Strictly decreasing at every consecutive pair; ties count as violations.
bool latent_monotonicity(const std::vector<double>& distances);

struct AggregateRow {
  std::string protocol, variant, method, env;
  int n_episodes = 0;
  int n_seeds = 0;
  double success_rate = 0.0;  // percent, mean over seeds
  double success_std = 0.0;   // sample std over per-seed rates (0 for 1 seed)
  double ms_per_episode = 0.0;
  double ms_per_plan = 0.0;
  double predictor_calls_per_plan = 0.0;
  std::optional<double> jerk_mean;
  double monotonicity_fraction = 0.0;
};

// Groups by (protocol, variant, method, env) in first-appearance order; a
// pure function of the records, so `report` reproduces every cell exactly.
std::vector<AggregateRow> aggregate_records(const std::vector<EpisodeRecord>& records);

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows);

// Per-(protocol, env) ratios of each method against a reference method.
// Predictor-call economics are reported as "<ref> vs <other> calls/plan"
// rather than a ratio (the reference performs zero calls).
std::string speedup_csv(const std::vector<AggregateRow>& rows,
                        const std::string& reference_method);

// Shortest round-trip decimal formatting used in every CSV artifact.
std::string format_double(double v);

}  // namespace lpb

#endif  // LPB_METRICS_H_
