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

#include "lpb/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "lpb/check.h"

namespace lpb {

std::optional<double> action_jerk(
    const std::vector<std::vector<double>>& actions) {
  size_t T = actions.size();
  if (T < 3) return std::nullopt;
  double acc = 0.0;
  for (size_t t = 2; t < T; ++t) {
    double sq = 0.0;
    for (size_t j = 0; j < actions[t].size(); ++j) {
      double d = actions[t][j] - 2.0 * actions[t - 1][j] + actions[t - 2][j];
      sq += d * d;
    }
    acc += std::sqrt(sq);
  }
  return acc / static_cast<double>(T - 2);
}

bool latent_monotonicity(const std::vector<double>& distances) {
  LPB_CHECK_MSG(distances.size() >= 2, "monotonicity needs >= 2 distances");
  for (size_t i = 1; i < distances.size(); ++i) {
    if (!(distances[i] < distances[i - 1])) return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  LPB_CHECK(ec == std::errc());
  return std::string(buf, end);
}

std::vector<AggregateRow> aggregate_records(
    const std::vector<EpisodeRecord>& records) {
  struct Group {
    AggregateRow row;
    std::map<uint64_t, std::pair<int, int>> per_seed;  // seed -> (ok, n)
    double wall_total = 0.0;
    double plan_wall_total = 0.0;
    int64_t plan_wall_count = 0;
    int64_t predictor_calls = 0;
    int64_t plan_calls = 0;
    double jerk_sum = 0.0;
    int jerk_count = 0;
    int mono_true = 0;
    int mono_total = 0;
  };
  std::vector<Group> groups;
  std::map<std::string, size_t> index;
  for (const EpisodeRecord& r : records) {
    std::string key =
        r.protocol + "\x1f" + r.variant + "\x1f" + r.method + "\x1f" + r.env;
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.emplace_back();
      Group& g = groups.back();
      g.row.protocol = r.protocol;
      g.row.variant = r.variant;
      g.row.method = r.method;
      g.row.env = r.env;
    }
    Group& g = groups[it->second];
    g.row.n_episodes++;
    auto& seed = g.per_seed[r.seed];
    seed.first += r.success ? 1 : 0;
    seed.second += 1;
    g.wall_total += r.wall_ms_total;
    for (double w : r.wall_ms_per_plan_call) {
      g.plan_wall_total += w;
      ++g.plan_wall_count;
    }
    g.predictor_calls += r.predictor_calls;
    g.plan_calls += r.plan_calls;
    if (auto j = action_jerk(r.raw_actions)) {
      g.jerk_sum += *j;
      ++g.jerk_count;
    }
    if (r.latent_goal_distances.size() >= 2) {
      g.mono_true += latent_monotonicity(r.latent_goal_distances) ? 1 : 0;
      ++g.mono_total;
    }
  }
  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (Group& g : groups) {
    AggregateRow& row = g.row;
    row.n_seeds = static_cast<int>(g.per_seed.size());
    std::vector<double> rates;
    for (const auto& [seed, sn] : g.per_seed) {
      rates.push_back(100.0 * sn.first / std::max(1, sn.second));
    }
    double mean = 0.0;
    for (double r : rates) mean += r;
    mean /= std::max<size_t>(1, rates.size());
    row.success_rate = mean;
    if (rates.size() > 1) {
      double ss = 0.0;
      for (double r : rates) ss += (r - mean) * (r - mean);
      row.success_std = std::sqrt(ss / (rates.size() - 1));
    }
    row.ms_per_episode = g.wall_total / std::max(1, row.n_episodes);
    row.ms_per_plan =
        g.plan_wall_count > 0 ? g.plan_wall_total / g.plan_wall_count : 0.0;
    row.predictor_calls_per_plan =
        g.plan_calls > 0
            ? static_cast<double>(g.predictor_calls) / g.plan_calls
            : 0.0;
    if (g.jerk_count > 0) row.jerk_mean = g.jerk_sum / g.jerk_count;
    row.monotonicity_fraction =
        g.mono_total > 0 ? static_cast<double>(g.mono_true) / g.mono_total
                         : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << "protocol,variant,method,env,n_episodes,n_seeds,success_rate,"
        "success_std,ms_per_episode,ms_per_plan,predictor_calls_per_plan,"
        "jerk_mean,monotonicity_fraction\n";
  for (const AggregateRow& r : rows) {
    os << r.protocol << ',' << r.variant << ',' << r.method << ',' << r.env
       << ',' << r.n_episodes << ',' << r.n_seeds << ','
       << format_double(r.success_rate) << ',' << format_double(r.success_std)
       << ',' << format_double(r.ms_per_episode) << ','
       << format_double(r.ms_per_plan) << ','
       << format_double(r.predictor_calls_per_plan) << ','
       << (r.jerk_mean ? format_double(*r.jerk_mean) : "") << ','
       << format_double(r.monotonicity_fraction) << '\n';
  }
  return os.str();
}

std::string speedup_csv(const std::vector<AggregateRow>& rows,
                        const std::string& reference_method) {
  std::ostringstream os;
  os << "protocol,env,method,wall_per_episode_ratio,wall_per_plan_ratio,"
        "predictor_calls\n";
  for (const AggregateRow& ref : rows) {
    if (ref.method != reference_method) continue;
    for (const AggregateRow& r : rows) {
      if (r.method == reference_method || r.protocol != ref.protocol ||
          r.variant != ref.variant || r.env != ref.env) {
        continue;
      }
      if (ref.ms_per_episode <= 0.0 || ref.ms_per_plan <= 0.0) {
        throw NumericalError("zero-time reference row in speedup summary");
      }
      os << r.protocol << ',' << r.env << ',' << r.method << ','
         << format_double(r.ms_per_episode / ref.ms_per_episode) << ','
         << format_double(r.ms_per_plan / ref.ms_per_plan) << ','
         << format_double(ref.predictor_calls_per_plan) << " vs "
         << format_double(r.predictor_calls_per_plan) << " calls/plan\n";
    }
  }
  return os.str();
}

}  // namespace lpb
