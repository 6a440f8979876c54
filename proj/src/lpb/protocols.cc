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

#include "lpb/protocols.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "lpb/check.h"
#include "lpb/executor.h"
#include "lpb/metrics.h"
#include "lpb/svg.h"
#include "lpb/threadpool.h"

namespace lpb {

int default_dataset_episodes() { return 60; }
int default_episode_length() { return 100; }

WorldModelConfig default_wm_config() {
  WorldModelConfig cfg;  // d=32, hidden 256, lambda 1, frameskip 1
  cfg.epochs = 50;
  cfg.batch = 1024;
  return cfg;
}

GcIdmConfig default_idm_config() {
  GcIdmConfig cfg;  // hidden 512, 3 layers, H_max 50, dropout 0.1, sigma 0
  return cfg;
}

PairwiseConfig default_pairwise_config() {
  PairwiseConfig cfg;  // hidden 512, 3 layers, dropout 0.1
  return cfg;
}

SolverConfig default_solver_config(SolverKind kind) {
  SolverConfig sc;
  sc.kind = kind;
  if (kind == SolverKind::kGradient) sc.num_samples = 2;
  return sc;
}

DemoDataset require_dataset(const Workspace& ws, EnvId env, bool val) {
  std::string prefix = val ? ws.val_prefix(env) : ws.dataset_prefix(env);
  if (!file_exists(prefix + ".json")) {
    throw MissingArtifact("dataset missing (run `collect` first): " + prefix);
  }
  return load_dataset(prefix);
}

WorldModel require_world_model(const Workspace& ws, EnvId env) {
  std::string path = ws.wm_path(env);
  if (!file_exists(path)) {
    throw MissingArtifact("world model missing (run `train-wm` first): " + path);
  }
  return WorldModel::load(path);
}

GcIdm require_gc_idm(const Workspace& ws, EnvId env, uint64_t seed,
                     const std::string& tag) {
  std::string path = ws.idm_path(env, seed, tag);
  if (!file_exists(path)) {
    throw MissingArtifact("gc_idm checkpoint missing (run `train-idm` first): " +
                          path);
  }
  return GcIdm::load(path);
}

GcIdm ensure_gc_idm_variant(const Workspace& ws, EnvId env, uint64_t seed,
                            const std::string& tag, const GcIdmConfig& cfg,
                            const DemoDataset& ds, const WorldModel& wm) {
  std::string path = ws.idm_path(env, seed, tag);
  if (file_exists(path)) return GcIdm::load(path);
  std::fprintf(stderr, "[lpbench] training gc_idm variant %s\n", path.c_str());
  std::vector<TrainCurveRow> curve;
  GcIdm model = train_gc_idm(ds, wm, cfg, Rng(seed), &curve);
  ensure_dir(ws.model_dir(env));
  model.save(path);
  write_text_file(path + ".curve.csv", curve_to_csv(curve, "mse", "sigma"));
  return model;
}

PairwiseIdm ensure_pairwise_variant(const Workspace& ws, EnvId env,
                                    const std::string& tag,
                                    const PairwiseConfig& cfg,
                                    const DemoDataset& ds,
                                    const WorldModel& wm) {
  std::string path = ws.pairwise_path(env, tag);
  if (file_exists(path)) return PairwiseIdm::load(path);
  std::fprintf(stderr, "[lpbench] training pairwise variant %s\n", path.c_str());
  std::vector<TrainCurveRow> curve;
  PairwiseIdm model = train_pairwise(ds, wm, cfg, Rng(42), &curve);
  ensure_dir(ws.model_dir(env));
  model.save(path);
  write_text_file(path + ".curve.csv", curve_to_csv(curve, "mse", "sigma"));
  return model;
}

std::vector<GoalTask> sample_cross_wall_tasks(const DemoDataset& ds, int n,
                                              int offset, int budget, Rng rng) {
  LPB_CHECK(ds.env == EnvId::kTwoRoom);
  std::vector<GoalTask> out;
  Rng draw = rng.stream("cross_wall");
  int guard = 0;
  while (static_cast<int>(out.size()) < n && guard < 200000) {
    ++guard;
    auto t = sample_tasks(ds, 1, offset, budget, draw.split(guard));
    bool cross = (t[0].start_obs[0] < kWallX) != (t[0].goal_obs[0] < kWallX);
    if (cross) out.push_back(std::move(t[0]));
  }
  LPB_CHECK_MSG(static_cast<int>(out.size()) == n,
                "could not sample enough cross-wall tasks");
  return out;
}

std::vector<EpisodeRecord> run_episodes(
    const std::vector<GoalTask>& tasks, int jobs,
    const std::function<EpisodeRecord(const GoalTask&, int)>& fn) {
  std::vector<EpisodeRecord> records(tasks.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) {
      records[i] = fn(tasks[i], static_cast<int>(i));
    }
    return records;
  }
  std::atomic<size_t> next{0};
  int n_workers = std::min<int>(jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      ThreadPool::InlineScope inline_scope;
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        records[i] = fn(tasks[i], static_cast<int>(i));
      }
    });
  }
  for (auto& t : workers) t.join();
  return records;
}

namespace {

std::string hash_config(const std::string& canonical) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(canonical.data(), canonical.size())));
  return std::string(buf);
}

std::string solver_canonical(const SolverConfig& sc, const PlanConfig& pc) {
  std::ostringstream os;
  os << solver_name(sc.kind) << ";ns=" << sc.num_samples << ";it=" << sc.n_steps
     << ";topk=" << sc.topk << ";var=" << sc.var_scale
     << ";temp=" << sc.temperature << ";beta=" << sc.noise_beta
     << ";keep=" << sc.elite_keep << ";alpha=" << sc.keep_fraction
     << ";lr=" << sc.lr << ";h=" << pc.horizon << ";rh=" << pc.receding_horizon
     << ";ab=" << pc.action_block;
  return os.str();
}

Rng task_rng(const ProtocolOptions& opt, const std::string& protocol,
             EnvId env) {
  return Rng(opt.protocol_seed).stream(protocol).stream(env_name(env));
}

// One evaluated method over a matched task list.
struct MethodRun {
  std::string method;
  std::string variant;
  uint64_t seed = 0;
  std::string config_hash;
  std::function<EpisodeRecord(const GoalTask&, int)> fn;
};

std::vector<EpisodeRecord> run_method(const std::string& protocol,
                                      const MethodRun& m,
                                      const std::vector<GoalTask>& tasks,
                                      int jobs, bool warmup = true) {
  if (warmup && !tasks.empty()) {
    (void)m.fn(tasks[0], -1);  // excluded from timing statistics
  }
  std::vector<EpisodeRecord> records = run_episodes(tasks, jobs, m.fn);
  for (auto& r : records) {
    r.protocol = protocol;
    r.method = m.method;
    r.variant = m.variant;
    r.seed = m.seed;
    r.config_hash = m.config_hash;
  }
  return records;
}

MethodRun gc_idm_method(const WorldModel& wm, const GcIdm& model,
                        uint64_t seed, const std::string& variant) {
  MethodRun m;
  m.method = "gc_idm";
  m.variant = variant;
  m.seed = seed;
  std::ostringstream os;
  os << "gc_idm;H=" << model.config().H_max << ";hid=" << model.config().hidden
     << ";layers=" << model.config().layers << ";sig=" << model.config().noise_sigma
     << ";sched=" << model.config().noise_schedule;
  m.config_hash = hash_config(os.str());
  m.fn = [&wm, &model](const GoalTask& task, int index) {
    EpisodeRecord rec = closed_loop_control(task, wm, model);
    rec.episode_index = index;
    return rec;
  };
  return m;
}

MethodRun solver_method(const WorldModel& wm, const SolverConfig& sc,
                        const PlanConfig& pc, uint64_t seed,
                        const std::string& variant) {
  MethodRun m;
  m.method = solver_name(sc.kind);
  m.variant = variant;
  m.seed = seed;
  m.config_hash = hash_config(solver_canonical(sc, pc));
  m.fn = [&wm, sc, pc, seed](const GoalTask& task, int index) {
    Rng rng = Rng(seed).stream("solver").split(static_cast<uint64_t>(
        index < 0 ? 1u << 30 : index));
    EpisodeRecord rec = receding_horizon_execute(task, wm, pc, sc, rng);
    rec.episode_index = index;
    return rec;
  };
  return m;
}

struct ProtocolOutput {
  std::string dir;
  std::vector<EpisodeRecord> records;
  std::vector<std::string> written;

  void write_records() {
    ensure_dir(dir);
    std::string path = dir + "/records.jsonl";
    std::remove(path.c_str());
    append_jsonl(path, records);
    written.push_back(path);
  }
  void write_csv(const std::string& name, const std::string& content) {
    ensure_dir(dir);
    write_text_file(dir + "/" + name, content);
    written.push_back(dir + "/" + name);
  }
};

// ---------------------------------------------------------------------------
// headline / solver_family
// ---------------------------------------------------------------------------
std::vector<std::string> run_headline(const std::string& name,
                                      const ProtocolOptions& opt,
                                      const std::vector<std::string>& methods) {
  ProtocolOutput out{opt.ws.eval_dir(name), {}, {}};
  PlanConfig pc;
  for (EnvId env : opt.envs) {
    DemoDataset ds = require_dataset(opt.ws, env);
    WorldModel wm = require_world_model(opt.ws, env);
    std::vector<GoalTask> tasks = sample_tasks(
        ds, opt.n_episodes, opt.offset, opt.budget, task_rng(opt, name, env));
    for (const std::string& method : methods) {
      for (uint64_t seed : opt.seeds) {
        if (method == "gc_idm") {
          GcIdm model = require_gc_idm(opt.ws, env, seed);
          auto recs = run_method(name, gc_idm_method(wm, model, seed, ""),
                                 tasks, opt.jobs);
          out.records.insert(out.records.end(), recs.begin(), recs.end());
        } else {
          SolverConfig sc = default_solver_config(solver_from_name(method));
          sc.seed = seed;
          auto recs = run_method(name, solver_method(wm, sc, pc, seed, ""),
                                 tasks, opt.jobs);
          out.records.insert(out.records.end(), recs.begin(), recs.end());
        }
      }
    }
  }
  out.write_records();
  auto rows = aggregate_records(out.records);
  out.write_csv("aggregates.csv", aggregates_to_csv(rows));
  out.write_csv("speedup.csv", speedup_csv(rows, "gc_idm"));
  return out.written;
}

// ---------------------------------------------------------------------------
// pareto sweep
// ---------------------------------------------------------------------------
const std::vector<std::pair<int, int>>& pareto_grid() {
  // The 12 tabulated (num_samples, n_steps) combinations of the sweep.
  static const std::vector<std::pair<int, int>> kGrid = {
      {30, 2},  {30, 5},   {100, 2},  {100, 5},  {300, 2},  {100, 10},
      {300, 5}, {100, 30}, {300, 10}, {300, 30}, {1000, 10}, {1000, 30}};
  return kGrid;
}

std::vector<std::string> run_pareto(const ProtocolOptions& opt) {
  ProtocolOutput out{opt.ws.eval_dir("pareto"), {}, {}};
  PlanConfig pc;
  const uint64_t seed = opt.seeds.empty() ? 42 : opt.seeds.front();
  int n = std::min(opt.n_episodes, 100);
  for (EnvId env : opt.envs) {
    DemoDataset ds = require_dataset(opt.ws, env);
    WorldModel wm = require_world_model(opt.ws, env);
    std::vector<GoalTask> tasks =
        sample_tasks(ds, n, opt.offset, opt.budget, task_rng(opt, "pareto", env));
    for (auto [ns, it] : pareto_grid()) {
      SolverConfig sc = default_solver_config(SolverKind::kCem);
      sc.num_samples = ns;
      sc.n_steps = it;
      sc.topk = std::min(sc.topk, ns);
      sc.seed = seed;
      std::string variant =
          "ns" + std::to_string(ns) + "_it" + std::to_string(it);
      auto recs =
          run_method("pareto", solver_method(wm, sc, pc, seed, variant), tasks,
                     opt.jobs);
      out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
    GcIdm model = require_gc_idm(opt.ws, env, seed);
    auto recs = run_method(
        "pareto", gc_idm_method(wm, model, seed, "reference"), tasks, opt.jobs);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  out.write_records();
  auto rows = aggregate_records(out.records);
  out.write_csv("aggregates.csv", aggregates_to_csv(rows));
  // Sweep table with the grid parameters made explicit.
  std::ostringstream sweep;
  sweep << "env,num_samples,n_steps,rollouts_per_plan,success_rate,"
           "ms_per_episode,ms_per_plan\n";
  std::vector<AggregateRow> cem_rows, ref_rows;
  for (const AggregateRow& r : rows) {
    if (r.method == "gc_idm") {
      ref_rows.push_back(r);
      continue;
    }
    cem_rows.push_back(r);
    int ns = 0, it = 0;
    std::sscanf(r.variant.c_str(), "ns%d_it%d", &ns, &it);
    sweep << r.env << ',' << ns << ',' << it << ',' << ns * it << ','
          << format_double(r.success_rate) << ','
          << format_double(r.ms_per_episode) << ','
          << format_double(r.ms_per_plan) << '\n';
  }
  out.write_csv("pareto.csv", sweep.str());
  out.write_csv("pareto.svg", pareto_svg(cem_rows, ref_rows));
  return out.written;
}

// ---------------------------------------------------------------------------
// gc_idm-only sweeps
// ---------------------------------------------------------------------------
struct VariantSpec {
  std::string variant;   // record variant
  std::string tag;       // checkpoint cache tag ("" = standard model)
  GcIdmConfig cfg;
  int budget = 0;        // 0 -> protocol budget
  int offset = 0;        // 0 -> protocol offset
  double data_fraction = 1.0;
};

std::vector<std::string> run_idm_sweep(const std::string& name,
                                       const ProtocolOptions& opt,
                                       const std::vector<VariantSpec>& variants) {
  ProtocolOutput out{opt.ws.eval_dir(name), {}, {}};
  const uint64_t seed = opt.seeds.empty() ? 42 : opt.seeds.front();
  for (EnvId env : opt.envs) {
    DemoDataset ds = require_dataset(opt.ws, env);
    WorldModel wm = require_world_model(opt.ws, env);
    for (const VariantSpec& v : variants) {
      GcIdm model;
      if (v.tag.empty()) {
        model = require_gc_idm(opt.ws, env, seed);
      } else {
        DemoDataset train = ds;
        if (v.data_fraction < 1.0) {
          std::vector<int> keep, rest;
          split_episodes(ds, v.data_fraction, Rng(seed).stream("data_frac"),
                         &keep, &rest);
          if (keep.empty()) keep.push_back(0);
          train = ds.subset(keep);
        }
        model = ensure_gc_idm_variant(opt.ws, env, seed, v.tag, v.cfg, train, wm);
      }
      std::vector<GoalTask> tasks = sample_tasks(
          ds, opt.n_episodes, v.offset > 0 ? v.offset : opt.offset,
          v.budget > 0 ? v.budget : opt.budget, task_rng(opt, name, env));
      auto recs = run_method(name, gc_idm_method(wm, model, seed, v.variant),
                             tasks, opt.jobs);
      out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
  }
  out.write_records();
  out.write_csv("aggregates.csv", aggregates_to_csv(aggregate_records(out.records)));
  return out.written;
}

std::vector<std::string> run_heldout(const ProtocolOptions& opt) {
  ProtocolOutput out{opt.ws.eval_dir("heldout"), {}, {}};
  PlanConfig pc;
  for (EnvId env : opt.envs) {
    DemoDataset ds = require_dataset(opt.ws, env);
    WorldModel wm = require_world_model(opt.ws, env);
    // Deterministic 90/10 episode-level split at seed 42.
    std::vector<int> train_eps, held_eps;
    split_episodes(ds, 0.9, Rng(42).stream("heldout_split"), &train_eps,
                   &held_eps);
    DemoDataset train = ds.subset(train_eps);
    std::vector<GoalTask> tasks =
        sample_tasks_from(ds, held_eps, opt.n_episodes, opt.offset, opt.budget,
                          task_rng(opt, "heldout", env));
    for (uint64_t seed : opt.seeds) {
      GcIdmConfig cfg = default_idm_config();
      GcIdm model = ensure_gc_idm_variant(opt.ws, env, seed, "heldout", cfg,
                                          train, wm);
      auto recs = run_method("heldout", gc_idm_method(wm, model, seed, ""),
                             tasks, opt.jobs);
      out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
    SolverConfig sc = default_solver_config(SolverKind::kCem);
    uint64_t cem_seed = opt.seeds.empty() ? 42 : opt.seeds.front();
    sc.seed = cem_seed;
    auto recs = run_method("heldout", solver_method(wm, sc, pc, cem_seed, ""),
                           tasks, opt.jobs);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  out.write_records();
  auto rows = aggregate_records(out.records);
  out.write_csv("aggregates.csv", aggregates_to_csv(rows));
  out.write_csv("speedup.csv", speedup_csv(rows, "gc_idm"));
  return out.written;
}

// ---------------------------------------------------------------------------
// pairwise pilot protocols
// ---------------------------------------------------------------------------
std::vector<std::string> run_pairwise_oracle(const ProtocolOptions& opt) {
  ProtocolOutput out{opt.ws.eval_dir("pairwise_oracle"), {}, {}};
  std::ostringstream csv;
  csv << "env,test_sigma,mse,cosine_sim,r2\n";
  for (EnvId env : opt.envs) {
    DemoDataset ds = require_dataset(opt.ws, env);
    DemoDataset val = require_dataset(opt.ws, env, /*val=*/true);
    WorldModel wm = require_world_model(opt.ws, env);
    PairwiseConfig cfg = default_pairwise_config();
    PairwiseIdm model = ensure_pairwise_variant(opt.ws, env, "sig0", cfg, ds, wm);
    for (double sigma : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
      OracleMetrics m = oracle_eval(model, val, wm, sigma, Rng(1));
      csv << env_name(env) << ',' << format_double(sigma) << ','
          << format_double(m.mse) << ',' << format_double(m.cosine_sim) << ','
          << format_double(m.r2) << '\n';
    }
  }
  ensure_dir(out.dir);
  out.write_csv("oracle.csv", csv.str());
  return out.written;
}

std::vector<std::string> run_pairwise_noise(const ProtocolOptions& opt) {
  ProtocolOutput out{opt.ws.eval_dir("pairwise_noise"), {}, {}};
  std::ostringstream csv;
  csv << "env,train_sigma,val_mse,success_rate\n";
  for (EnvId env : opt.envs) {
    DemoDataset ds = require_dataset(opt.ws, env);
    DemoDataset val = require_dataset(opt.ws, env, /*val=*/true);
    WorldModel wm = require_world_model(opt.ws, env);
    std::vector<GoalTask> tasks =
        sample_tasks(ds, std::min(opt.n_episodes, 100), opt.offset, opt.budget,
                     task_rng(opt, "pairwise_noise", env));
    for (double sigma : {0.0, 0.1, 0.5, 1.0, 1.5, 2.0}) {
      PairwiseConfig cfg = default_pairwise_config();
      cfg.train_sigma = sigma;
      char tag[32];
      std::snprintf(tag, sizeof(tag), "sig%g", sigma);
      PairwiseIdm model = ensure_pairwise_variant(opt.ws, env, tag, cfg, ds, wm);
      OracleMetrics m = oracle_eval(model, val, wm, 0.0, Rng(1));
      MethodRun run;
      run.method = "pairwise";
      run.variant = tag;
      run.seed = 42;
      run.config_hash = hash_config(std::string("pairwise;") + tag);
      run.fn = [&wm, &model](const GoalTask& task, int index) {
        EpisodeRecord rec = pairwise_episode(task, model, wm, 0, 1, 0.0,
                                             Rng(42).split(index));
        rec.episode_index = index;
        return rec;
      };
      auto recs = run_method("pairwise_noise", run, tasks, opt.jobs);
      int ok = 0;
      for (const auto& r : recs) ok += r.success;
      csv << env_name(env) << ',' << format_double(sigma) << ','
          << format_double(m.mse) << ','
          << format_double(100.0 * ok / std::max<size_t>(1, recs.size()))
          << '\n';
      out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
  }
  out.write_records();
  out.write_csv("noise.csv", csv.str());
  out.write_csv("aggregates.csv", aggregates_to_csv(aggregate_records(out.records)));
  return out.written;
}

std::vector<std::string> run_pairwise_plan(const ProtocolOptions& opt) {
  ProtocolOutput out{opt.ws.eval_dir("pairwise_plan"), {}, {}};
  const uint64_t seed = opt.seeds.empty() ? 42 : opt.seeds.front();
  struct PlanVariant {
    const char* name;
    int refine;
    int candidates;
  };
  const PlanVariant kVariants[] = {
      {"lerp", 0, 1}, {"refine1", 1, 1}, {"refine3", 3, 1}, {"refine3_c10", 3, 10}};
  for (EnvId env : opt.envs) {
    if (env != EnvId::kTwoRoom && env != EnvId::kPointMass) continue;
    DemoDataset ds = require_dataset(opt.ws, env);
    WorldModel wm = require_world_model(opt.ws, env);
    // The paper-shaped pilot trains with heavy input noise; latents here are
    // whitened, so sigma 1.5 is 150% of the per-dimension spread.
    PairwiseConfig cfg = default_pairwise_config();
    cfg.train_sigma = 1.5;
    PairwiseIdm model = ensure_pairwise_variant(opt.ws, env, "sig1.5", cfg, ds, wm);
    int n = std::min(opt.n_episodes, 100);
    std::vector<GoalTask> tasks =
        env == EnvId::kTwoRoom
            ? sample_cross_wall_tasks(ds, n, opt.offset, opt.budget,
                                      task_rng(opt, "pairwise_plan", env))
            : sample_tasks(ds, n, opt.offset, opt.budget,
                           task_rng(opt, "pairwise_plan", env));
    for (const PlanVariant& v : kVariants) {
      MethodRun run;
      run.method = "pairwise";
      run.variant = v.name;
      run.seed = seed;
      run.config_hash = hash_config(std::string("pairwise_plan;") + v.name);
      int refine = v.refine, candidates = v.candidates;
      run.fn = [&wm, &model, refine, candidates, seed](const GoalTask& task,
                                                       int index) {
        EpisodeRecord rec =
            pairwise_episode(task, model, wm, refine, candidates, 0.1,
                             Rng(seed).stream("pairwise").split(index));
        rec.episode_index = index;
        return rec;
      };
      auto recs = run_method("pairwise_plan", run, tasks, opt.jobs);
      out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
    // Matched gc_idm reference on the same tasks.
    GcIdm idm = require_gc_idm(opt.ws, env, seed);
    auto recs = run_method("pairwise_plan", gc_idm_method(wm, idm, seed, ""),
                           tasks, opt.jobs);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  out.write_records();
  auto rows = aggregate_records(out.records);
  out.write_csv("aggregates.csv", aggregates_to_csv(rows));
  return out.written;
}

}  // namespace

std::vector<std::string> protocol_names() {
  return {"headline",      "solver_family", "pareto",          "goal_offset",
          "budget",        "hmax",          "horizon_embed",   "noise",
          "noise_schedule", "arch",         "data_efficiency", "heldout",
          "pairwise_oracle", "pairwise_noise", "pairwise_plan"};
}

std::vector<std::string> run_protocol(const std::string& name,
                                      const ProtocolOptions& opt) {
  if (name == "headline") {
    return run_headline(name, opt,
                        opt.methods.empty()
                            ? std::vector<std::string>{"gc_idm", "cem"}
                            : opt.methods);
  }
  if (name == "solver_family") {
    return run_headline(
        name, opt,
        opt.methods.empty()
            ? std::vector<std::string>{"gc_idm", "cem", "icem", "mppi", "gradient"}
            : opt.methods);
  }
  if (name == "pareto") return run_pareto(opt);
  if (name == "goal_offset") {
    std::vector<VariantSpec> variants;
    for (int off : {5, 10, 15, 25, 35, 50}) {
      VariantSpec v;
      v.variant = "off" + std::to_string(off);
      v.offset = off;
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "budget") {
    std::vector<VariantSpec> variants;
    for (int b : {5, 10, 15, 25, 50, 75, 100}) {
      VariantSpec v;
      v.variant = "b" + std::to_string(b);
      v.budget = b;
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "hmax") {
    std::vector<VariantSpec> variants;
    for (int h : {5, 10, 25, 50, 100}) {
      VariantSpec v;
      v.variant = "hmax" + std::to_string(h);
      if (h != default_idm_config().H_max) {
        v.tag = "hmax" + std::to_string(h);
        v.cfg = default_idm_config();
        v.cfg.H_max = h;
      }
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "horizon_embed") {
    std::vector<VariantSpec> variants(4);
    variants[0].variant = "hmax1";
    variants[0].tag = "hmax1";
    variants[0].cfg = default_idm_config();
    variants[0].cfg.H_max = 1;
    variants[1].variant = "hmax5";
    variants[1].tag = "hmax5";
    variants[1].cfg = default_idm_config();
    variants[1].cfg.H_max = 5;
    variants[2].variant = "hmax1_wide";
    variants[2].tag = "hmax1_wide";
    variants[2].cfg = default_idm_config();
    variants[2].cfg.H_max = 1;
    variants[2].cfg.hidden = 1024;
    variants[2].cfg.layers = 4;
    variants[3].variant = "default";
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "noise") {
    std::vector<VariantSpec> variants;
    for (double s : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5}) {
      VariantSpec v;
      char buf[32];
      std::snprintf(buf, sizeof(buf), "sig%g", s);
      v.variant = buf;
      if (s > 0.0) {
        v.tag = buf;
        v.cfg = default_idm_config();
        v.cfg.noise_sigma = s;
      }
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "noise_schedule") {
    std::vector<VariantSpec> variants;
    for (double s : {0.05, 0.1, 0.2}) {
      VariantSpec v;
      char buf[32];
      std::snprintf(buf, sizeof(buf), "usig%g", s);
      v.variant = buf;
      v.tag = buf;
      v.cfg = default_idm_config();
      v.cfg.noise_sigma = s;
      v.cfg.noise_schedule = "uniform";
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "arch") {
    std::vector<VariantSpec> variants;
    for (int hidden : {128, 256, 512, 1024}) {
      VariantSpec v;
      v.variant = "h" + std::to_string(hidden);
      if (hidden != default_idm_config().hidden) {
        v.tag = v.variant;
        v.cfg = default_idm_config();
        v.cfg.hidden = hidden;
      }
      variants.push_back(v);
    }
    for (int layers : {1, 2, 3, 4, 5}) {
      VariantSpec v;
      v.variant = "l" + std::to_string(layers);
      if (layers != default_idm_config().layers) {
        v.tag = v.variant;
        v.cfg = default_idm_config();
        v.cfg.layers = layers;
      }
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "data_efficiency") {
    std::vector<VariantSpec> variants;
    for (int pct : {1, 5, 10, 25, 50, 100}) {
      VariantSpec v;
      v.variant = "data" + std::to_string(pct);
      if (pct != 100) {
        v.tag = v.variant;
        v.cfg = default_idm_config();
        v.data_fraction = pct / 100.0;
      }
      variants.push_back(v);
    }
    return run_idm_sweep(name, opt, variants);
  }
  if (name == "heldout") return run_heldout(opt);
  if (name == "pairwise_oracle") return run_pairwise_oracle(opt);
  if (name == "pairwise_noise") return run_pairwise_noise(opt);
  if (name == "pairwise_plan") return run_pairwise_plan(opt);
  throw ConfigError("unknown protocol: " + name);
}

std::vector<std::string> regenerate_reports(const Workspace& ws,
                                            const std::string& protocol) {
  std::string dir = ws.eval_dir(protocol);
  std::string records_path = dir + "/records.jsonl";
  if (!file_exists(records_path)) {
    throw MissingArtifact("no records to report from: " + records_path);
  }
  std::vector<EpisodeRecord> records = read_jsonl(records_path);
  std::vector<AggregateRow> rows = aggregate_records(records);
  std::vector<std::string> written;
  write_text_file(dir + "/aggregates.csv", aggregates_to_csv(rows));
  written.push_back(dir + "/aggregates.csv");
  bool has_ref = false, has_other = false;
  for (const auto& r : rows) {
    (r.method == "gc_idm" ? has_ref : has_other) = true;
  }
  if (has_ref && has_other) {
    write_text_file(dir + "/speedup.csv", speedup_csv(rows, "gc_idm"));
    written.push_back(dir + "/speedup.csv");
  }
  if (protocol == "pareto") {
    std::vector<AggregateRow> cem_rows, ref_rows;
    std::ostringstream sweep;
    sweep << "env,num_samples,n_steps,rollouts_per_plan,success_rate,"
             "ms_per_episode,ms_per_plan\n";
    for (const AggregateRow& r : rows) {
      if (r.method == "gc_idm") {
        ref_rows.push_back(r);
        continue;
      }
      cem_rows.push_back(r);
      int ns = 0, it = 0;
      std::sscanf(r.variant.c_str(), "ns%d_it%d", &ns, &it);
      sweep << r.env << ',' << ns << ',' << it << ',' << ns * it << ','
            << format_double(r.success_rate) << ','
            << format_double(r.ms_per_episode) << ','
            << format_double(r.ms_per_plan) << '\n';
    }
    write_text_file(dir + "/pareto.csv", sweep.str());
    write_text_file(dir + "/pareto.svg", pareto_svg(cem_rows, ref_rows));
    written.push_back(dir + "/pareto.csv");
    written.push_back(dir + "/pareto.svg");
  }
  return written;
}

}  // namespace lpb
