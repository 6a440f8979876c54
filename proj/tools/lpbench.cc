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

// lpbench: latent-space planning and amortized goal-conditioned control
// benchmark. Subcommands cover the full experiment lifecycle: collect
// demonstrations, train the world model and the inverse-dynamics
// controllers, evaluate protocols, sweep planner budgets, run numerical
// diagnostics, and regenerate report tables from raw records.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpb/build_info.h"
#include "lpb/check.h"
#include "lpb/dataset.h"
#include "lpb/diagnostics.h"
#include "lpb/metrics.h"
#include "lpb/protocols.h"
#include "lpb/runio.h"

namespace lpb {
namespace {

std::vector<EnvId> parse_envs(const std::string& csv) {
  std::vector<EnvId> envs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) envs.push_back(env_from_name(item));
  }
  if (envs.empty()) throw ConfigError("no environments given");
  return envs;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<uint64_t> parse_seeds(const std::string& csv) {
  std::vector<uint64_t> seeds;
  for (const std::string& s : split_csv(csv)) seeds.push_back(std::stoull(s));
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

struct GlobalArgs {
  std::string root;
  uint64_t seed = 42;
  int jobs = 1;
};

int run_cli(int argc, char** argv) {
  CLI::App app{"latent-space planning benchmark (build " LPB_BUILD_ID ")"};
  app.require_subcommand(1);
  app.set_config("--config", "", "declarative run config (ini, one section per subcommand)");
  app.allow_config_extras(false);

  GlobalArgs g;
  app.add_option("--root", g.root,
                 "output root (default: $LPB_OUTPUT_ROOT or ./runs)");
  app.add_option("--seed", g.seed, "root RNG seed, split per component");
  app.add_option("--jobs", g.jobs,
                 "concurrent episodes (1 keeps runs bit-stable)");

  // ---- collect ----
  auto* collect = app.add_subcommand("collect", "collect expert demonstrations");
  std::string c_env = "point_mass";
  int c_episodes = default_dataset_episodes();
  int c_max_len = default_episode_length();
  std::string c_expert = "greedy";
  bool c_val = false;
  collect->add_option("--env", c_env, "environment")->required();
  collect->add_option("--episodes", c_episodes, "number of episodes");
  collect->add_option("--max-len", c_max_len, "episode length");
  collect->add_option("--expert", c_expert, "greedy|paced");
  collect->add_flag("--val", c_val, "write the held-out dataset variant");

  // ---- train-wm ----
  auto* train_wm = app.add_subcommand("train-wm", "train the latent world model");
  std::string w_env = "point_mass";
  WorldModelConfig w_cfg = default_wm_config();
  bool w_symmetric = false;
  train_wm->add_option("--env", w_env)->required();
  train_wm->add_option("--d", w_cfg.d, "latent dimension");
  train_wm->add_option("--hidden", w_cfg.hidden);
  train_wm->add_option("--lambda", w_cfg.lambda, "isotropy weight");
  train_wm->add_option("--epochs", w_cfg.epochs);
  train_wm->add_option("--batch", w_cfg.batch);
  train_wm->add_option("--feat-freqs", w_cfg.feat_freqs);
  train_wm->add_option("--frameskip", w_cfg.frameskip);
  train_wm->add_flag("--symmetric-target", w_symmetric,
                     "disable the stop-gradient on the target embedding");

  // ---- train-idm ----
  auto* train_idm = app.add_subcommand("train-idm", "train the goal-conditioned inverse dynamics controller");
  std::string i_env = "point_mass";
  GcIdmConfig i_cfg = default_idm_config();
  std::string i_tag;
  std::string i_data;
  train_idm->add_option("--env", i_env)->required();
  train_idm->add_option("--hmax", i_cfg.H_max);
  train_idm->add_option("--hidden", i_cfg.hidden);
  train_idm->add_option("--layers", i_cfg.layers);
  train_idm->add_option("--sigma", i_cfg.noise_sigma, "input-noise augmentation");
  train_idm->add_option("--noise-schedule", i_cfg.noise_schedule, "fixed|uniform");
  train_idm->add_option("--epochs", i_cfg.epochs);
  train_idm->add_option("--batch", i_cfg.batch);
  train_idm->add_option("--tag", i_tag, "checkpoint name suffix");
  train_idm->add_option("--data", i_data, "dataset prefix override");

  // ---- train-pairwise ----
  auto* train_pw = app.add_subcommand("train-pairwise", "train the pairwise inverse model");
  std::string p_env = "point_mass";
  PairwiseConfig p_cfg = default_pairwise_config();
  std::string p_tag;
  train_pw->add_option("--env", p_env)->required();
  train_pw->add_option("--sigma", p_cfg.train_sigma, "training input noise");
  train_pw->add_option("--frameskip", p_cfg.frameskip,
                       "pair stride; >1 regresses action chunks (negative control)");
  train_pw->add_option("--epochs", p_cfg.epochs);
  train_pw->add_option("--batch", p_cfg.batch);
  train_pw->add_option("--hidden", p_cfg.hidden);
  train_pw->add_option("--tag", p_tag, "checkpoint name suffix");

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "run an evaluation protocol");
  std::string e_protocol = "headline";
  std::string e_envs = "two_room,push_block,reacher,point_mass";
  std::string e_methods;
  std::string e_seeds = "42,123,456";
  int e_n = 200, e_offset = 25, e_budget = 50;
  eval->add_option("--protocol", e_protocol, "protocol name")->required();
  eval->add_option("--envs", e_envs, "comma-separated environments");
  eval->add_option("--methods", e_methods, "comma-separated methods");
  eval->add_option("--n", e_n, "episodes per cell");
  eval->add_option("--offset", e_offset, "goal offset in dataset steps");
  eval->add_option("--budget", e_budget, "environment-step budget");
  eval->add_option("--seeds", e_seeds, "comma-separated seeds");

  // ---- sweep (planner compute sweep) ----
  auto* sweep = app.add_subcommand("sweep", "planner compute sweep (csv + svg)");
  std::string s_envs = "two_room,push_block,reacher,point_mass";
  int s_n = 100;
  sweep->add_option("--envs", s_envs);
  sweep->add_option("--n", s_n, "episodes per configuration");

  // ---- diagnose ----
  auto* diagnose = app.add_subcommand("diagnose", "conditioning, error propagation, latent dumps");
  std::string d_envs = "two_room,push_block,reacher,point_mass";
  int d_samples = 100;
  std::string d_windows = "1,5,25";
  int d_episodes = 20;
  diagnose->add_option("--envs", d_envs);
  diagnose->add_option("--samples", d_samples, "jacobian sample count");
  diagnose->add_option("--windows", d_windows, "commit windows");
  diagnose->add_option("--episodes", d_episodes, "error-propagation episodes");

  // ---- report ----
  auto* report = app.add_subcommand("report", "regenerate aggregate tables from raw records");
  std::string r_protocol;
  report->add_option("--protocol", r_protocol,
                     "protocol to rebuild (default: every protocol with records)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Workspace ws = Workspace::resolve(g.root);
  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    command_line += (i ? " " : "") + std::string(argv[i]);
  }
  std::string resolved = app.config_to_str(true, false);

  if (collect->parsed()) {
    EnvId env = env_from_name(c_env);
    ensure_dir(ws.data_dir());
    std::string prefix = c_val ? ws.val_prefix(env) : ws.dataset_prefix(env);
    OutputGuard guard;
    guard.add(prefix + ".json");
    guard.add(prefix + ".bin");
    DemoDataset ds = collect_dataset(env, c_episodes, c_max_len, Rng(g.seed),
                                     c_expert);
    save_dataset(ds, prefix);
    write_run_info(ws.data_dir(), command_line, resolved);
    guard.commit();
    std::printf("collected %zu episodes -> %s.{json,bin}\n",
                ds.episodes.size(), prefix.c_str());
    return 0;
  }
  if (train_wm->parsed()) {
    EnvId env = env_from_name(w_env);
    DemoDataset ds = require_dataset(ws, env);
    w_cfg.stop_grad_target = !w_symmetric;
    ensure_dir(ws.model_dir(env));
    OutputGuard guard;
    guard.add(ws.wm_path(env));
    std::vector<TrainCurveRow> curve;
    WorldModel wm = train_world_model(ds, w_cfg, Rng(g.seed), &curve);
    wm.save(ws.wm_path(env));
    write_text_file(ws.model_dir(env) + "/wm_curve.csv",
                    curve_to_csv(curve, "pred_loss", "sigreg"));
    write_run_info(ws.model_dir(env), command_line, resolved);
    guard.commit();
    std::printf("world model -> %s (%lld params)\n", ws.wm_path(env).c_str(),
                static_cast<long long>(wm.params().total_numel()));
    return 0;
  }
  if (train_idm->parsed()) {
    EnvId env = env_from_name(i_env);
    DemoDataset ds = i_data.empty() ? require_dataset(ws, env) : load_dataset(i_data);
    WorldModel wm = require_world_model(ws, env);
    ensure_dir(ws.model_dir(env));
    std::string path = ws.idm_path(env, g.seed, i_tag);
    OutputGuard guard;
    guard.add(path);
    std::vector<TrainCurveRow> curve;
    GcIdm model = train_gc_idm(ds, wm, i_cfg, Rng(g.seed), &curve);
    model.save(path);
    write_text_file(path + ".curve.csv", curve_to_csv(curve, "mse", "sigma"));
    write_run_info(ws.model_dir(env), command_line, resolved);
    guard.commit();
    std::printf("gc_idm -> %s\n", path.c_str());
    return 0;
  }
  if (train_pw->parsed()) {
    EnvId env = env_from_name(p_env);
    DemoDataset ds = require_dataset(ws, env);
    WorldModel wm = require_world_model(ws, env);
    ensure_dir(ws.model_dir(env));
    char default_tag[32];
    std::snprintf(default_tag, sizeof(default_tag), "sig%g", p_cfg.train_sigma);
    std::string tag = p_tag.empty() ? default_tag : p_tag;
    std::string path = ws.pairwise_path(env, tag);
    OutputGuard guard;
    guard.add(path);
    std::vector<TrainCurveRow> curve;
    PairwiseIdm model = train_pairwise(ds, wm, p_cfg, Rng(g.seed), &curve);
    model.save(path);
    write_text_file(path + ".curve.csv", curve_to_csv(curve, "mse", "sigma"));
    write_run_info(ws.model_dir(env), command_line, resolved);
    guard.commit();
    std::printf("pairwise -> %s\n", path.c_str());
    return 0;
  }
  if (eval->parsed() || sweep->parsed()) {
    ProtocolOptions opt;
    opt.ws = ws;
    opt.jobs = g.jobs;
    std::string protocol;
    if (sweep->parsed()) {
      protocol = "pareto";
      opt.envs = parse_envs(s_envs);
      opt.n_episodes = s_n;
      opt.seeds = {g.seed};
    } else {
      protocol = e_protocol;
      opt.envs = parse_envs(e_envs);
      opt.methods = split_csv(e_methods);
      opt.n_episodes = e_n;
      opt.offset = e_offset;
      opt.budget = e_budget;
      opt.seeds = parse_seeds(e_seeds);
    }
    OutputGuard guard;
    guard.add(ws.eval_dir(protocol));
    std::vector<std::string> written = run_protocol(protocol, opt);
    write_run_info(ws.eval_dir(protocol), command_line, resolved);
    guard.commit();
    for (const std::string& w : written) std::printf("wrote %s\n", w.c_str());
    return 0;
  }
  if (diagnose->parsed()) {
    std::string dir = ws.eval_dir("diagnostics");
    ensure_dir(dir);
    OutputGuard guard;
    guard.add(dir);
    std::ostringstream cond_csv;
    cond_csv << "env,sample,kappa_b,kappa_j_e,kappa_j_f,bound_ok,full_rank\n";
    std::ostringstream ep_csv;
    ep_csv << "env,window,mean_divergence\n";
    for (EnvId env : parse_envs(d_envs)) {
      DemoDataset ds = require_dataset(ws, env);
      WorldModel wm = require_world_model(ws, env);
      Rng rng = Rng(g.seed).stream("diagnose").stream(env_name(env));
      int passed = 0, total = 0;
      nlohmann::json first_report;
      for (int i = 0; i < d_samples; ++i) {
        Rng r = rng.split(i);
        int e = static_cast<int>(r.uniform_int(ds.episodes.size()));
        int t = static_cast<int>(r.uniform_int(ds.episodes[e].steps));
        EnvState s = state_from_obs(env, ds.obs_vec(e, t));
        const ActionSpec& spec = action_spec(env);
        std::vector<double> a(spec.dim);
        for (int j = 0; j < spec.dim; ++j) {
          a[j] = 0.25 * r.uniform(spec.low[j], spec.high[j]);
        }
        JacobianReport rep = latent_action_jacobian(wm, s, a);
        if (i == 0) first_report = jacobian_report_json(rep);
        cond_csv << env_name(env) << ',' << i << ','
                 << format_double(rep.kappa_b) << ','
                 << format_double(rep.kappa_j_e) << ','
                 << format_double(rep.kappa_j_f) << ','
                 << (rep.bound_ok ? 1 : 0) << ',' << (rep.full_rank ? 1 : 0)
                 << '\n';
        passed += rep.bound_ok ? 1 : 0;
        ++total;
      }
      write_text_file(dir + "/jacobian_" + env_name(env) + ".json",
                      first_report.dump(2) + "\n");
      std::printf("%s conditioning bound: %d/%d\n", env_name(env), passed, total);
      // Error propagation across commit windows (amortized controller).
      uint64_t seed0 = 42;
      if (file_exists(ws.idm_path(env, seed0))) {
        GcIdm model = require_gc_idm(ws, env, seed0);
        OpenLoopController ctrl = gc_idm_open_loop(wm, model);
        std::vector<GoalTask> tasks =
            sample_tasks(ds, d_episodes, 25, 50, rng.stream("ep_tasks"));
        for (const std::string& wstr : split_csv(d_windows)) {
          int window = std::stoi(wstr);
          double mean = 0.0;
          for (size_t ti = 0; ti < tasks.size(); ++ti) {
            DivergenceResult dr = error_propagation_experiment(
                tasks[ti], ctrl, window, 0.01, "iid", rng.split(1000 + ti));
            mean += dr.mean_divergence;
          }
          mean /= std::max<size_t>(1, tasks.size());
          ep_csv << env_name(env) << ',' << window << ',' << format_double(mean)
                 << '\n';
        }
      }
      dump_latent_geometry(wm, ds, dir + "/latents_" + env_name(env) + ".csv",
                           dir + "/marginal_" + env_name(env) + ".csv");
    }
    write_text_file(dir + "/conditioning.csv", cond_csv.str());
    write_text_file(dir + "/error_propagation.csv", ep_csv.str());
    write_run_info(dir, command_line, resolved);
    guard.commit();
    std::printf("diagnostics -> %s\n", dir.c_str());
    return 0;
  }
  if (report->parsed()) {
    std::vector<std::string> protocols =
        r_protocol.empty() ? protocol_names() : std::vector<std::string>{r_protocol};
    bool any = false;
    for (const std::string& p : protocols) {
      if (!file_exists(ws.eval_dir(p) + "/records.jsonl")) continue;
      for (const std::string& w : regenerate_reports(ws, p)) {
        std::printf("wrote %s\n", w.c_str());
      }
      any = true;
    }
    if (!any && !r_protocol.empty()) {
      throw MissingArtifact("no records for protocol: " + r_protocol);
    }
    return 0;
  }
  return 2;
}

}  // namespace
}  // namespace lpb

int main(int argc, char** argv) {
  try {
    return lpb::run_cli(argc, argv);
  } catch (const lpb::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const lpb::MissingArtifact& e) {
    std::fprintf(stderr, "missing artifact: %s\n", e.what());
    return 3;
  } catch (const lpb::NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
