// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. All experiment logic lives behind the C API in
// ganlab.h; this binary only turns flags into a JSON config, hands it over,
// and maps status codes to exit codes (0 ok, 2 config, 3 numeric, 4 io).

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ganlab.h"

namespace {

using nlohmann::json;

struct GlobalFlags {
  std::optional<long> seed;
  std::string out_dir;
  bool paper_scale = false;
  std::optional<long> workers;
};

struct TrainFlags {
  std::optional<std::string> variants;  // comma separated
  std::optional<long> d;
  std::optional<long> g;
  std::optional<long> steps;
  std::optional<long> k;
  std::optional<long> batch;
  std::optional<double> lr;
  std::optional<double> lr_d;
  std::optional<double> lr_g;
  std::optional<double> sigma;
  std::optional<long> m;
  std::optional<double> lambda;
  std::optional<long> log_every;
  std::optional<long> hidden;
};

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Sets a dotted-path key ("train.lr_d") to a JSON-parsed value, creating
// intermediate objects as needed.
void set_dotted(json& root, const std::string& key, const std::string& value) {
  json* cursor = &root;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = key.find('.', start);
    std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw std::runtime_error("--set: empty path segment in '" + key + "'");
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::parse_error&) {
        parsed = value;  // bare strings are allowed unquoted
      }
      (*cursor)[part] = parsed;
      return;
    }
    cursor = &(*cursor)[part];
    start = dot + 1;
  }
}

json load_config(const std::string& config_path, const std::vector<std::string>& sets) {
  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config file: %s\n", config_path.c_str());
      std::exit(2);
    }
    try {
      in >> config;
    } catch (const json::parse_error& e) {
      std::fprintf(stderr, "error: %s: %s\n", config_path.c_str(), e.what());
      std::exit(2);
    }
  }
  for (const std::string& kv : sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      std::exit(2);
    }
    try {
      set_dotted(config, kv.substr(0, eq), kv.substr(eq + 1));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      std::exit(2);
    }
  }
  return config;
}

void apply_train_flags(json& config, const GlobalFlags& global, const TrainFlags& train) {
  if (global.seed) config["seed"] = *global.seed;
  if (train.variants) config["variants"] = split_csv(*train.variants);
  if (train.d) config["task"]["d"] = *train.d;
  if (train.sigma) config["task"]["sigma"] = *train.sigma;
  if (train.m) config["task"]["m"] = *train.m;
  if (train.g) config["train"]["latent_dim"] = *train.g;
  if (train.steps) config["train"]["total_g_steps"] = *train.steps;
  if (train.k) config["train"]["d_steps_per_g"] = *train.k;
  if (train.batch) config["train"]["batch_size"] = *train.batch;
  if (train.lr) {
    config["train"]["lr_d"] = *train.lr;
    config["train"]["lr_g"] = *train.lr;
  }
  if (train.lr_d) config["train"]["lr_d"] = *train.lr_d;
  if (train.lr_g) config["train"]["lr_g"] = *train.lr_g;
  if (train.lambda) config["train"]["lambda"] = *train.lambda;
  if (train.log_every) config["train"]["log_every"] = *train.log_every;
  if (train.hidden) config["train"]["hidden_width"] = *train.hidden;
  if (global.paper_scale) config["train"]["total_g_steps"] = 200000;
}

int run_command(const std::string& command, const json& config,
                const std::string& out_dir) {
  ganlab_experiment* exp = nullptr;
  ganlab_status status =
      ganlab_experiment_create(command.c_str(), config.dump().c_str(), out_dir.c_str(),
                               &exp);
  if (status != GANLAB_OK) {
    std::fprintf(stderr, "error: %s\n", ganlab_last_error());
    return static_cast<int>(status);
  }
  status = ganlab_experiment_run(exp);
  if (status != GANLAB_OK) {
    std::fprintf(stderr, "error: %s\n", ganlab_last_error());
    ganlab_experiment_destroy(exp);
    return static_cast<int>(status);
  }
  ganlab_experiment_destroy(exp);
  std::printf("%s: outputs written to %s\n", command.c_str(), out_dir.c_str());
  return 0;
}

void add_train_flags(CLI::App* cmd, TrainFlags& train, bool with_g) {
  cmd->add_option("--variant,--variants", train.variants,
                  "comma-separated variants: minimax,ns,wgan,wgan-gp,gan-gp,dragan-ns");
  cmd->add_option("--d", train.d, "ambient data dimension");
  if (with_g) cmd->add_option("--g", train.g, "generator latent dimension");
  cmd->add_option("--steps", train.steps, "generator updates to run");
  cmd->add_option("--k,--d-steps", train.k, "discriminator updates per generator update");
  cmd->add_option("--batch", train.batch, "batch size");
  cmd->add_option("--lr", train.lr, "learning rate for both players");
  cmd->add_option("--lr-d", train.lr_d, "discriminator learning rate");
  cmd->add_option("--lr-g", train.lr_g, "generator learning rate");
  cmd->add_option("--sigma", train.sigma, "latent standard deviation of the task");
  cmd->add_option("--m", train.m, "fixed dataset size (0 streams fresh samples)");
  cmd->add_option("--lambda", train.lambda, "gradient penalty coefficient");
  cmd->add_option("--log-every", train.log_every, "trace logging cadence");
  cmd->add_option("--hidden", train.hidden, "discriminator hidden width");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ganlab: synthetic GAN training laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", std::string(ganlab_version()));

  GlobalFlags global;
  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--seed", global.seed, "master seed")->capture_default_str();
  app.add_option("--out", global.out_dir, "output directory");
  app.add_flag("--paper-scale", global.paper_scale,
               "paper-sized runs: 200000 steps, 1000 sweep seeds");
  app.add_option("--workers", global.workers, "parallel sweep workers");

  TrainFlags exp1_flags, exp2_flags, parallel_flags, sweep_flags;

  CLI::App* exp1 = app.add_subcommand("exp1", "1-D data manifold, 1-D generator");
  exp1->add_option("--config", config_path, "JSON config file");
  exp1->add_option("--set", sets, "dotted-path config override, e.g. train.lr_d=0.001");
  add_train_flags(exp1, exp1_flags, /*with_g=*/false);

  CLI::App* exp2 = app.add_subcommand("exp2", "1-D data manifold, overcomplete generator");
  exp2->add_option("--config", config_path, "JSON config file");
  exp2->add_option("--set", sets, "dotted-path config override");
  add_train_flags(exp2, exp2_flags, /*with_g=*/true);

  CLI::App* parallel =
      app.add_subcommand("parallel", "parallel-lines setup: generator manifold starts "
                                     "parallel to the data manifold");
  parallel->add_option("--config", config_path, "JSON config file");
  parallel->add_option("--set", sets, "dotted-path config override");
  std::optional<double> parallel_offset;
  parallel->add_option("--offset", parallel_offset,
                       "perpendicular offset between the manifolds (non-zero)");
  add_train_flags(parallel, parallel_flags, /*with_g=*/false);

  CLI::App* figure2 = app.add_subcommand(
      "figure2", "discriminator and generator-loss landscape for two separated Gaussians");
  figure2->add_option("--config", config_path, "JSON config file");
  figure2->add_option("--set", sets, "dotted-path config override");
  std::optional<double> f2_mu1, f2_mu2, f2_s1, f2_s2;
  std::optional<long> f2_grid_n, f2_train_steps;
  figure2->add_option("--mu1", f2_mu1, "data mean");
  figure2->add_option("--mu2", f2_mu2, "model mean");
  figure2->add_option("--s1", f2_s1, "data std");
  figure2->add_option("--s2", f2_s2, "model std");
  figure2->add_option("--grid-n", f2_grid_n, "grid points");
  figure2->add_option("--train-steps", f2_train_steps, "steps for the trained panel");

  CLI::App* sweep = app.add_subcommand("sweep", "hyperparameter grid with seed replication");
  sweep->add_option("--config", config_path, "JSON config file");
  sweep->add_option("--set", sets, "dotted-path config override");
  std::string sweep_axis;
  std::string sweep_values;
  std::optional<long> sweep_seeds;
  bool fixed_task = false;
  sweep->add_option("--axis", sweep_axis, "lr | input-dim | d-steps");
  sweep->add_option("--values", sweep_values, "comma-separated axis values");
  sweep->add_option("--seeds", sweep_seeds, "replicates per cell");
  sweep->add_flag("--fixed-task", fixed_task, "one task per cell instead of per replicate");
  add_train_flags(sweep, sweep_flags, /*with_g=*/true);

  CLI::App* rerun = app.add_subcommand("rerun", "re-execute a stored manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "path to manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad flags are config errors
  }

  std::string out_dir = global.out_dir;
  if (rerun->parsed()) {
    ganlab_status status = ganlab_run_manifest(
        manifest_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str());
    if (status != GANLAB_OK) {
      std::fprintf(stderr, "error: %s\n", ganlab_last_error());
      return static_cast<int>(status);
    }
    std::printf("rerun: manifest %s executed\n", manifest_path.c_str());
    return 0;
  }

  if (out_dir.empty()) out_dir = "out";

  if (exp1->parsed()) {
    json config = load_config(config_path, sets);
    apply_train_flags(config, global, exp1_flags);
    return run_command("exp1", config, out_dir + "/exp1");
  }
  if (exp2->parsed()) {
    json config = load_config(config_path, sets);
    apply_train_flags(config, global, exp2_flags);
    return run_command("exp2", config, out_dir + "/exp2");
  }
  if (parallel->parsed()) {
    json config = load_config(config_path, sets);
    apply_train_flags(config, global, parallel_flags);
    if (parallel_offset) config["parallel_offset"] = *parallel_offset;
    return run_command("parallel", config, out_dir + "/parallel");
  }
  if (figure2->parsed()) {
    json config = load_config(config_path, sets);
    if (global.seed) config["seed"] = *global.seed;
    if (f2_mu1) config["figure2"]["mu1"] = *f2_mu1;
    if (f2_mu2) config["figure2"]["mu2"] = *f2_mu2;
    if (f2_s1) config["figure2"]["s1"] = *f2_s1;
    if (f2_s2) config["figure2"]["s2"] = *f2_s2;
    if (f2_grid_n) config["figure2"]["grid_n"] = *f2_grid_n;
    if (f2_train_steps) config["figure2"]["train_steps"] = *f2_train_steps;
    return run_command("figure2", config, out_dir + "/figure2");
  }
  if (sweep->parsed()) {
    json config = load_config(config_path, sets);
    apply_train_flags(config, global, sweep_flags);
    if (!sweep_axis.empty()) {
      std::string axis = sweep_axis;
      if (axis == "lr") axis = "learning_rate";
      if (axis == "input-dim") axis = "input_dim";
      if (axis == "d-steps") axis = "d_steps_per_g";
      config["sweep"]["axis"] = axis;
    }
    if (!sweep_values.empty()) {
      std::vector<double> values;
      for (const std::string& item : split_csv(sweep_values)) {
        try {
          values.push_back(std::stod(item));
        } catch (const std::exception&) {
          std::fprintf(stderr, "error: --values: '%s' is not a number\n", item.c_str());
          return 2;
        }
      }
      config["sweep"]["values"] = values;
    }
    if (sweep_seeds) config["sweep"]["n_seeds"] = *sweep_seeds;
    if (global.paper_scale) config["sweep"]["n_seeds"] = 1000;
    if (fixed_task) config["sweep"]["resample_task"] = false;
    if (global.workers) config["sweep"]["workers"] = *global.workers;
    return run_command("sweep", config, out_dir + "/sweep");
  }
  return 0;
}
