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

#include "ganlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "ganlab/analysis.hpp"
#include "ganlab/io.hpp"
#include "ganlab/sweep.hpp"
#include "ganlab/svg.hpp"
#include "ganlab/trainer.hpp"

namespace ganlab::experiments {

using nlohmann::json;

const char* kVersion = "0.1.0";

bool known_command(const std::string& command) {
  return command == "exp1" || command == "exp2" || command == "parallel" ||
         command == "figure2" || command == "sweep";
}

namespace {

constexpr const char* kDataColor = "#1f77b4";   // blue, data cloud
constexpr const char* kModelColor = "#d62728";  // red, model cloud

const std::vector<std::string> kVariantColors = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_object(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown field");
  }
}

double get_number(const json& j, const std::string& path, const std::string& key,
                  double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number()) fail(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

long get_integer(const json& j, const std::string& path, const std::string& key,
                 long dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_number_integer()) fail(path + "." + key, "expected an integer");
  return j.at(key).get<long>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key,
              bool dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) fail(path + "." + key, "expected a boolean");
  return j.at(key).get<bool>();
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be positive");
}

void require_non_negative(double v, const std::string& path) {
  if (v < 0.0) fail(path, "must be non-negative");
}

json resolve_task(const json& in, const std::string& path, std::size_t default_d) {
  check_object(in, path, {"d", "sigma", "m"});
  json out;
  out["d"] = get_integer(in, path, "d", static_cast<long>(default_d));
  out["sigma"] = get_number(in, path, "sigma", 1.0);
  out["m"] = get_integer(in, path, "m", 0);
  if (out["d"].get<long>() < 1) fail(path + ".d", "must be >= 1");
  require_positive(out["sigma"].get<double>(), path + ".sigma");
  if (out["m"].get<long>() < 0) fail(path + ".m", "must be >= 0");
  return out;
}

struct TrainDefaults {
  long total_g_steps = 20000;
  std::size_t latent_dim = 1;
};

json resolve_train(const json& in, const std::string& path, const TrainDefaults& dflt) {
  check_object(in, path,
               {"lr_d", "lr_g", "d_steps_per_g", "total_g_steps", "batch_size",
                "lambda", "noise_std", "clip_c", "adam_beta1", "adam_beta2", "adam_eps",
                "latent_dim", "hidden_width", "init_weight_std", "log_every"});
  json out;
  out["lr_d"] = get_number(in, path, "lr_d", 1e-3);
  out["lr_g"] = get_number(in, path, "lr_g", 1e-3);
  out["d_steps_per_g"] = get_integer(in, path, "d_steps_per_g", 5);
  out["total_g_steps"] = get_integer(in, path, "total_g_steps", dflt.total_g_steps);
  out["batch_size"] = get_integer(in, path, "batch_size", 64);
  out["lambda"] = get_number(in, path, "lambda", 10.0);
  if (in.contains("noise_std") && !in.at("noise_std").is_null()) {
    if (!in.at("noise_std").is_number()) fail(path + ".noise_std", "expected a number or null");
    out["noise_std"] = in.at("noise_std").get<double>();
    require_non_negative(out["noise_std"].get<double>(), path + ".noise_std");
  } else {
    out["noise_std"] = nullptr;
  }
  out["clip_c"] = get_number(in, path, "clip_c", 0.01);
  out["adam_beta1"] = get_number(in, path, "adam_beta1", 0.5);
  out["adam_beta2"] = get_number(in, path, "adam_beta2", 0.9);
  out["adam_eps"] = get_number(in, path, "adam_eps", 1e-8);
  out["latent_dim"] = get_integer(in, path, "latent_dim",
                                  static_cast<long>(dflt.latent_dim));
  out["hidden_width"] = get_integer(in, path, "hidden_width", 32);
  out["init_weight_std"] = get_number(in, path, "init_weight_std", 0.1);
  out["log_every"] = get_integer(in, path, "log_every", 100);

  require_non_negative(out["lr_d"].get<double>(), path + ".lr_d");
  require_non_negative(out["lr_g"].get<double>(), path + ".lr_g");
  if (out["d_steps_per_g"].get<long>() < 1) fail(path + ".d_steps_per_g", "must be >= 1");
  if (out["total_g_steps"].get<long>() < 0) fail(path + ".total_g_steps", "must be >= 0");
  if (out["batch_size"].get<long>() < 1) fail(path + ".batch_size", "must be >= 1");
  require_non_negative(out["lambda"].get<double>(), path + ".lambda");
  require_positive(out["clip_c"].get<double>(), path + ".clip_c");
  double b1 = out["adam_beta1"].get<double>(), b2 = out["adam_beta2"].get<double>();
  if (b1 < 0.0 || b1 >= 1.0) fail(path + ".adam_beta1", "must be in [0, 1)");
  if (b2 < 0.0 || b2 >= 1.0) fail(path + ".adam_beta2", "must be in [0, 1)");
  require_positive(out["adam_eps"].get<double>(), path + ".adam_eps");
  if (out["latent_dim"].get<long>() < 1) fail(path + ".latent_dim", "must be >= 1");
  if (out["hidden_width"].get<long>() < 1) fail(path + ".hidden_width", "must be >= 1");
  require_positive(out["init_weight_std"].get<double>(), path + ".init_weight_std");
  if (out["log_every"].get<long>() < 1) fail(path + ".log_every", "must be >= 1");
  return out;
}

json resolve_variants(const json& in, const std::string& path,
                      const std::vector<std::string>& dflt) {
  json list = json::array();
  if (in.is_null()) {
    for (const std::string& v : dflt) list.push_back(v);
  } else {
    if (!in.is_array() || in.empty()) {
      fail(path, "expected a non-empty array of variant names");
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!in.at(i).is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
      list.push_back(in.at(i).get<std::string>());
    }
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!losses::variant_from_name(list.at(i).get<std::string>())) {
      fail(path + "[" + std::to_string(i) + "]",
           "unknown variant '" + list.at(i).get<std::string>() +
               "' (expected one of: minimax, ns, wgan, wgan-gp, gan-gp, dragan-ns)");
    }
  }
  return list;
}

std::vector<long> default_snapshots(const std::string& command, long steps) {
  if (command == "parallel") return {0, (steps * 2) / 5, steps};
  return {0, steps / 2, steps};
}

json resolve_snapshots(const json& in, const std::string& path,
                       const std::string& command, long steps) {
  std::vector<long> values;
  if (in.is_null()) {
    values = default_snapshots(command, steps);
  } else {
    if (!in.is_array()) fail(path, "expected an array of steps");
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!in.at(i).is_number_integer()) {
        fail(path + "[" + std::to_string(i) + "]", "expected an integer");
      }
      long v = in.at(i).get<long>();
      if (v < 0 || v > steps) {
        fail(path + "[" + std::to_string(i) + "]", "must lie in [0, total_g_steps]");
      }
      values.push_back(v);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return json(values);
}

std::vector<double> default_axis_values(sweep::Axis axis) {
  switch (axis) {
    case sweep::Axis::kLearningRate: return {1e-4, 1e-3, 1e-2};
    case sweep::Axis::kInputDim: return {2, 4, 8, 16};
    case sweep::Axis::kDStepsPerG: return {1, 5, 10, 100};
  }
  return {};
}

sweep::Axis axis_from_name(const std::string& name, const std::string& path) {
  if (name == "learning_rate") return sweep::Axis::kLearningRate;
  if (name == "input_dim") return sweep::Axis::kInputDim;
  if (name == "d_steps_per_g") return sweep::Axis::kDStepsPerG;
  fail(path, "unknown axis '" + name +
                 "' (expected learning_rate, input_dim or d_steps_per_g)");
}

json resolve_sweep(const json& in, const std::string& path) {
  check_object(in, path, {"axis", "values", "n_seeds", "resample_task", "workers"});
  json out;
  std::string axis = in.contains("axis") ? in.at("axis").get<std::string>() : "learning_rate";
  sweep::Axis parsed_axis = axis_from_name(axis, path + ".axis");
  out["axis"] = axis;
  if (in.contains("values")) {
    if (!in.at("values").is_array() || in.at("values").empty()) {
      fail(path + ".values", "expected a non-empty array of numbers");
    }
    for (std::size_t i = 0; i < in.at("values").size(); ++i) {
      if (!in.at("values").at(i).is_number()) {
        fail(path + ".values[" + std::to_string(i) + "]", "expected a number");
      }
    }
    out["values"] = in.at("values");
  } else {
    out["values"] = json(default_axis_values(parsed_axis));
  }
  for (std::size_t i = 0; i < out["values"].size(); ++i) {
    double v = out["values"].at(i).get<double>();
    std::string vp = path + ".values[" + std::to_string(i) + "]";
    if (parsed_axis == sweep::Axis::kLearningRate) {
      require_positive(v, vp);
    } else if (v < 1.0 || v != std::floor(v)) {
      fail(vp, "must be a positive integer");
    }
  }
  out["n_seeds"] = get_integer(in, path, "n_seeds", 50);
  if (out["n_seeds"].get<long>() < 1) fail(path + ".n_seeds", "must be >= 1");
  out["resample_task"] = get_bool(in, path, "resample_task", true);
  out["workers"] = get_integer(in, path, "workers", 1);
  if (out["workers"].get<long>() < 1) fail(path + ".workers", "must be >= 1");
  return out;
}

json resolve_figure2(const json& in, const std::string& path) {
  check_object(in, path,
               {"mu1", "mu2", "s1", "s2", "grid_n", "x_min", "x_max", "train_steps",
                "train_lr"});
  json out;
  out["mu1"] = get_number(in, path, "mu1", -2.0);
  out["mu2"] = get_number(in, path, "mu2", 2.0);
  out["s1"] = get_number(in, path, "s1", 0.25);
  out["s2"] = get_number(in, path, "s2", 0.25);
  out["grid_n"] = get_integer(in, path, "grid_n", 401);
  out["x_min"] = get_number(in, path, "x_min", -4.0);
  out["x_max"] = get_number(in, path, "x_max", 4.0);
  out["train_steps"] = get_integer(in, path, "train_steps", 4000);
  out["train_lr"] = get_number(in, path, "train_lr", 1e-3);
  require_positive(out["s1"].get<double>(), path + ".s1");
  require_positive(out["s2"].get<double>(), path + ".s2");
  if (out["grid_n"].get<long>() < 2) fail(path + ".grid_n", "must be >= 2");
  if (!(out["x_min"].get<double>() < out["x_max"].get<double>())) {
    fail(path + ".x_min", "must be less than x_max");
  }
  if (out["train_steps"].get<long>() < 0) fail(path + ".train_steps", "must be >= 0");
  require_positive(out["train_lr"].get<double>(), path + ".train_lr");
  return out;
}

trainer::TrainConfig train_config_from(const json& t) {
  trainer::TrainConfig cfg;
  cfg.lr_d = t.at("lr_d").get<double>();
  cfg.lr_g = t.at("lr_g").get<double>();
  cfg.d_steps_per_g = t.at("d_steps_per_g").get<int>();
  cfg.total_g_steps = t.at("total_g_steps").get<long>();
  cfg.batch_size = t.at("batch_size").get<std::size_t>();
  cfg.penalty.lambda = t.at("lambda").get<double>();
  if (!t.at("noise_std").is_null()) cfg.penalty.noise_std = t.at("noise_std").get<double>();
  cfg.clip_c = t.at("clip_c").get<double>();
  cfg.adam_beta1 = t.at("adam_beta1").get<double>();
  cfg.adam_beta2 = t.at("adam_beta2").get<double>();
  cfg.adam_eps = t.at("adam_eps").get<double>();
  cfg.latent_dim = t.at("latent_dim").get<std::size_t>();
  cfg.hidden_width = t.at("hidden_width").get<std::size_t>();
  cfg.init_weight_std = t.at("init_weight_std").get<double>();
  cfg.log_every = t.at("log_every").get<long>();
  return cfg;
}

std::string scatter_svg(const synth::TaskSpec& task, const models::GeneratorParams& gen,
                        std::uint64_t master_seed, long step, std::size_t points,
                        const std::string& variant) {
  Rng rng(derive_seed(master_seed, "plot", static_cast<std::uint64_t>(step)));
  Tensor data = synth::sample_data(task, points, rng);
  Tensor z = rng.normal_tensor({points, gen.latent_dim()}, 0.0, gen.latent_sigma);
  Tensor model = models::generator_forward(gen, z);

  svg::PointSeries data_series, model_series;
  data_series.color = kDataColor;
  data_series.label = "data";
  model_series.color = kModelColor;
  model_series.label = "model";
  for (std::size_t i = 0; i < points; ++i) {
    data_series.x.push_back(data.at(i, 0));
    data_series.y.push_back(data.at(i, 1));
    model_series.x.push_back(model.at(i, 0));
    model_series.y.push_back(model.at(i, 1));
  }
  return svg::scatter_plot({data_series, model_series},
                           variant + ", step " + std::to_string(step));
}

std::string trace_svg(const trainer::TrainingTrace& trace, const std::string& variant) {
  svg::LineSeries series;
  series.color = kDataColor;
  series.label = "frechet_sq";
  for (const trainer::TraceRecord& r : trace.records) {
    series.x.push_back(static_cast<double>(r.step));
    series.y.push_back(r.frechet_sq);
  }
  return svg::line_plot({series}, variant + ": distance over training",
                        "generator step", "squared Frechet distance");
}

void run_training_command(const json& manifest) {
  const json& cfg_json = manifest.at("config");
  const std::string command = manifest.at("command").get<std::string>();
  const std::string out_dir = manifest.at("out_dir").get<std::string>();
  const std::uint64_t master_seed = manifest.at("master_seed").get<std::uint64_t>();

  const json& task_json = cfg_json.at("task");
  synth::TaskSpec task = synth::make_task(
      derive_seed(master_seed, "task"), task_json.at("d").get<std::size_t>(),
      task_json.at("sigma").get<double>(), task_json.at("m").get<std::size_t>());

  trainer::TrainConfig base = train_config_from(cfg_json.at("train"));
  base.snapshot_steps = cfg_json.at("snapshot_steps").get<std::vector<long>>();
  const std::size_t plot_points = cfg_json.at("plot_points").get<std::size_t>();

  if (command == "parallel") {
    base.init.mode = trainer::InitSpec::Mode::kParallel;
    base.init.offset =
        synth::perpendicular_offset(task, cfg_json.at("parallel_offset").get<double>());
  }

  for (const auto& variant_json : cfg_json.at("variants")) {
    const std::string name = variant_json.get<std::string>();
    trainer::TrainConfig cfg = base;
    cfg.variant = *losses::variant_from_name(name);
    cfg.seed = derive_seed(master_seed, "train." + name);

    const std::string dir = out_dir + "/" + name;
    io::ensure_directory(dir);
    trainer::TrainingTrace trace = trainer::train_run(task, cfg);
    io::write_file(dir + "/trace.csv", trace.to_csv());
    io::write_file(dir + "/trace.svg", trace_svg(trace, name));
    for (const trainer::Snapshot& snap : trace.snapshots) {
      io::write_file(dir + "/snap_" + std::to_string(snap.step) + ".json",
                     models::params_json(snap.gen, snap.disc));
      if (task.d == 2) {
        io::write_file(dir + "/scatter_step_" + std::to_string(snap.step) + ".svg",
                       scatter_svg(task, snap.gen, master_seed, snap.step, plot_points,
                                   name));
      }
    }
  }
  io::write_file(out_dir + "/task.json", task.to_json());
}

void run_figure2_command(const json& manifest) {
  const json& cfg = manifest.at("config").at("figure2");
  const std::string out_dir = manifest.at("out_dir").get<std::string>();
  const std::uint64_t master_seed = manifest.at("master_seed").get<std::uint64_t>();

  analysis::TwoGaussianSetup setup;
  setup.mu1 = cfg.at("mu1").get<double>();
  setup.mu2 = cfg.at("mu2").get<double>();
  setup.s1 = cfg.at("s1").get<double>();
  setup.s2 = cfg.at("s2").get<double>();
  const long n = cfg.at("grid_n").get<long>();
  const double lo = cfg.at("x_min").get<double>(), hi = cfg.at("x_max").get<double>();
  for (long i = 0; i < n; ++i) {
    setup.grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  }

  auto emit = [&](const analysis::ScanTable& table, const std::string& stem,
                  const std::string& title) {
    io::write_file(out_dir + "/" + stem + ".csv", table.to_csv());
    svg::LineSeries d_series, mm_series, ns_series;
    d_series.color = "#2ca02c";
    d_series.label = "D(x)";
    mm_series.color = kDataColor;
    mm_series.label = "minimax loss log(1-D)";
    ns_series.color = kModelColor;
    ns_series.label = "non-saturating loss -log D";
    for (const analysis::ScanRow& row : table.rows) {
      d_series.x.push_back(row.x);
      d_series.y.push_back(row.d);
      mm_series.x.push_back(row.x);
      mm_series.y.push_back(row.loss_mm);
      ns_series.x.push_back(row.x);
      ns_series.y.push_back(row.loss_ns);
    }
    io::write_file(out_dir + "/" + stem + ".svg",
                   svg::line_plot({d_series, mm_series, ns_series}, title, "x", ""));
  };

  emit(analysis::landscape_scan(setup), "figure2_closed_form",
       "generator losses against the optimal discriminator");
  models::DiscriminatorParams disc = analysis::train_pointwise_disc(
      setup, cfg.at("train_steps").get<long>(), cfg.at("train_lr").get<double>(),
      derive_seed(master_seed, "figure2"));
  emit(analysis::landscape_scan(setup, disc), "figure2_trained",
       "generator losses against a trained discriminator");
}

void run_sweep_command(const json& manifest) {
  const json& cfg = manifest.at("config");
  const json& sw = cfg.at("sweep");
  const std::string out_dir = manifest.at("out_dir").get<std::string>();

  sweep::SweepSpec spec;
  spec.axis = axis_from_name(sw.at("axis").get<std::string>(), "config.sweep.axis");
  spec.axis_values = sw.at("values").get<std::vector<double>>();
  for (const auto& v : cfg.at("variants")) {
    spec.variants.push_back(*losses::variant_from_name(v.get<std::string>()));
  }
  spec.n_seeds = sw.at("n_seeds").get<std::size_t>();
  spec.resample_task = sw.at("resample_task").get<bool>();
  spec.workers = sw.at("workers").get<int>();
  spec.train = train_config_from(cfg.at("train"));
  spec.task_d = cfg.at("task").at("d").get<std::size_t>();
  spec.task_sigma = cfg.at("task").at("sigma").get<double>();
  spec.task_m = cfg.at("task").at("m").get<std::size_t>();
  spec.master_seed = manifest.at("master_seed").get<std::uint64_t>();

  sweep::SweepResult result = sweep::run_sweep(spec);

  // The random-init reference enters the summary as pseudo-variant
  // "baseline" and the box figures as a dashed line.
  std::string summary = result.summary_csv();
  for (double value : spec.axis_values) {
    sweep::CellStats base = sweep::random_baseline(spec, value);
    summary += "baseline," + io::format_double(value) + "," + std::to_string(base.n) +
               ",0," + io::format_double(base.mean) + "," + io::format_double(base.median) +
               "," + io::format_double(base.q25) + "," + io::format_double(base.q75) + "," +
               io::format_double(base.min) + "," + io::format_double(base.max) + "\n";

    std::vector<svg::Box> boxes;
    for (std::size_t vi = 0; vi < spec.variants.size(); ++vi) {
      const sweep::CellStats& c = result.cell(spec.variants[vi], value);
      svg::Box box;
      box.q25 = c.q25;
      box.median = c.median;
      box.q75 = c.q75;
      box.lo = c.min;
      box.hi = c.max;
      box.label = losses::variant_name(spec.variants[vi]);
      box.color = kVariantColors[vi % kVariantColors.size()];
      boxes.push_back(box);
    }
    io::write_file(out_dir + "/sweep_box_" + io::format_double(value) + ".svg",
                   svg::box_plot(boxes,
                                 std::string(sweep::axis_name(spec.axis)) + " = " +
                                     io::format_double(value),
                                 base.median, "random init median"));
  }
  io::write_file(out_dir + "/sweep.csv", result.runs_csv());
  io::write_file(out_dir + "/sweep_summary.csv", summary);
}

}  // namespace

std::string resolve_manifest(const std::string& command, const std::string& config_json,
                             const std::string& out_dir) {
  if (!known_command(command)) {
    throw ConfigError("unknown command '" + command +
                      "' (expected exp1, exp2, parallel, figure2 or sweep)");
  }
  json in;
  if (config_json.empty()) {
    in = json::object();
  } else {
    try {
      in = json::parse(config_json);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }
  if (out_dir.empty()) throw ConfigError("out_dir: must not be empty");

  check_object(in, "config",
               {"task", "train", "variants", "seed", "snapshot_steps", "plot_points",
                "parallel_offset", "figure2", "sweep"});

  json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersion;
  manifest["out_dir"] = out_dir;
  manifest["master_seed"] = get_integer(in, "config", "seed", 0);

  json cfg;
  if (command == "figure2") {
    cfg["figure2"] = resolve_figure2(in.value("figure2", json::object()), "config.figure2");
  } else {
    TrainDefaults dflt;
    std::size_t default_d = 2;
    if (command == "exp2") {
      dflt.total_g_steps = 10000;
      dflt.latent_dim = 3;
    } else if (command == "parallel") {
      dflt.total_g_steps = 12500;
    }
    cfg["task"] = resolve_task(in.value("task", json::object()), "config.task", default_d);
    cfg["train"] = resolve_train(in.value("train", json::object()), "config.train", dflt);

    const long d = cfg["task"]["d"].get<long>();
    const long g = cfg["train"]["latent_dim"].get<long>();
    if (command == "exp1" && g != 1) {
      fail("config.train.latent_dim", "exp1 uses a 1-D generator (use exp2 for g > 1)");
    }
    if (command == "exp2" && g <= 1) {
      fail("config.train.latent_dim", "exp2 requires an overcomplete generator (latent_dim > 1)");
    }
    if (command == "parallel") {
      if (d < 2) fail("config.task.d", "parallel requires d >= 2");
      if (g != 1) fail("config.train.latent_dim", "parallel uses a 1-D generator");
      double offset = get_number(in, "config", "parallel_offset", 0.5);
      if (offset == 0.0) {
        fail("config.parallel_offset",
             "must be non-zero: a zero offset makes the manifolds coincide");
      }
      cfg["parallel_offset"] = offset;
    }

    if (command == "sweep") {
      cfg["variants"] = resolve_variants(
          in.value("variants", json()), "config.variants",
          {"ns", "gan-gp", "dragan-ns", "wgan", "wgan-gp"});
      cfg["sweep"] = resolve_sweep(in.value("sweep", json::object()), "config.sweep");
    } else {
      cfg["variants"] = resolve_variants(in.value("variants", json()), "config.variants",
                                         {"ns"});
      cfg["snapshot_steps"] =
          resolve_snapshots(in.value("snapshot_steps", json()), "config.snapshot_steps",
                            command, cfg["train"]["total_g_steps"].get<long>());
      long plot_points = get_integer(in, "config", "plot_points", 256);
      if (plot_points < 1) fail("config.plot_points", "must be >= 1");
      cfg["plot_points"] = plot_points;
    }
  }
  manifest["config"] = cfg;
  return manifest.dump(2) + "\n";
}

void run_manifest_json(const std::string& manifest_json) {
  json manifest;
  try {
    manifest = json::parse(manifest_json);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest: invalid JSON: ") + e.what());
  }
  for (const char* key : {"command", "version", "out_dir", "master_seed", "config"}) {
    if (!manifest.contains(key)) {
      throw ConfigError(std::string("manifest.") + key + ": missing field");
    }
  }
  const std::string command = manifest.at("command").get<std::string>();
  if (!known_command(command)) {
    throw ConfigError("manifest.command: unknown command '" + command + "'");
  }
  const std::string out_dir = manifest.at("out_dir").get<std::string>();
  io::ensure_directory(out_dir);
  // Manifest lands on disk before any run starts.
  io::write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");

  if (command == "figure2") {
    run_figure2_command(manifest);
  } else if (command == "sweep") {
    run_sweep_command(manifest);
  } else {
    run_training_command(manifest);
  }
}

void run_manifest_file(const std::string& path, const std::string& out_dir_override) {
  json manifest;
  try {
    manifest = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest: invalid JSON: ") + e.what());
  }
  if (!out_dir_override.empty()) manifest["out_dir"] = out_dir_override;
  run_manifest_json(manifest.dump(2) + "\n");
}

}  // namespace ganlab::experiments
