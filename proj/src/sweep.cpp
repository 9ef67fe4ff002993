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

#include "ganlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <cmath>
#include <thread>

#include "ganlab/io.hpp"

namespace ganlab::sweep {

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::kLearningRate: return "learning_rate";
    case Axis::kInputDim: return "input_dim";
    case Axis::kDStepsPerG: return "d_steps_per_g";
  }
  return "?";
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  if (sorted.size() == 1) return sorted[0];
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo >= sorted.size() - 1) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::uint64_t cell_seed(std::uint64_t master_seed, losses::GanVariant variant,
                        double axis_value, std::size_t replicate) {
  std::uint64_t s = derive_seed(master_seed, "sweep-cell");
  s = derive_seed(s, losses::variant_name(variant));
  s ^= std::bit_cast<std::uint64_t>(axis_value);
  s = derive_seed(s, "rep", replicate);
  return s;
}

namespace {

struct Cell {
  losses::GanVariant variant;
  double value;
  std::size_t replicate;
};

void apply_axis(Axis axis, double value, trainer::TrainConfig& cfg, std::size_t& d) {
  switch (axis) {
    case Axis::kLearningRate:
      cfg.lr_d = value;
      cfg.lr_g = value;
      break;
    case Axis::kInputDim:
      d = static_cast<std::size_t>(value);
      break;
    case Axis::kDStepsPerG:
      cfg.d_steps_per_g = static_cast<int>(value);
      break;
  }
}

RunResult execute_cell(const SweepSpec& spec, const Cell& cell) {
  trainer::TrainConfig cfg = spec.train;
  std::size_t d = spec.task_d;
  apply_axis(spec.axis, cell.value, cfg, d);
  cfg.variant = cell.variant;
  cfg.seed = cell_seed(spec.master_seed, cell.variant, cell.value, cell.replicate);

  // Task seed: per replicate when resampling, per cell value otherwise.
  std::uint64_t task_seed = spec.resample_task
                                ? derive_seed(cfg.seed, "sweep-task")
                                : derive_seed(spec.master_seed, "sweep-task-fixed",
                                              std::bit_cast<std::uint64_t>(cell.value));
  synth::TaskSpec task = synth::make_task(task_seed, d, spec.task_sigma, spec.task_m);

  RunResult result;
  result.variant = cell.variant;
  result.axis_value = cell.value;
  result.replicate = cell.replicate;
  try {
    trainer::TrainingTrace trace = trainer::train_run(task, cfg);
    result.final_frechet_sq = trace.final_frechet_sq();
  } catch (const trainer::NumericError&) {
    result.failed = true;
    result.final_frechet_sq = std::nan("");
  }
  return result;
}

CellStats aggregate(losses::GanVariant variant, double value,
                    const std::vector<double>& finals, std::size_t failed) {
  CellStats stats;
  stats.variant = variant;
  stats.axis_value = value;
  stats.n = finals.size();
  stats.failed = failed;
  if (finals.empty()) {
    stats.mean = stats.median = stats.q25 = stats.q75 = stats.min = stats.max =
        std::nan("");
    return stats;
  }
  std::vector<double> sorted = finals;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  stats.mean = sum / static_cast<double>(sorted.size());
  stats.median = quantile_sorted(sorted, 0.5);
  stats.q25 = quantile_sorted(sorted, 0.25);
  stats.q75 = quantile_sorted(sorted, 0.75);
  stats.min = sorted.front();
  stats.max = sorted.back();
  return stats;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.axis_values.empty()) {
    throw std::invalid_argument("run_sweep: axis_values must be non-empty");
  }
  if (spec.variants.empty()) {
    throw std::invalid_argument("run_sweep: variants must be non-empty");
  }
  if (spec.n_seeds < 1) {
    throw std::invalid_argument("run_sweep: n_seeds must be >= 1");
  }

  std::vector<Cell> cells;
  for (losses::GanVariant v : spec.variants) {
    for (double value : spec.axis_values) {
      for (std::size_t rep = 0; rep < spec.n_seeds; ++rep) {
        cells.push_back({v, value, rep});
      }
    }
  }

  SweepResult result;
  result.runs.resize(cells.size());
  const int workers = std::max(1, spec.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      result.runs[i] = execute_cell(spec, cells[i]);
    }
  } else {
    // Each cell owns its slot, so scheduling order cannot affect output.
    // Non-numeric exceptions (bad specs) must not escape a worker thread;
    // the first one is rethrown after the join.
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::string first_error;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        try {
          result.runs[i] = execute_cell(spec, cells[i]);
        } catch (const std::exception& e) {
          std::scoped_lock lock(error_mutex);
          if (first_error.empty()) first_error = e.what();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (!first_error.empty()) throw std::invalid_argument(first_error);
  }

  for (losses::GanVariant v : spec.variants) {
    for (double value : spec.axis_values) {
      std::vector<double> finals;
      std::size_t failed = 0;
      for (const RunResult& r : result.runs) {
        if (r.variant != v || r.axis_value != value) continue;
        if (r.failed) {
          ++failed;
        } else {
          finals.push_back(r.final_frechet_sq);
        }
      }
      result.cells.push_back(aggregate(v, value, finals, failed));
    }
  }
  return result;
}

CellStats random_baseline(const SweepSpec& spec, double axis_value) {
  trainer::TrainConfig cfg = spec.train;
  std::size_t d = spec.task_d;
  apply_axis(spec.axis, axis_value, cfg, d);

  std::vector<double> finals;
  for (std::size_t rep = 0; rep < spec.n_seeds; ++rep) {
    std::uint64_t seed = derive_seed(spec.master_seed, "baseline", rep);
    std::uint64_t task_seed =
        spec.resample_task ? derive_seed(seed, "sweep-task")
                           : derive_seed(spec.master_seed, "sweep-task-fixed",
                                         std::bit_cast<std::uint64_t>(axis_value));
    synth::TaskSpec task = synth::make_task(task_seed, d, spec.task_sigma, spec.task_m);
    models::ModelDims dims{cfg.latent_dim, task.d, cfg.hidden_width};
    models::InitResult init = models::init_params(derive_seed(seed, "init"), dims,
                                                  cfg.init_weight_std, task.sigma);
    finals.push_back(
        synth::frechet_squared(synth::true_moments(task),
                               models::generator_moments(init.gen)));
  }
  CellStats stats = aggregate(spec.train.variant, axis_value, finals, 0);
  return stats;
}

SweepResult disc_update_sweep(SweepSpec spec, std::vector<double> update_counts) {
  spec.axis = Axis::kDStepsPerG;
  spec.axis_values = std::move(update_counts);
  return run_sweep(spec);
}

std::string SweepResult::runs_csv() const {
  std::string out = "variant,axis_value,seed,final_frechet_sq,failed\n";
  for (const RunResult& r : runs) {
    out += losses::variant_name(r.variant);
    out += ',';
    out += io::format_double(r.axis_value);
    out += ',';
    out += std::to_string(r.replicate);
    out += ',';
    out += io::format_double(r.final_frechet_sq);
    out += ',';
    out += r.failed ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string SweepResult::summary_csv() const {
  std::string out = "variant,axis_value,n,failed,mean,median,q25,q75,min,max\n";
  for (const CellStats& c : cells) {
    out += losses::variant_name(c.variant);
    out += ',';
    out += io::format_double(c.axis_value);
    out += ',';
    out += std::to_string(c.n);
    out += ',';
    out += std::to_string(c.failed);
    out += ',';
    out += io::format_double(c.mean);
    out += ',';
    out += io::format_double(c.median);
    out += ',';
    out += io::format_double(c.q25);
    out += ',';
    out += io::format_double(c.q75);
    out += ',';
    out += io::format_double(c.min);
    out += ',';
    out += io::format_double(c.max);
    out += '\n';
  }
  return out;
}

const CellStats& SweepResult::cell(losses::GanVariant v, double axis_value) const {
  for (const CellStats& c : cells) {
    if (c.variant == v && c.axis_value == axis_value) return c;
  }
  throw std::invalid_argument("SweepResult::cell: no such cell");
}

}  // namespace ganlab::sweep
