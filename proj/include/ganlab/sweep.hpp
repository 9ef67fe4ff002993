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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ganlab/trainer.hpp"

namespace ganlab::sweep {

enum class Axis { kLearningRate, kInputDim, kDStepsPerG };

const char* axis_name(Axis axis);

struct SweepSpec {
  Axis axis = Axis::kLearningRate;
  std::vector<double> axis_values;
  std::vector<losses::GanVariant> variants;
  std::size_t n_seeds = 50;
  // Templates; the axis value and derived seeds overwrite the relevant
  // fields per cell.
  trainer::TrainConfig train;
  std::size_t task_d = 2;
  double task_sigma = 1.0;
  std::size_t task_m = 0;
  std::uint64_t master_seed = 0;
  // Fresh task per replicate (default) or one task per axis value.
  bool resample_task = true;
  int workers = 1;
};

struct RunResult {
  losses::GanVariant variant{};
  double axis_value = 0.0;
  std::size_t replicate = 0;
  double final_frechet_sq = 0.0;
  bool failed = false;  // non-finite loss; excluded from the stats
};

struct CellStats {
  losses::GanVariant variant{};
  double axis_value = 0.0;
  std::size_t n = 0;
  std::size_t failed = 0;
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SweepResult {
  std::vector<RunResult> runs;     // one per (variant, value, replicate)
  std::vector<CellStats> cells;    // aggregated per (variant, value)

  std::string runs_csv() const;     // variant,axis,axis_value,seed,final_frechet_sq,failed
  std::string summary_csv() const;  // per-cell aggregates
  const CellStats& cell(losses::GanVariant v, double axis_value) const;
};

// Linear-interpolation quantile on sorted data (the common "type 7" rule).
double quantile_sorted(const std::vector<double>& sorted, double q);

// Seed for one cell replicate; depends only on (master, variant, value, rep)
// so any cell reproduces in isolation.
std::uint64_t cell_seed(std::uint64_t master_seed, losses::GanVariant variant,
                        double axis_value, std::size_t replicate);

// Executes every (variant, axis value, replicate) run, up to `workers` at a
// time. Results are independent of scheduling. Runs that abort with a
// non-finite loss are recorded as failed and excluded from the aggregates.
SweepResult run_sweep(const SweepSpec& spec);

// Squared Frechet distance of untrained, randomly initialized generators
// against the task, aggregated the same way as a sweep cell.
CellStats random_baseline(const SweepSpec& spec, double axis_value);

// Convenience wrapper for the discriminator-update-count comparison.
SweepResult disc_update_sweep(SweepSpec spec, std::vector<double> update_counts = {
                                                  1, 5, 10, 100});

}  // namespace ganlab::sweep
