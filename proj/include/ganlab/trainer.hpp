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
#include <stdexcept>
#include <string>
#include <vector>

#include "ganlab/losses.hpp"
#include "ganlab/models.hpp"
#include "ganlab/synth.hpp"

namespace ganlab::trainer {

// Thrown when a loss or parameter stops being finite mid-run.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitSpec {
  enum class Mode { kRandom, kParallel };
  Mode mode = Mode::kRandom;
  Tensor offset;  // [1, d]; parallel mode only
};

struct TrainConfig {
  losses::GanVariant variant = losses::GanVariant::kNonSaturating;
  double lr_d = 1e-3;
  double lr_g = 1e-3;
  int d_steps_per_g = 5;
  long total_g_steps = 20000;  // counted in generator updates
  std::size_t batch_size = 64;
  losses::PenaltyConfig penalty;
  double clip_c = 0.01;  // kWganClip only
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.9;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  InitSpec init;
  std::size_t latent_dim = 1;
  std::size_t hidden_width = 32;
  double init_weight_std = 0.1;
  long log_every = 100;
  std::vector<long> snapshot_steps;
};

struct TraceRecord {
  long step = 0;
  double frechet_sq = 0.0;
  double loss_g = 0.0;
  double loss_d = 0.0;
};

struct Snapshot {
  long step = 0;
  models::GeneratorParams gen;
  models::DiscriminatorParams disc;
};

struct TrainingTrace {
  std::vector<TraceRecord> records;
  std::vector<Snapshot> snapshots;

  double final_frechet_sq() const { return records.back().frechet_sq; }
  std::string to_csv() const;  // columns: step,frechet_sq,loss_g,loss_d
};

// Adam with bias correction. m/v slots are lazily sized on first use.
struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  long t = 0;
};

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
               AdamState& state, double lr, double beta1, double beta2, double eps);

// The alternating loop: per generator step, d_steps_per_g discriminator
// updates on fresh batches (weight clipping after each when the variant
// asks for it), then one generator update. The trace records the squared
// Frechet distance between the true moments and the generator moments at
// step 0, every log_every steps, and the final step. Deterministic in
// (task, cfg). Throws NumericError if a loss leaves the finite range.
TrainingTrace train_run(const synth::TaskSpec& task, const TrainConfig& cfg);

}  // namespace ganlab::trainer
