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

#include <cmath>

#include <gtest/gtest.h>

#include "ganlab/trainer.hpp"

namespace ganlab {
namespace {

using trainer::AdamState;
using trainer::TrainConfig;
using trainer::TrainingTrace;

TEST(AdamStep, PaperDefaultsInConfig) {
  TrainConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.adam_beta1, 0.5);
  EXPECT_DOUBLE_EQ(cfg.adam_beta2, 0.9);
  EXPECT_EQ(cfg.d_steps_per_g, 5);
  EXPECT_EQ(cfg.batch_size, 64u);
  EXPECT_DOUBLE_EQ(cfg.penalty.lambda, 10.0);
}

TEST(AdamStep, ZeroGradientLeavesParamsUnchanged) {
  Tensor p = Tensor::matrix(2, 2, {1, 2, 3, 4});
  Tensor before = p;
  AdamState state;
  trainer::adam_step({&p}, {Tensor::zeros({2, 2})}, state, 0.1, 0.5, 0.9, 1e-8);
  EXPECT_EQ(p.data, before.data);
  EXPECT_EQ(state.t, 1);
}

TEST(AdamStep, FirstStepMagnitudeIsLearningRate) {
  // Bias correction makes m_hat/sqrt(v_hat) = sign(g) on the first step.
  Tensor p = Tensor::vec({0.0, 0.0, 0.0});
  Tensor g = Tensor::vec({0.5, -3.0, 10.0});
  AdamState state;
  trainer::adam_step({&p}, {g}, state, 0.01, 0.5, 0.9, 1e-12);
  EXPECT_NEAR(p.data[0], -0.01, 1e-8);
  EXPECT_NEAR(p.data[1], 0.01, 1e-8);
  EXPECT_NEAR(p.data[2], -0.01, 1e-8);
}

TEST(AdamStep, ShapeMismatchThrows) {
  Tensor p = Tensor::vec({0.0});
  AdamState state;
  EXPECT_THROW(trainer::adam_step({&p}, {Tensor::zeros({2})}, state, 0.1, 0.5, 0.9, 1e-8),
               std::invalid_argument);
}

TrainConfig small_config(losses::GanVariant variant, long steps, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.variant = variant;
  cfg.total_g_steps = steps;
  cfg.batch_size = 16;
  cfg.hidden_width = 8;
  cfg.log_every = 10;
  cfg.seed = seed;
  return cfg;
}

TEST(TrainRun, ZeroStepsRecordsOnlyInitialDistance) {
  synth::TaskSpec task = synth::make_task(1, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kNonSaturating, 0, 3);
  cfg.snapshot_steps = {0};
  TrainingTrace trace = trainer::train_run(task, cfg);
  ASSERT_EQ(trace.records.size(), 1u);
  EXPECT_EQ(trace.records[0].step, 0);
  EXPECT_GT(trace.records[0].frechet_sq, 0.0);
  // Parameters match a fresh init bit for bit.
  models::InitResult init =
      models::init_params(derive_seed(cfg.seed, "init"), {1, 2, 8}, 0.1, task.sigma);
  ASSERT_EQ(trace.snapshots.size(), 1u);
  EXPECT_EQ(trace.snapshots[0].gen.w.data, init.gen.w.data);
  EXPECT_EQ(trace.snapshots[0].disc.w1.data, init.disc.w1.data);
}

TEST(TrainRun, DeterministicInSeedAndConfig) {
  synth::TaskSpec task = synth::make_task(2, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kGanGp, 30, 17);
  TrainingTrace a = trainer::train_run(task, cfg);
  TrainingTrace b = trainer::train_run(task, cfg);
  EXPECT_EQ(a.to_csv(), b.to_csv());
}

TEST(TrainRun, FrozenGeneratorKeepsDistanceConstant) {
  synth::TaskSpec task = synth::make_task(3, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kNonSaturating, 40, 5);
  cfg.lr_g = 0.0;
  TrainingTrace trace = trainer::train_run(task, cfg);
  for (const trainer::TraceRecord& r : trace.records) {
    EXPECT_EQ(r.frechet_sq, trace.records[0].frechet_sq);
  }
}

TEST(TrainRun, LoggingCadenceDoesNotPerturbTrajectory) {
  synth::TaskSpec task = synth::make_task(4, 2, 1.0);
  TrainConfig coarse = small_config(losses::GanVariant::kNonSaturating, 40, 11);
  coarse.log_every = 20;
  TrainConfig fine = coarse;
  fine.log_every = 10;
  TrainingTrace a = trainer::train_run(task, coarse);
  TrainingTrace b = trainer::train_run(task, fine);
  for (const trainer::TraceRecord& ra : a.records) {
    bool found = false;
    for (const trainer::TraceRecord& rb : b.records) {
      if (rb.step == ra.step) {
        EXPECT_EQ(rb.frechet_sq, ra.frechet_sq) << "step " << ra.step;
        EXPECT_EQ(rb.loss_d, ra.loss_d);
        EXPECT_EQ(rb.loss_g, ra.loss_g);
        found = true;
      }
    }
    EXPECT_TRUE(found) << "step " << ra.step;
  }
}

TEST(TrainRun, FrozenDiscriminatorStaysAtInit) {
  synth::TaskSpec task = synth::make_task(5, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kNonSaturating, 20, 7);
  cfg.lr_d = 0.0;
  cfg.snapshot_steps = {0, 20};
  TrainingTrace trace = trainer::train_run(task, cfg);
  ASSERT_EQ(trace.snapshots.size(), 2u);
  EXPECT_EQ(trace.snapshots[0].disc.w1.data, trace.snapshots[1].disc.w1.data);
  EXPECT_EQ(trace.snapshots[0].disc.w2.data, trace.snapshots[1].disc.w2.data);
  // The generator did move.
  EXPECT_NE(trace.snapshots[0].gen.w.data, trace.snapshots[1].gen.w.data);
}

TEST(TrainRun, WeightClippingKeepsParamsInBox) {
  synth::TaskSpec task = synth::make_task(6, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kWganClip, 25, 13);
  cfg.clip_c = 0.01;
  cfg.snapshot_steps = {5, 25};
  TrainingTrace trace = trainer::train_run(task, cfg);
  for (const trainer::Snapshot& snap : trace.snapshots) {
    for (const Tensor* t :
         {&snap.disc.w1, &snap.disc.b1, &snap.disc.w2, &snap.disc.b2}) {
      for (double v : t->data) {
        EXPECT_LE(std::abs(v), 0.01 + 1e-15);
      }
    }
  }
}

TEST(TrainRun, DivergenceAbortsWithNumericError) {
  synth::TaskSpec task = synth::make_task(7, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kWganGp, 50, 19);
  cfg.lr_d = 1e100;
  cfg.lr_g = 1e100;
  EXPECT_THROW(trainer::train_run(task, cfg), trainer::NumericError);
}

TEST(TrainRun, TraceCsvShape) {
  synth::TaskSpec task = synth::make_task(8, 2, 1.0);
  TrainConfig cfg = small_config(losses::GanVariant::kNonSaturating, 25, 23);
  cfg.log_every = 10;
  TrainingTrace trace = trainer::train_run(task, cfg);
  // Records at 0, 10, 20 and the final step 25.
  ASSERT_EQ(trace.records.size(), 4u);
  EXPECT_EQ(trace.records.back().step, 25);
  std::string csv = trace.to_csv();
  EXPECT_EQ(csv.rfind("step,frechet_sq,loss_g,loss_d\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

// Short parallel-lines run: the distance should shrink for at least one
// seed even at a fraction of the full step budget.
TEST(TrainRun, ParallelLinesDistanceShrinks) {
  bool improved = false;
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    synth::TaskSpec task = synth::make_task(derive_seed(seed, "pl-task"), 2, 1.0);
    TrainConfig cfg;
    cfg.variant = losses::GanVariant::kNonSaturating;
    cfg.total_g_steps = 2000;
    cfg.log_every = 500;
    cfg.seed = seed;
    cfg.init.mode = trainer::InitSpec::Mode::kParallel;
    cfg.init.offset = synth::perpendicular_offset(task, 0.5);
    TrainingTrace trace = trainer::train_run(task, cfg);
    double initial = trace.records.front().frechet_sq;
    EXPECT_NEAR(initial, 0.25, 1e-9);
    if (trace.final_frechet_sq() < 0.5 * initial) improved = true;
  }
  EXPECT_TRUE(improved);
}

}  // namespace
}  // namespace ganlab
