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

#include "ganlab/models.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/tensor.hpp"

namespace ganlab::synth {

// Ground truth of a synthetic task: data lives on the affine line
// {t w_r + b_r} with a Gaussian latent of std sigma. m > 0 pins a fixed
// dataset of m examples; m = 0 streams fresh samples every batch.
struct TaskSpec {
  Tensor w_r;  // [1, d]
  Tensor b_r;  // [1, d]
  double sigma = 1.0;
  std::size_t d = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;  // seed the task was drawn from; keys the fixed dataset

  std::string to_json() const;
  static TaskSpec from_json(const std::string& text);
};

TaskSpec make_task(std::uint64_t seed, std::size_t d, double sigma, std::size_t m = 0);

// x = z w_r + b_r with z ~ N(0, sigma^2); rows of the result lie exactly on
// the task line. In fixed-dataset mode rows are drawn from the m examples.
Tensor sample_data(const TaskSpec& task, std::size_t n, Rng& rng);

models::GaussianMoments true_moments(const TaskSpec& task);

// Symmetric PSD square root via eigendecomposition; eigenvalues below
// 1e-10 * max eigenvalue are clamped to zero (rank-deficient covariances
// produce exact zeros up to roundoff). Throws if the input asymmetry
// exceeds 1e-10 relative to its scale.
Tensor psd_sqrt(const Tensor& m);

// Squared Frechet distance between two Gaussians:
//   ||mu_p - mu_q||^2 + tr(cov_p + cov_q - 2 (cov_p^1/2 cov_q cov_p^1/2)^1/2)
// clamped to be non-negative.
double frechet_squared(const models::GaussianMoments& p,
                       const models::GaussianMoments& q);

// Generator whose manifold is the task line translated by `offset`
// (w = w_r, b = b_r + offset, g = 1, latent std = task sigma).
models::GeneratorParams parallel_init(const TaskSpec& task, const Tensor& offset);

// Unit vector orthogonal to w_r, scaled by `norm`; deterministic.
Tensor perpendicular_offset(const TaskSpec& task, double norm);

}  // namespace ganlab::synth
