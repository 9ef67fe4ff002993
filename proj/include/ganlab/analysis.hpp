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

#include "ganlab/models.hpp"

namespace ganlab::analysis {

// Two well-separated 1-D Gaussians: the first plays the data distribution,
// the second the model distribution.
struct TwoGaussianSetup {
  double mu1 = -2.0;
  double mu2 = 2.0;
  double s1 = 0.25;
  double s2 = 0.25;
  std::vector<double> grid;  // strictly increasing
};

TwoGaussianSetup default_setup();  // 401 points on [-4, 4]

// Bayes-optimal discriminator p_data(x) / (p_data(x) + p_model(x)).
double optimal_discriminator(const TwoGaussianSetup& setup, double x);

struct ScanRow {
  double x = 0.0;
  double d = 0.0;       // D(x)
  double loss_mm = 0.0; // log(1 - D)
  double loss_ns = 0.0; // -log D
  double dmm_dx = 0.0;
  double dns_dx = 0.0;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  std::string to_csv() const;  // columns: x,D,L_mm,L_ns,dLmm_dx,dLns_dx
};

// Evaluates both generator losses and their x-derivatives over the grid
// against the closed-form optimal discriminator.
ScanTable landscape_scan(const TwoGaussianSetup& setup);

// Same table for a concrete 1-input discriminator; derivatives are taken by
// differentiating through the network rather than from the densities.
ScanTable landscape_scan(const TwoGaussianSetup& setup,
                         const models::DiscriminatorParams& disc);

// Trains a d=1 discriminator on the binary task (samples of the first
// Gaussian labelled real, the second fake) until it approximates the
// closed form; used to recreate the trained-discriminator panel.
models::DiscriminatorParams train_pointwise_disc(const TwoGaussianSetup& setup,
                                                 long steps, double lr,
                                                 std::uint64_t seed);

}  // namespace ganlab::analysis
