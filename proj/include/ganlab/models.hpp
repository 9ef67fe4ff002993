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

#include "ganlab/tape.hpp"
#include "ganlab/tensor.hpp"

namespace ganlab::models {

// Linear generator x = z W + b mapping a g-dimensional Gaussian latent into
// d-dimensional space. g = 1 is the one-dimensional-manifold setting; g > 1
// the overcomplete one (g may exceed d: the picture with 3 latent variables
// in 2-D space is a deliberate configuration, not an error).
struct GeneratorParams {
  Tensor w;  // [g, d]
  Tensor b;  // [1, d]
  double latent_sigma = 1.0;

  std::size_t latent_dim() const { return w.rows(); }
  std::size_t data_dim() const { return w.cols(); }
};

// Single-hidden-layer ReLU discriminator. Logit path:
//   logit(x) = relu(x W1 + b1) w2 + b2.
struct DiscriminatorParams {
  Tensor w1;  // [d, h]
  Tensor b1;  // [1, h]
  Tensor w2;  // [h, 1]
  Tensor b2;  // [1, 1]

  std::size_t data_dim() const { return w1.rows(); }
  std::size_t hidden_width() const { return w1.cols(); }
};

// Mean/covariance pair of a Gaussian; the currency of the distance metric.
struct GaussianMoments {
  Tensor mu;   // [d]
  Tensor cov;  // [d, d] symmetric PSD
};

struct GeneratorNodes {
  ad::NodeId w = ad::kNoNode;
  ad::NodeId b = ad::kNoNode;
};

struct DiscriminatorNodes {
  ad::NodeId w1 = ad::kNoNode;
  ad::NodeId b1 = ad::kNoNode;
  ad::NodeId w2 = ad::kNoNode;
  ad::NodeId b2 = ad::kNoNode;
};

GeneratorNodes bind(ad::Tape& tape, const GeneratorParams& params);
DiscriminatorNodes bind(ad::Tape& tape, const DiscriminatorParams& params);

// Graph builders; z is [m,g], x is [m,d].
ad::NodeId generator_forward(ad::Tape& tape, const GeneratorNodes& gen, ad::NodeId z);
ad::NodeId discriminator_logit(ad::Tape& tape, const DiscriminatorNodes& disc,
                               ad::NodeId x);
ad::NodeId discriminator_prob(ad::Tape& tape, const DiscriminatorNodes& disc,
                              ad::NodeId x);

// Eager variants for code paths that do not need gradients.
Tensor generator_forward(const GeneratorParams& gen, const Tensor& z);
Tensor discriminator_logit(const DiscriminatorParams& disc, const Tensor& x);
Tensor discriminator_prob(const DiscriminatorParams& disc, const Tensor& x);

// Closed-form moments of the generator distribution: mu = b, cov = s^2 W^T W.
GaussianMoments generator_moments(const GeneratorParams& gen);

struct ModelDims {
  std::size_t latent_dim = 1;   // g
  std::size_t data_dim = 2;     // d
  std::size_t hidden_width = 32;  // h
};

// Deterministic initialization: all weights iid N(0, weight_std^2), biases 0.
struct InitResult {
  GeneratorParams gen;
  DiscriminatorParams disc;
};
InitResult init_params(std::uint64_t seed, const ModelDims& dims,
                       double weight_std = 0.1, double latent_sigma = 1.0);

// Flat {name -> nested array} JSON object for trace checkpoints.
std::string params_json(const GeneratorParams& gen, const DiscriminatorParams& disc);

}  // namespace ganlab::models
