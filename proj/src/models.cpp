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

#include "ganlab/models.hpp"

#include <json.hpp>

#include "ganlab/linalg.hpp"
#include "ganlab/rng.hpp"

namespace ganlab::models {

GeneratorNodes bind(ad::Tape& tape, const GeneratorParams& params) {
  GeneratorNodes nodes;
  nodes.w = tape.constant(params.w);
  nodes.b = tape.constant(params.b);
  return nodes;
}

DiscriminatorNodes bind(ad::Tape& tape, const DiscriminatorParams& params) {
  DiscriminatorNodes nodes;
  nodes.w1 = tape.constant(params.w1);
  nodes.b1 = tape.constant(params.b1);
  nodes.w2 = tape.constant(params.w2);
  nodes.b2 = tape.constant(params.b2);
  return nodes;
}

ad::NodeId generator_forward(ad::Tape& tape, const GeneratorNodes& gen, ad::NodeId z) {
  return tape.affine(z, gen.w, gen.b);
}

ad::NodeId discriminator_logit(ad::Tape& tape, const DiscriminatorNodes& disc,
                               ad::NodeId x) {
  ad::NodeId hidden = tape.relu(tape.affine(x, disc.w1, disc.b1));
  return tape.affine(hidden, disc.w2, disc.b2);
}

ad::NodeId discriminator_prob(ad::Tape& tape, const DiscriminatorNodes& disc,
                              ad::NodeId x) {
  return tape.logistic(discriminator_logit(tape, disc, x));
}

Tensor generator_forward(const GeneratorParams& gen, const Tensor& z) {
  if (z.cols() != gen.latent_dim()) {
    throw std::invalid_argument("generator_forward: latent dimension mismatch");
  }
  Tensor out = linalg::matmul(z, gen.w);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out.at(i, j) += gen.b.data[j];
  }
  return out;
}

Tensor discriminator_logit(const DiscriminatorParams& disc, const Tensor& x) {
  if (x.cols() != disc.data_dim()) {
    throw std::invalid_argument("discriminator_logit: data dimension mismatch");
  }
  ad::Tape tape;
  DiscriminatorNodes nodes = bind(tape, disc);
  return tape.value(discriminator_logit(tape, nodes, tape.constant(x)));
}

Tensor discriminator_prob(const DiscriminatorParams& disc, const Tensor& x) {
  ad::Tape tape;
  DiscriminatorNodes nodes = bind(tape, disc);
  return tape.value(discriminator_prob(tape, nodes, tape.constant(x)));
}

GaussianMoments generator_moments(const GeneratorParams& gen) {
  GaussianMoments m;
  m.mu = Tensor::vec(gen.b.data);
  m.cov = linalg::matmul(gen.w, gen.w, /*trans_a=*/true, /*trans_b=*/false);
  double s2 = gen.latent_sigma * gen.latent_sigma;
  for (double& v : m.cov.data) v *= s2;
  return m;
}

InitResult init_params(std::uint64_t seed, const ModelDims& dims, double weight_std,
                       double latent_sigma) {
  if (dims.latent_dim < 1 || dims.data_dim < 1 || dims.hidden_width < 1) {
    throw std::invalid_argument("init_params: inconsistent dimensions");
  }
  Rng gen_rng(derive_seed(seed, "init.gen"));
  Rng disc_rng(derive_seed(seed, "init.disc"));

  InitResult out;
  out.gen.w = gen_rng.normal_tensor({dims.latent_dim, dims.data_dim}, 0.0, weight_std);
  out.gen.b = Tensor::zeros({1, dims.data_dim});
  out.gen.latent_sigma = latent_sigma;

  out.disc.w1 = disc_rng.normal_tensor({dims.data_dim, dims.hidden_width}, 0.0, weight_std);
  out.disc.b1 = Tensor::zeros({1, dims.hidden_width});
  out.disc.w2 = disc_rng.normal_tensor({dims.hidden_width, 1}, 0.0, weight_std);
  out.disc.b2 = Tensor::zeros({1, 1});
  return out;
}

namespace {

nlohmann::json tensor_json(const Tensor& t) {
  if (t.rank() == 2) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < t.cols(); ++j) row.push_back(t.at(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  }
  nlohmann::json flat = nlohmann::json::array();
  for (double v : t.data) flat.push_back(v);
  return flat;
}

}  // namespace

std::string params_json(const GeneratorParams& gen, const DiscriminatorParams& disc) {
  nlohmann::json j;
  j["gen.w"] = tensor_json(gen.w);
  j["gen.b"] = tensor_json(gen.b);
  j["gen.latent_sigma"] = gen.latent_sigma;
  j["disc.w1"] = tensor_json(disc.w1);
  j["disc.b1"] = tensor_json(disc.b1);
  j["disc.w2"] = tensor_json(disc.w2);
  j["disc.b2"] = tensor_json(disc.b2);
  return j.dump(2);
}

}  // namespace ganlab::models
