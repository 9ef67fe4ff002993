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

#include "ganlab/synth.hpp"

#include <cmath>

#include <json.hpp>

#include "ganlab/linalg.hpp"

namespace ganlab::synth {

std::string TaskSpec::to_json() const {
  nlohmann::json j;
  j["w_r"] = w_r.data;
  j["b_r"] = b_r.data;
  j["sigma"] = sigma;
  j["d"] = d;
  j["m"] = m;
  j["seed"] = seed;
  return j.dump(2);
}

TaskSpec TaskSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TaskSpec task;
  task.d = j.at("d").get<std::size_t>();
  task.sigma = j.at("sigma").get<double>();
  task.m = j.at("m").get<std::size_t>();
  task.seed = j.value("seed", std::uint64_t{0});
  task.w_r = Tensor({1, task.d}, j.at("w_r").get<std::vector<double>>());
  task.b_r = Tensor({1, task.d}, j.at("b_r").get<std::vector<double>>());
  return task;
}

TaskSpec make_task(std::uint64_t seed, std::size_t d, double sigma, std::size_t m) {
  if (d < 1) throw std::invalid_argument("make_task: d must be >= 1");
  if (sigma <= 0.0) throw std::invalid_argument("make_task: sigma must be positive");
  Rng rng(derive_seed(seed, "task"));
  TaskSpec task;
  task.d = d;
  task.sigma = sigma;
  task.m = m;
  task.seed = seed;
  task.w_r = rng.normal_tensor({1, d}, 0.0, 1.0);
  task.b_r = rng.normal_tensor({1, d}, 0.0, 1.0);
  return task;
}

Tensor sample_data(const TaskSpec& task, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_data: n must be >= 1");
  Tensor out = Tensor::zeros({n, task.d});
  if (task.m > 0) {
    // Fixed dataset: the m examples are a deterministic function of the
    // task alone; minibatches resample rows from them.
    Rng data_rng(derive_seed(task.seed, "fixed-data"));
    Tensor latents = Tensor::zeros({task.m});
    for (double& z : latents.data) z = data_rng.normal(0.0, task.sigma);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t pick = rng.next_u64() % task.m;
      double z = latents.data[pick];
      for (std::size_t j = 0; j < task.d; ++j) {
        out.at(i, j) = z * task.w_r.data[j] + task.b_r.data[j];
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double z = rng.normal(0.0, task.sigma);
    for (std::size_t j = 0; j < task.d; ++j) {
      out.at(i, j) = z * task.w_r.data[j] + task.b_r.data[j];
    }
  }
  return out;
}

models::GaussianMoments true_moments(const TaskSpec& task) {
  models::GaussianMoments m;
  m.mu = Tensor::vec(task.b_r.data);
  m.cov = linalg::matmul(task.w_r, task.w_r, /*trans_a=*/true, /*trans_b=*/false);
  double s2 = task.sigma * task.sigma;
  for (double& v : m.cov.data) v *= s2;
  return m;
}

Tensor psd_sqrt(const Tensor& m) {
  if (m.rank() != 2 || m.rows() != m.cols()) {
    throw std::invalid_argument("psd_sqrt: input must be square");
  }
  double scale = linalg::frobenius_norm(m);
  double tol = 1e-10 * std::max(scale, 1.0);
  if (linalg::max_abs_asymmetry(m) > tol) {
    throw std::invalid_argument("psd_sqrt: input is not symmetric within tolerance");
  }
  // Work on the symmetrized matrix so roundoff asymmetry cannot leak in.
  Tensor sym = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      sym.at(i, j) = 0.5 * (m.at(i, j) + m.at(j, i));
    }
  }
  linalg::SymEigen eig = linalg::sym_eigen(sym);
  const std::size_t d = m.rows();
  double lambda_max = eig.values.numel() ? eig.values.data[0] : 0.0;
  // Clamp at the eigensolver's roundoff floor only. A coarser relative
  // clamp would discard genuine small eigenvalues of near-singular inputs;
  // the Frechet evaluator feeds this function matrices whose spectrum is
  // the square of the original one, where that loss is magnified.
  double clamp = 1e-14 * std::max(lambda_max, 0.0);
  Tensor out = Tensor::zeros({d, d});
  for (std::size_t k = 0; k < d; ++k) {
    double lam = eig.values.data[k];
    if (lam <= clamp) continue;
    double root = std::sqrt(lam);
    for (std::size_t i = 0; i < d; ++i) {
      double vi = eig.vectors.at(i, k) * root;
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        out.at(i, j) += vi * eig.vectors.at(j, k);
      }
    }
  }
  // Exact symmetry by construction of the accumulation; enforce anyway.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      double v = 0.5 * (out.at(i, j) + out.at(j, i));
      out.at(i, j) = v;
      out.at(j, i) = v;
    }
  }
  return out;
}

double frechet_squared(const models::GaussianMoments& p,
                       const models::GaussianMoments& q) {
  if (p.mu.numel() != q.mu.numel()) {
    throw std::invalid_argument("frechet_squared: dimension mismatch");
  }
  double mean_term = 0.0;
  for (std::size_t i = 0; i < p.mu.numel(); ++i) {
    double delta = p.mu.data[i] - q.mu.data[i];
    mean_term += delta * delta;
  }
  // tr(cov_p + cov_q - 2 sqrt(cov_p^1/2 cov_q cov_p^1/2)); the symmetric
  // product has the same trace root as cov_p cov_q but stays PSD.
  Tensor root_p = psd_sqrt(p.cov);
  Tensor inner = linalg::matmul(linalg::matmul(root_p, q.cov), root_p);
  Tensor cross = psd_sqrt(inner);
  double trace_term =
      linalg::trace(p.cov) + linalg::trace(q.cov) - 2.0 * linalg::trace(cross);
  double total = mean_term + trace_term;
  // Clamp away the eigensolver roundoff: anything below the floor (relative
  // to the input scale) is indistinguishable from zero, and identical
  // moments must give exactly zero.
  double mu_sq = 0.0;
  for (double v : p.mu.data) mu_sq += v * v;
  for (double v : q.mu.data) mu_sq += v * v;
  double scale = linalg::trace(p.cov) + linalg::trace(q.cov) + mu_sq + 1.0;
  return total < 1e-10 * scale ? 0.0 : total;
}

models::GeneratorParams parallel_init(const TaskSpec& task, const Tensor& offset) {
  if (offset.numel() != task.d) {
    throw std::invalid_argument("parallel_init: offset dimension mismatch");
  }
  models::GeneratorParams gen;
  gen.w = task.w_r;
  gen.b = task.b_r;
  for (std::size_t j = 0; j < task.d; ++j) gen.b.data[j] += offset.data[j];
  gen.latent_sigma = task.sigma;
  return gen;
}

Tensor perpendicular_offset(const TaskSpec& task, double norm) {
  if (task.d < 2) {
    throw std::invalid_argument("perpendicular_offset: requires d >= 2");
  }
  // Start from the axis least aligned with w_r, then project out w_r.
  std::size_t pick = 0;
  double best = std::abs(task.w_r.data[0]);
  for (std::size_t j = 1; j < task.d; ++j) {
    if (std::abs(task.w_r.data[j]) < best) {
      best = std::abs(task.w_r.data[j]);
      pick = j;
    }
  }
  double w_sq = 0.0;
  for (double v : task.w_r.data) w_sq += v * v;
  Tensor offset = Tensor::zeros({static_cast<std::size_t>(1), task.d});
  offset.data[pick] = 1.0;
  double proj = task.w_r.data[pick] / w_sq;
  for (std::size_t j = 0; j < task.d; ++j) offset.data[j] -= proj * task.w_r.data[j];
  double len = 0.0;
  for (double v : offset.data) len += v * v;
  len = std::sqrt(len);
  for (double& v : offset.data) v *= norm / len;
  return offset;
}

}  // namespace ganlab::synth
