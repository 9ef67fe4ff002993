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

#include "ganlab/losses.hpp"

#include <cmath>

namespace ganlab::losses {

const char* variant_name(GanVariant v) {
  switch (v) {
    case GanVariant::kMinimax: return "minimax";
    case GanVariant::kNonSaturating: return "ns";
    case GanVariant::kWganClip: return "wgan";
    case GanVariant::kWganGp: return "wgan-gp";
    case GanVariant::kGanGp: return "gan-gp";
    case GanVariant::kDraganNs: return "dragan-ns";
  }
  return "?";
}

std::optional<GanVariant> variant_from_name(const std::string& name) {
  if (name == "minimax") return GanVariant::kMinimax;
  if (name == "ns") return GanVariant::kNonSaturating;
  if (name == "wgan") return GanVariant::kWganClip;
  if (name == "wgan-gp") return GanVariant::kWganGp;
  if (name == "gan-gp") return GanVariant::kGanGp;
  if (name == "dragan-ns") return GanVariant::kDraganNs;
  return std::nullopt;
}

bool uses_penalty(GanVariant v) {
  return v == GanVariant::kWganGp || v == GanVariant::kGanGp ||
         v == GanVariant::kDraganNs;
}

bool is_wgan(GanVariant v) {
  return v == GanVariant::kWganClip || v == GanVariant::kWganGp;
}

Tensor interpolate(const Tensor& real, const Tensor& x_tilde, const Tensor& alphas) {
  if (!real.same_shape(x_tilde) || alphas.numel() != real.rows()) {
    throw std::invalid_argument("interpolate: shape mismatch");
  }
  Tensor out = real;
  for (std::size_t i = 0; i < real.rows(); ++i) {
    double a = alphas.data[i];
    for (std::size_t j = 0; j < real.cols(); ++j) {
      out.at(i, j) = a * real.at(i, j) + (1.0 - a) * x_tilde.at(i, j);
    }
  }
  return out;
}

Tensor column_std(const Tensor& batch) {
  const std::size_t m = batch.rows(), d = batch.cols();
  Tensor mean = Tensor::zeros({d});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean.data[j] += batch.at(i, j);
  }
  for (double& v : mean.data) v /= static_cast<double>(m);
  Tensor out = Tensor::zeros({d});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double c = batch.at(i, j) - mean.data[j];
      out.data[j] += c * c;
    }
  }
  for (double& v : out.data) v = std::sqrt(v / static_cast<double>(m));
  return out;
}

Tensor sample_interpolates(PenaltyMode mode, const Tensor& real, const Tensor& fake,
                           const Tensor& noise_std, Rng& rng) {
  if (!real.same_shape(fake)) {
    throw std::invalid_argument("sample_interpolates: batch shape mismatch");
  }
  Tensor x_tilde;
  if (mode == PenaltyMode::kWganGp) {
    x_tilde = fake;
  } else {
    if (noise_std.numel() != real.cols()) {
      throw std::invalid_argument("sample_interpolates: noise_std length mismatch");
    }
    x_tilde = real;
    for (std::size_t i = 0; i < real.rows(); ++i) {
      for (std::size_t j = 0; j < real.cols(); ++j) {
        x_tilde.at(i, j) += rng.normal(0.0, noise_std.data[j]);
      }
    }
  }
  Tensor alphas = Tensor::zeros({real.rows()});
  for (double& a : alphas.data) a = rng.uniform01();
  return interpolate(real, x_tilde, alphas);
}

ad::NodeId gradient_penalty(ad::Tape& tape, const models::DiscriminatorNodes& disc,
                            ad::NodeId x_hat, bool prob_target) {
  ad::NodeId out = prob_target ? models::discriminator_prob(tape, disc, x_hat)
                               : models::discriminator_logit(tape, disc, x_hat);
  ad::NodeId grad = tape.input_gradient(out, x_hat);
  ad::NodeId norms = tape.l2norm_rows(grad);
  ad::NodeId ones = tape.constant(Tensor::full(tape.value(norms).shape, 1.0));
  return tape.mean(tape.square(tape.sub(norms, ones)));
}

namespace {

// -mean log max(p, guard)
ad::NodeId neg_mean_log(ad::Tape& tape, ad::NodeId p) {
  return tape.scale(tape.mean(tape.log(tape.clamp_min(p, kLogGuard))), -1.0);
}

// -mean log max(1 - p, guard)
ad::NodeId neg_mean_log1m(ad::Tape& tape, ad::NodeId p) {
  ad::NodeId ones = tape.constant(Tensor::full(tape.value(p).shape, 1.0));
  return neg_mean_log(tape, tape.sub(ones, p));
}

}  // namespace

ad::NodeId discriminator_loss(ad::Tape& tape, GanVariant variant,
                              const models::DiscriminatorNodes& disc,
                              const Tensor& real, const Tensor& fake,
                              const PenaltyConfig& penalty, Rng* rng) {
  if (!real.same_shape(fake)) {
    throw std::invalid_argument("discriminator_loss: batch shape mismatch");
  }
  ad::NodeId real_node = tape.constant(real);
  ad::NodeId fake_node = tape.constant(fake);

  ad::NodeId base;
  if (is_wgan(variant)) {
    // Critic cost: mean score on fake minus mean score on real.
    ad::NodeId s_real = models::discriminator_logit(tape, disc, real_node);
    ad::NodeId s_fake = models::discriminator_logit(tape, disc, fake_node);
    base = tape.sub(tape.mean(s_fake), tape.mean(s_real));
  } else {
    // Binary cross-entropy: -E log D(real) - E log(1 - D(fake)).
    ad::NodeId p_real = models::discriminator_prob(tape, disc, real_node);
    ad::NodeId p_fake = models::discriminator_prob(tape, disc, fake_node);
    base = tape.add(neg_mean_log(tape, p_real), neg_mean_log1m(tape, p_fake));
  }

  if (!uses_penalty(variant) || penalty.lambda == 0.0) return base;
  if (rng == nullptr) {
    throw std::invalid_argument("discriminator_loss: penalty requires an rng");
  }
  PenaltyMode mode =
      variant == GanVariant::kDraganNs ? PenaltyMode::kDragan : PenaltyMode::kWganGp;
  Tensor noise_std = Tensor::zeros({real.cols()});
  if (mode == PenaltyMode::kDragan) {
    if (penalty.noise_std.has_value()) {
      noise_std = Tensor::full({real.cols()}, *penalty.noise_std);
    } else {
      noise_std = column_std(real);
      for (double& v : noise_std.data) v *= 0.5;
    }
  }
  Tensor x_hat = sample_interpolates(mode, real, fake, noise_std, *rng);
  ad::NodeId pen =
      gradient_penalty(tape, disc, tape.constant(x_hat), !is_wgan(variant));
  return tape.add(base, tape.scale(pen, penalty.lambda));
}

ad::NodeId generator_loss(ad::Tape& tape, GanVariant variant,
                          const models::DiscriminatorNodes& disc, ad::NodeId fake) {
  if (is_wgan(variant)) {
    return tape.scale(tape.mean(models::discriminator_logit(tape, disc, fake)), -1.0);
  }
  ad::NodeId p_fake = models::discriminator_prob(tape, disc, fake);
  if (variant == GanVariant::kMinimax) {
    // mean log(1 - D(fake)): the zero-sum objective.
    return tape.scale(neg_mean_log1m(tape, p_fake), -1.0);
  }
  // Non-saturating (also the penalized variants): -mean log D(fake).
  return neg_mean_log(tape, p_fake);
}

void clip_weights(models::DiscriminatorParams& disc, double c) {
  if (c <= 0.0) throw std::invalid_argument("clip_weights: c must be positive");
  auto clip = [c](Tensor& t) {
    for (double& v : t.data) v = v < -c ? -c : (v > c ? c : v);
  };
  clip(disc.w1);
  clip(disc.b1);
  clip(disc.w2);
  clip(disc.b2);
}

}  // namespace ganlab::losses
