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

#include <optional>
#include <string>

#include "ganlab/models.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/tape.hpp"

namespace ganlab::losses {

enum class GanVariant {
  kMinimax,        // generator minimizes E log(1 - D(G(z)))
  kNonSaturating,  // generator minimizes -E log D(G(z))
  kWganClip,       // raw-score critic, weight clipping
  kWganGp,         // raw-score critic, gradient penalty at interpolates
  kGanGp,          // non-saturating + gradient penalty at interpolates
  kDraganNs,       // non-saturating + gradient penalty around the data
};

const char* variant_name(GanVariant v);
std::optional<GanVariant> variant_from_name(const std::string& name);

// True for the variants whose discriminator loss carries the penalty term.
bool uses_penalty(GanVariant v);
// True for the raw-score critics (no logistic on the output).
bool is_wgan(GanVariant v);

enum class PenaltyMode { kWganGp, kDragan };

struct PenaltyConfig {
  double lambda = 10.0;
  PenaltyMode mode = PenaltyMode::kWganGp;
  // Isotropic noise std for the DRAGAN perturbation. Unset means half the
  // per-dimension std of the current real batch.
  std::optional<double> noise_std;
};

// Probability floor used before every log in the losses; keeps Eq.-style
// binary cross-entropy finite when a logistic output underflows.
inline constexpr double kLogGuard = 1e-12;

// x_hat rows = alpha_i * real_i + (1 - alpha_i) * tilde_i.
Tensor interpolate(const Tensor& real, const Tensor& x_tilde, const Tensor& alphas);

// Draws per-row alpha ~ U(0,1) and forms the penalty points. For kWganGp the
// second endpoint is the fake row; for kDragan it is the real row plus
// Gaussian noise with the given per-dimension std.
Tensor sample_interpolates(PenaltyMode mode, const Tensor& real, const Tensor& fake,
                           const Tensor& noise_std, Rng& rng);

// Per-dimension standard deviation of the batch columns.
Tensor column_std(const Tensor& batch);

// mean over rows of (||d D / d x_hat||_2 - 1)^2 with x_hat a leaf node.
// prob_target selects whether the inner gradient is taken of the probability
// (the non-saturating variants) or of the raw score (WGAN-GP).
ad::NodeId gradient_penalty(ad::Tape& tape, const models::DiscriminatorNodes& disc,
                            ad::NodeId x_hat, bool prob_target);

// Discriminator objective for the chosen variant on one real/fake batch pair.
// rng is only touched when a penalty term is actually sampled.
ad::NodeId discriminator_loss(ad::Tape& tape, GanVariant variant,
                              const models::DiscriminatorNodes& disc,
                              const Tensor& real, const Tensor& fake,
                              const PenaltyConfig& penalty, Rng* rng);

// Generator objective; `fake` must be graph-connected to the generator
// parameters. Penalties never appear here.
ad::NodeId generator_loss(ad::Tape& tape, GanVariant variant,
                          const models::DiscriminatorNodes& disc, ad::NodeId fake);

// Projects every discriminator parameter into [-c, c].
void clip_weights(models::DiscriminatorParams& disc, double c);

}  // namespace ganlab::losses
