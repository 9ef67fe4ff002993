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

#include "ganlab/analysis.hpp"

#include <cmath>

#include "ganlab/io.hpp"
#include "ganlab/losses.hpp"
#include "ganlab/trainer.hpp"

namespace ganlab::analysis {

namespace {

double gauss_pdf(double x, double mu, double s) {
  double z = (x - mu) / s;
  return std::exp(-0.5 * z * z) / (s * 2.5066282746310005024);
}

double gauss_pdf_dx(double x, double mu, double s) {
  return gauss_pdf(x, mu, s) * (mu - x) / (s * s);
}

// Loss columns share the losses-module probability floor so a saturated
// discriminator yields large-but-finite plateaus instead of infinities.
double log_guarded(double p) { return std::log(std::max(p, losses::kLogGuard)); }

}  // namespace

TwoGaussianSetup default_setup() {
  TwoGaussianSetup setup;
  const int n = 401;
  setup.grid.reserve(n);
  for (int i = 0; i < n; ++i) {
    setup.grid.push_back(-4.0 + 8.0 * static_cast<double>(i) / (n - 1));
  }
  return setup;
}

double optimal_discriminator(const TwoGaussianSetup& setup, double x) {
  double p_data = gauss_pdf(x, setup.mu1, setup.s1);
  double p_model = gauss_pdf(x, setup.mu2, setup.s2);
  double denom = p_data + p_model;
  if (denom <= 0.0) return 0.5;  // both densities underflowed
  return p_data / denom;
}

std::string ScanTable::to_csv() const {
  std::string out = "x,D,L_mm,L_ns,dLmm_dx,dLns_dx\n";
  for (const ScanRow& r : rows) {
    out += io::format_double(r.x);
    out += ',';
    out += io::format_double(r.d);
    out += ',';
    out += io::format_double(r.loss_mm);
    out += ',';
    out += io::format_double(r.loss_ns);
    out += ',';
    out += io::format_double(r.dmm_dx);
    out += ',';
    out += io::format_double(r.dns_dx);
    out += '\n';
  }
  return out;
}

ScanTable landscape_scan(const TwoGaussianSetup& setup) {
  ScanTable table;
  table.rows.reserve(setup.grid.size());
  for (double x : setup.grid) {
    double p1 = gauss_pdf(x, setup.mu1, setup.s1);
    double p2 = gauss_pdf(x, setup.mu2, setup.s2);
    double denom = p1 + p2;
    double d = denom > 0.0 ? p1 / denom : 0.5;
    // D'(x) = (p1' p2 - p1 p2') / (p1 + p2)^2
    double d_dx = denom > 0.0
                      ? (gauss_pdf_dx(x, setup.mu1, setup.s1) * p2 -
                         p1 * gauss_pdf_dx(x, setup.mu2, setup.s2)) /
                            (denom * denom)
                      : 0.0;
    ScanRow row;
    row.x = x;
    row.d = d;
    row.loss_mm = log_guarded(1.0 - d);
    row.loss_ns = -log_guarded(d);
    row.dmm_dx = -d_dx / std::max(1.0 - d, losses::kLogGuard);
    row.dns_dx = -d_dx / std::max(d, losses::kLogGuard);
    table.rows.push_back(row);
  }
  return table;
}

ScanTable landscape_scan(const TwoGaussianSetup& setup,
                         const models::DiscriminatorParams& disc) {
  if (disc.data_dim() != 1) {
    throw std::invalid_argument("landscape_scan: discriminator must take 1-D input");
  }
  ScanTable table;
  table.rows.reserve(setup.grid.size());
  for (double x : setup.grid) {
    ad::Tape tape;
    models::DiscriminatorNodes dn = models::bind(tape, disc);
    ad::NodeId input = tape.constant(Tensor::matrix(1, 1, {x}));
    ad::NodeId prob = models::discriminator_prob(tape, dn, input);
    ad::NodeId loss_mm =
        tape.mean(tape.log(tape.clamp_min(
            tape.sub(tape.constant(Tensor::full({1, 1}, 1.0)), prob), losses::kLogGuard)));
    ad::NodeId loss_ns = tape.scale(
        tape.mean(tape.log(tape.clamp_min(prob, losses::kLogGuard))), -1.0);
    ad::NodeId wrt[] = {input};
    ad::NodeId grad_mm = tape.gradient(loss_mm, wrt)[0];
    ad::NodeId grad_ns = tape.gradient(loss_ns, wrt)[0];

    ScanRow row;
    row.x = x;
    row.d = tape.value(prob).data[0];
    row.loss_mm = tape.value(loss_mm).value();
    row.loss_ns = tape.value(loss_ns).value();
    row.dmm_dx = tape.value(grad_mm).data[0];
    row.dns_dx = tape.value(grad_ns).data[0];
    table.rows.push_back(row);
  }
  return table;
}

models::DiscriminatorParams train_pointwise_disc(const TwoGaussianSetup& setup,
                                                 long steps, double lr,
                                                 std::uint64_t seed) {
  models::ModelDims dims{1, 1, 32};
  models::InitResult init = models::init_params(derive_seed(seed, "init"), dims, 0.1);
  models::DiscriminatorParams disc = std::move(init.disc);

  Rng rng(derive_seed(seed, "pointwise"));
  trainer::AdamState state;
  const std::size_t batch = 64;
  losses::PenaltyConfig no_penalty;
  ad::Tape tape;
  for (long step = 0; step < steps; ++step) {
    tape.clear();
    Tensor real = Tensor::zeros({batch, 1});
    Tensor fake = Tensor::zeros({batch, 1});
    for (std::size_t i = 0; i < batch; ++i) {
      real.data[i] = rng.normal(setup.mu1, setup.s1);
      fake.data[i] = rng.normal(setup.mu2, setup.s2);
    }
    models::DiscriminatorNodes dn = models::bind(tape, disc);
    ad::NodeId loss =
        losses::discriminator_loss(tape, losses::GanVariant::kNonSaturating, dn, real,
                                   fake, no_penalty, nullptr);
    if (!std::isfinite(tape.value(loss).value())) {
      throw trainer::NumericError("train_pointwise_disc: non-finite loss at step " +
                                  std::to_string(step));
    }
    ad::NodeId wrt[] = {dn.w1, dn.b1, dn.w2, dn.b2};
    std::vector<ad::NodeId> grads = tape.gradient(loss, wrt);
    std::vector<Tensor> grad_values;
    for (ad::NodeId g : grads) grad_values.push_back(tape.value(g));
    trainer::adam_step({&disc.w1, &disc.b1, &disc.w2, &disc.b2}, grad_values, state, lr,
                       0.5, 0.9, 1e-8);
  }
  return disc;
}

}  // namespace ganlab::analysis
