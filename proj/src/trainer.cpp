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

#include "ganlab/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "ganlab/io.hpp"

namespace ganlab::trainer {

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
               AdamState& state, double lr, double beta1, double beta2, double eps) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("adam_step: params/grads size mismatch");
  }
  if (state.m.empty()) {
    for (const Tensor* p : params) {
      state.m.push_back(Tensor::zeros(p->shape));
      state.v.push_back(Tensor::zeros(p->shape));
    }
  }
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = *params[k];
    const Tensor& g = grads[k];
    if (!p.same_shape(g)) throw std::invalid_argument("adam_step: grad shape mismatch");
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      m.data[i] = beta1 * m.data[i] + (1.0 - beta1) * g.data[i];
      v.data[i] = beta2 * v.data[i] + (1.0 - beta2) * g.data[i] * g.data[i];
      double m_hat = m.data[i] / bc1;
      double v_hat = v.data[i] / bc2;
      p.data[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

std::string TrainingTrace::to_csv() const {
  std::string out = "step,frechet_sq,loss_g,loss_d\n";
  for (const TraceRecord& r : records) {
    out += std::to_string(r.step);
    out += ',';
    out += io::format_double(r.frechet_sq);
    out += ',';
    out += io::format_double(r.loss_g);
    out += ',';
    out += io::format_double(r.loss_d);
    out += '\n';
  }
  return out;
}

namespace {

Tensor draw_latents(std::size_t n, std::size_t g, double sigma, Rng& rng) {
  return rng.normal_tensor({n, g}, 0.0, sigma);
}

struct Run {
  const synth::TaskSpec& task;
  const TrainConfig& cfg;
  models::GeneratorParams gen;
  models::DiscriminatorParams disc;
  AdamState gen_state;
  AdamState disc_state;
  Rng disc_rng;
  Rng gen_rng;
  ad::Tape tape;

  Run(const synth::TaskSpec& t, const TrainConfig& c)
      : task(t),
        cfg(c),
        disc_rng(derive_seed(c.seed, "disc")),
        gen_rng(derive_seed(c.seed, "gen")) {
    models::ModelDims dims{cfg.latent_dim, task.d, cfg.hidden_width};
    models::InitResult init =
        models::init_params(derive_seed(cfg.seed, "init"), dims, cfg.init_weight_std,
                            task.sigma);
    disc = std::move(init.disc);
    if (cfg.init.mode == InitSpec::Mode::kParallel) {
      if (cfg.latent_dim != 1) {
        throw std::invalid_argument("train_run: parallel init requires latent_dim 1");
      }
      gen = synth::parallel_init(task, cfg.init.offset);
    } else {
      gen = std::move(init.gen);
    }
  }

  double check_finite(double loss, const char* which, long step) const {
    if (!std::isfinite(loss)) {
      throw NumericError(std::string(which) + " loss became non-finite at generator step " +
                         std::to_string(step) + " (" + losses::variant_name(cfg.variant) +
                         ")");
    }
    return loss;
  }

  // A NaN that reaches the parameters can round-trip through relu/clamp
  // into a finite loss, so the update itself is checked too.
  void check_params_finite(const char* which, long step) const {
    auto ok = [](const Tensor& t) {
      for (double v : t.data) {
        if (!std::isfinite(v)) return false;
      }
      return true;
    };
    bool fine = std::string(which) == "generator"
                    ? ok(gen.w) && ok(gen.b)
                    : ok(disc.w1) && ok(disc.b1) && ok(disc.w2) && ok(disc.b2);
    if (!fine) {
      throw NumericError(std::string(which) +
                         " parameters became non-finite at generator step " +
                         std::to_string(step) + " (" +
                         losses::variant_name(cfg.variant) + ")");
    }
  }

  double disc_update(long step) {
    tape.clear();
    Tensor real = synth::sample_data(task, cfg.batch_size, disc_rng);
    Tensor z = draw_latents(cfg.batch_size, cfg.latent_dim, gen.latent_sigma, disc_rng);
    Tensor fake = models::generator_forward(gen, z);

    models::DiscriminatorNodes dn = models::bind(tape, disc);
    ad::NodeId loss = losses::discriminator_loss(tape, cfg.variant, dn, real, fake,
                                                 cfg.penalty, &disc_rng);
    ad::NodeId wrt[] = {dn.w1, dn.b1, dn.w2, dn.b2};
    std::vector<ad::NodeId> grads = tape.gradient(loss, wrt);
    std::vector<Tensor> grad_values;
    grad_values.reserve(grads.size());
    for (ad::NodeId g : grads) grad_values.push_back(tape.value(g));
    adam_step({&disc.w1, &disc.b1, &disc.w2, &disc.b2}, grad_values, disc_state,
              cfg.lr_d, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
    if (cfg.variant == losses::GanVariant::kWganClip) {
      losses::clip_weights(disc, cfg.clip_c);
    }
    check_params_finite("discriminator", step);
    return check_finite(tape.value(loss).value(), "discriminator", step);
  }

  double gen_update(long step) {
    tape.clear();
    Tensor z = draw_latents(cfg.batch_size, cfg.latent_dim, gen.latent_sigma, gen_rng);

    models::GeneratorNodes gn = models::bind(tape, gen);
    models::DiscriminatorNodes dn = models::bind(tape, disc);
    ad::NodeId fake = models::generator_forward(tape, gn, tape.constant(z));
    ad::NodeId loss = losses::generator_loss(tape, cfg.variant, dn, fake);
    ad::NodeId wrt[] = {gn.w, gn.b};
    std::vector<ad::NodeId> grads = tape.gradient(loss, wrt);
    std::vector<Tensor> grad_values;
    grad_values.reserve(grads.size());
    for (ad::NodeId g : grads) grad_values.push_back(tape.value(g));
    adam_step({&gen.w, &gen.b}, grad_values, gen_state, cfg.lr_g, cfg.adam_beta1,
              cfg.adam_beta2, cfg.adam_eps);
    check_params_finite("generator", step);
    return check_finite(tape.value(loss).value(), "generator", step);
  }

  // Evaluation pass for trace rows; batches come from a stream keyed by the
  // step so logging cadence cannot perturb the training draws.
  TraceRecord log_record(long step) {
    Rng eval_rng(derive_seed(cfg.seed, "eval", static_cast<std::uint64_t>(step)));
    Tensor real = synth::sample_data(task, cfg.batch_size, eval_rng);
    Tensor z = draw_latents(cfg.batch_size, cfg.latent_dim, gen.latent_sigma, eval_rng);
    Tensor fake = models::generator_forward(gen, z);

    tape.clear();
    models::GeneratorNodes gn = models::bind(tape, gen);
    models::DiscriminatorNodes dn = models::bind(tape, disc);
    ad::NodeId d_loss = losses::discriminator_loss(tape, cfg.variant, dn, real, fake,
                                                   cfg.penalty, &eval_rng);
    ad::NodeId fake_node = models::generator_forward(tape, gn, tape.constant(z));
    ad::NodeId g_loss = losses::generator_loss(tape, cfg.variant, dn, fake_node);

    TraceRecord rec;
    rec.step = step;
    rec.frechet_sq =
        synth::frechet_squared(synth::true_moments(task), models::generator_moments(gen));
    rec.loss_d = check_finite(tape.value(d_loss).value(), "discriminator", step);
    rec.loss_g = check_finite(tape.value(g_loss).value(), "generator", step);
    return rec;
  }
};

}  // namespace

TrainingTrace train_run(const synth::TaskSpec& task, const TrainConfig& cfg) {
  if (cfg.d_steps_per_g < 1) {
    throw std::invalid_argument("train_run: d_steps_per_g must be >= 1");
  }
  if (cfg.total_g_steps < 0) {
    throw std::invalid_argument("train_run: total_g_steps must be >= 0");
  }
  Run run(task, cfg);
  TrainingTrace trace;

  auto snapshot_wanted = [&](long step) {
    return std::find(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end(), step) !=
           cfg.snapshot_steps.end();
  };
  auto take_snapshot = [&](long step) {
    if (snapshot_wanted(step)) trace.snapshots.push_back({step, run.gen, run.disc});
  };

  trace.records.push_back(run.log_record(0));
  take_snapshot(0);

  for (long step = 1; step <= cfg.total_g_steps; ++step) {
    for (int k = 0; k < cfg.d_steps_per_g; ++k) run.disc_update(step);
    run.gen_update(step);
    if (step == cfg.total_g_steps || (cfg.log_every > 0 && step % cfg.log_every == 0)) {
      trace.records.push_back(run.log_record(step));
    }
    take_snapshot(step);
  }
  return trace;
}

}  // namespace ganlab::trainer
