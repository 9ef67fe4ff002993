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

#include "ganlab.h"

#include <string>

#include "ganlab/experiments.hpp"
#include "ganlab/io.hpp"
#include "ganlab/synth.hpp"
#include "ganlab/trainer.hpp"

struct ganlab_experiment {
  std::string manifest_json;
};

namespace {

thread_local std::string t_last_error;

ganlab_status set_error(ganlab_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes + thread-local message.
template <typename Fn>
ganlab_status guarded(Fn&& fn) {
  try {
    fn();
    return GANLAB_OK;
  } catch (const ganlab::experiments::ConfigError& e) {
    return set_error(GANLAB_ERROR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(GANLAB_ERROR_CONFIG, e.what());
  } catch (const ganlab::trainer::NumericError& e) {
    return set_error(GANLAB_ERROR_NUMERIC, e.what());
  } catch (const ganlab::io::IoError& e) {
    return set_error(GANLAB_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(GANLAB_ERROR, e.what());
  } catch (...) {
    return set_error(GANLAB_ERROR, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* ganlab_version(void) { return ganlab::experiments::kVersion; }

const char* ganlab_last_error(void) { return t_last_error.c_str(); }

ganlab_status ganlab_experiment_create(const char* command, const char* config_json,
                                       const char* out_dir, ganlab_experiment** out) {
  if (out == nullptr) return set_error(GANLAB_ERROR_CONFIG, "out must not be null");
  *out = nullptr;
  if (command == nullptr) return set_error(GANLAB_ERROR_CONFIG, "command must not be null");
  if (out_dir == nullptr) return set_error(GANLAB_ERROR_CONFIG, "out_dir must not be null");
  return guarded([&] {
    std::string manifest = ganlab::experiments::resolve_manifest(
        command, config_json == nullptr ? "" : config_json, out_dir);
    *out = new ganlab_experiment{std::move(manifest)};
  });
}

const char* ganlab_experiment_manifest(const ganlab_experiment* exp) {
  return exp == nullptr ? "" : exp->manifest_json.c_str();
}

ganlab_status ganlab_experiment_run(ganlab_experiment* exp) {
  if (exp == nullptr) return set_error(GANLAB_ERROR_CONFIG, "exp must not be null");
  return guarded([&] { ganlab::experiments::run_manifest_json(exp->manifest_json); });
}

void ganlab_experiment_destroy(ganlab_experiment* exp) { delete exp; }

ganlab_status ganlab_run_manifest(const char* manifest_path,
                                  const char* out_dir_override) {
  if (manifest_path == nullptr) {
    return set_error(GANLAB_ERROR_CONFIG, "manifest_path must not be null");
  }
  return guarded([&] {
    ganlab::experiments::run_manifest_file(
        manifest_path, out_dir_override == nullptr ? "" : out_dir_override);
  });
}

ganlab_status ganlab_frechet_squared(const double* mu_p, const double* cov_p,
                                     const double* mu_q, const double* cov_q, size_t d,
                                     double* out) {
  if (mu_p == nullptr || cov_p == nullptr || mu_q == nullptr || cov_q == nullptr ||
      out == nullptr) {
    return set_error(GANLAB_ERROR_CONFIG, "all arguments must be non-null");
  }
  if (d == 0) return set_error(GANLAB_ERROR_CONFIG, "d must be >= 1");
  return guarded([&] {
    ganlab::models::GaussianMoments p, q;
    p.mu = ganlab::Tensor({d}, std::vector<double>(mu_p, mu_p + d));
    p.cov = ganlab::Tensor({d, d}, std::vector<double>(cov_p, cov_p + d * d));
    q.mu = ganlab::Tensor({d}, std::vector<double>(mu_q, mu_q + d));
    q.cov = ganlab::Tensor({d, d}, std::vector<double>(cov_q, cov_q + d * d));
    *out = ganlab::synth::frechet_squared(p, q);
  });
}

}  // extern "C"
