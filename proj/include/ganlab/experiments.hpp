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

#include <stdexcept>
#include <string>

namespace ganlab::experiments {

// Configuration/validation failure; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

extern const char* kVersion;

// True for the experiment commands this engine can execute:
// exp1, exp2, parallel, figure2, sweep.
bool known_command(const std::string& command);

// Fills defaults, validates every field (error messages carry the JSON
// path), and returns the fully resolved manifest JSON: command, config,
// version, master seed and output directory. Throws ConfigError.
std::string resolve_manifest(const std::string& command, const std::string& config_json,
                             const std::string& out_dir);

// Writes the manifest into out_dir first, then executes the command and
// emits its outputs (trace/sweep CSVs, snapshots, SVG figures) there.
// `manifest_json` must come from resolve_manifest.
void run_manifest_json(const std::string& manifest_json);

// Re-executes a stored manifest byte-for-byte; optional output override.
void run_manifest_file(const std::string& path, const std::string& out_dir_override);

}  // namespace ganlab::experiments
