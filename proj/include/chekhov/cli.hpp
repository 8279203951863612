// Copyright 2026 The chekhov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command layer behind the chekhov executable: per-command parameter
// schemas, config resolution, execution and run manifests.

#ifndef CHEKHOV_CLI_HPP_
#define CHEKHOV_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chekhov/common.hpp"

namespace chekhov::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kRuntimeError = 2, kAcceptanceFailure = 3 };

// Bad or unknown configuration; the message names the field path.
class ValidationError : public Error {
 public:
  using Error::Error;
};

const std::vector<std::string>& commands();
// Fully defaulted parameters for a command; also its schema, since every
// accepted key and its JSON type appear here.
nlohmann::json default_params(const std::string& command);
std::string command_summary(const std::string& command);

struct RunConfig {
  std::string command;
  nlohmann::json params;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;  // fan-out list; empty runs params["seed"] once
};

// Resolves defaults < file < flag overrides and validates the result.
// Flag override keys may use dots for nested objects ("data.n_modes").
RunConfig parse_config(const std::string& command, const std::optional<nlohmann::json>& file,
                       const nlohmann::json& overrides, const std::string& out_dir = "");
// Reads a JSON config file; ValidationError on unreadable or bad JSON.
nlohmann::json read_config_file(const std::string& path);
// Interprets a flag value as JSON when it parses, otherwise as a string.
nlohmann::json parse_flag_value(const std::string& text);

// CHEKHOV_OUT_DIR when set, otherwise "chekhov_out".
std::string default_out_dir();

struct Artifact {
  std::string path;  // relative to the run directory
  std::string checksum;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
  int exit_code = 0;
  std::vector<std::string> failures;  // failed acceptance checks
  std::vector<Artifact> artifacts;

  nlohmann::json to_json() const;
};

struct RunOutcome {
  int exit_code = kOk;
  std::string run_dir;
  RunManifest manifest;
  nlohmann::json summary;
};

// Executes one run into `run_dir` and writes manifest.json there. Module
// errors propagate; acceptance failures set exit code 3.
RunOutcome run(const std::string& command, const nlohmann::json& params, const std::string& run_dir);

// Runs every seed (concurrently when more than one), each in its own
// subdirectory seed_<n>; returns the worst exit code. Errors are reported
// on `log` and mapped to exit codes.
int execute(const RunConfig& config, std::ostream& log);

// Re-checksums every artifact listed in a manifest.
bool verify_manifest(const std::string& manifest_path, std::string* problem = nullptr);

// Hex FNV-1a 64 of a file's bytes.
std::string file_checksum(const std::string& path);

}  // namespace chekhov::cli

#endif  // CHEKHOV_CLI_HPP_
