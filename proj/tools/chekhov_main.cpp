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

// chekhov: command-line entry point. Every subcommand accepts its
// parameters as --<key> flags (nested keys with dots, e.g. --data.n_modes),
// a JSON --config file, or --set key=value; flags beat the file.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chekhov/cli.hpp"

namespace {

using nlohmann::json;

struct SubcommandArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

// Leaf parameters as (dotted key, default value); arrays stay whole.
void flatten_keys(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) flatten_keys(v, key, out);
    else out.emplace_back(key, v);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chekhov: no-regret equilibrium solvers and Chekhov GAN training"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CHEKHOV_VERSION_STRING);

  std::map<std::string, SubcommandArgs> args;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : chekhov::cli::commands()) {
    auto* sub = app.add_subcommand(name, chekhov::cli::command_summary(name));
    auto& a = args[name];
    sub->add_option("--config", a.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", a.out_dir, "Output directory (default $CHEKHOV_OUT_DIR/<command>)");
    sub->add_option("--seeds", a.seeds, "Run once per seed, concurrently")->delimiter(',');
    sub->add_option("--set", a.sets, "Override a parameter: key=value");
    std::vector<std::pair<std::string, json>> keys;
    flatten_keys(chekhov::cli::default_params(name), "", keys);
    for (const auto& [key, def] : keys) {
      sub->add_option_function<std::string>(
             "--" + key, [&a, key = key](const std::string& v) { a.flags[key] = v; }, "default: " + def.dump())
          ->type_name("VALUE");
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? chekhov::cli::kOk : chekhov::cli::kValidationError;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    auto& a = args[name];
    try {
      json overrides = json::object();
      for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw chekhov::cli::ValidationError("--set expects key=value, got '" + s + "'");
        overrides[s.substr(0, eq)] = chekhov::cli::parse_flag_value(s.substr(eq + 1));
      }
      for (const auto& [k, v] : a.flags) overrides[k] = chekhov::cli::parse_flag_value(v);
      std::optional<json> file;
      if (!a.config_path.empty()) file = chekhov::cli::read_config_file(a.config_path);
      auto rc = chekhov::cli::parse_config(name, file, overrides, a.out_dir);
      rc.seeds = a.seeds;
      return chekhov::cli::execute(rc, std::cout);
    } catch (const chekhov::cli::ValidationError& e) {
      std::cerr << "validation error: " << e.what() << '\n';
      return chekhov::cli::kValidationError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return chekhov::cli::kRuntimeError;
    }
  }
  return chekhov::cli::kOk;
}
