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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chekhov/cli.hpp"

using namespace chekhov;
using namespace chekhov::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("chekhov_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json tiny_train() {
  return {{"steps", 40}, {"hidden_units", 8}, {"noise_dim", 3}, {"batch_size", 8}, {"eval_interval", 20},
          {"eval_samples", 100}, {"heatmap_samples", 200}, {"heatmap_bins", 10}, {"seed", 4}};
}

}  // namespace

TEST_CASE("train-toy defaults") {
  const auto rc = parse_config("train-toy", std::nullopt, json::object());
  CHECK(rc.params.at("K") == 5);
  CHECK(rc.params.at("lr") == 1e-4);
  CHECK(rc.params.at("beta1") == 0.5);
  CHECK(rc.params.at("reg_coefficient") == 0.01);
  CHECK(rc.params.at("data").at("n_modes") == 7);
  CHECK(rc.params.at("method") == "chekhov");
  CHECK(rc.out_dir.size() > 0);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config("train-toy", std::nullopt, {{"K", 0}}), ValidationError);
  CHECK_THROWS_AS(parse_config("train-toy", std::nullopt, {{"bogus", 1}}), ValidationError);
  CHECK_THROWS_AS(parse_config("solve-matrix", std::nullopt, {{"T", "many"}}), ValidationError);
  try {
    parse_config("train-toy", std::optional<json>(json{{"data", {{"n_mode", 3}}}}), json::object());
    FAIL("unknown nested key accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("data.n_mode") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("eval", std::nullopt, json::object()), ValidationError);
  CHECK(parse_config("train-toy", std::nullopt, {{"data.n_modes", 5}}).params.at("data").at("n_modes") == 5);
}

TEST_CASE("flags beat file values") {
  const std::optional<json> file = json{{"seed", 3}, {"T", 50}};
  CHECK(parse_config("solve-matrix", file, json::object()).params.at("seed") == 3);
  const auto rc = parse_config("solve-matrix", file, {{"seed", 7}});
  CHECK(rc.params.at("seed") == 7);
  CHECK(rc.params.at("T") == 50);
  CHECK(parse_flag_value("12") == 12);
  CHECK(parse_flag_value("rps") == "rps");
}

TEST_CASE("solve-matrix run writes a verified manifest") {
  const auto dir = scratch("solve");
  const auto rc = parse_config("solve-matrix", std::nullopt, {{"game", "rps"}, {"T", 10000}}, dir.string());
  std::ostringstream log;
  CHECK(execute(rc, log) == kOk);
  const auto report = load(dir / "report.json");
  CHECK(std::abs(report.at("value").get<double>()) <= 0.02);
  CHECK(report.at("minimax_check").at("pass") == true);
  std::string why;
  CHECK(verify_manifest((dir / "manifest.json").string(), &why));
  const auto manifest = load(dir / "manifest.json");
  CHECK(manifest.at("exit_code") == 0);
  CHECK(manifest.at("artifacts").size() >= 2);

  std::ofstream(dir / "report.json", std::ios::app) << " ";
  CHECK_FALSE(verify_manifest((dir / "manifest.json").string(), &why));
  CHECK(why.find("checksum") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("check-style commands succeed on valid inputs") {
  const auto dir = scratch("checks");
  std::ostringstream log;
  CHECK(execute(parse_config("check-concavity", std::nullopt, {{"trials", 200}}, (dir / "c").string()), log) == kOk);
  CHECK(execute(parse_config("solve-semiconcave", std::nullopt, {{"T", 256}, {"seed", 2}}, (dir / "s").string()), log) ==
        kOk);
  CHECK(fs::exists(dir / "s" / "iterates.csv"));
  CHECK(execute(parse_config("regret-audit", std::nullopt, {{"T", 200}}, (dir / "r").string()), log) == kOk);
  CHECK(slurp(dir / "r" / "ledger.csv").rfind("t,loss_t,reward_t,cum_regret_min,cum_regret_max\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("seed fan-out runs isolated copies") {
  const auto dir = scratch("seeds");
  auto rc = parse_config("solve-semiconcave", std::nullopt, {{"T", 64}}, dir.string());
  rc.seeds = {1, 2, 3};
  std::ostringstream log;
  CHECK(execute(rc, log) == kOk);
  for (int s : {1, 2, 3}) {
    CHECK(verify_manifest((dir / ("seed_" + std::to_string(s)) / "manifest.json").string()));
    CHECK(load(dir / ("seed_" + std::to_string(s)) / "manifest.json").at("config").at("seed") == s);
  }
  fs::remove_all(dir);
}

TEST_CASE("train-toy, eval and heatmap end to end") {
  const auto dir = scratch("train");
  std::ostringstream log;
  for (const char* run_name : {"a", "b"})
    REQUIRE(execute(parse_config("train-toy", std::nullopt, tiny_train(), (dir / run_name).string()), log) == kOk);
  CHECK(slurp(dir / "a" / "metrics.csv") == slurp(dir / "b" / "metrics.csv"));
  CHECK(slurp(dir / "a" / "heatmap.csv") == slurp(dir / "b" / "heatmap.csv"));

  auto vanilla = tiny_train();
  vanilla["method"] = "vanilla";
  CHECK(execute(parse_config("train-toy", std::nullopt, vanilla, (dir / "v").string()), log) == kOk);
  CHECK(fs::exists(dir / "v" / "metrics.csv"));

  const std::string ckpt = (dir / "a" / "final_checkpoint.json").string();
  CHECK(execute(parse_config("eval", std::nullopt, {{"checkpoint", ckpt}, {"samples", 300}}, (dir / "e").string()),
                log) == kOk);
  CHECK(load(dir / "e" / "eval.json").contains("reverse_kl"));
  CHECK(execute(parse_config("heatmap", std::nullopt, {{"checkpoint", ckpt}, {"bins", 5}, {"samples", 100}},
                             (dir / "h").string()),
                log) == kOk);
  CHECK(fs::exists(dir / "h" / "heatmap.csv"));

  CHECK(execute(parse_config("eval", std::nullopt, {{"checkpoint", (dir / "missing.json").string()}},
                             (dir / "x").string()),
                log) == kRuntimeError);
  fs::remove_all(dir);
}
