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

#include "chekhov/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iterator>
#include <sstream>

#include "chekhov/evaluation.hpp"
#include "chekhov/gan.hpp"
#include "chekhov/games.hpp"
#include "chekhov/nn.hpp"
#include "chekhov/solver.hpp"
#include "chekhov/trainer.hpp"

#ifndef CHEKHOV_VERSION
#define CHEKHOV_VERSION "0.0.0"
#endif

namespace chekhov::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Keys accepted by train-toy on top of the trainer's own configuration.
const json& train_extras() {
  static const json extras{{"heatmap_bins", 100}, {"heatmap_samples", 10000}, {"save_final_checkpoint", true}};
  return extras;
}

bool type_compatible(const json& def, const json& v) {
  if (def.is_null()) return v.is_null() || v.is_number();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  if (def.is_number_float()) return v.is_number();
  if (def.is_number_unsigned()) return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (def.is_number_integer()) return v.is_number_integer();
  return false;
}

// Merges `src` into `dst` key by key, rejecting keys and types the
// defaults do not know.
void merge_checked(json& dst, const json& src, const std::string& path) {
  if (!src.is_object()) throw ValidationError((path.empty() ? "config" : path) + ": expected a JSON object");
  for (const auto& [key, v] : src.items()) {
    const std::string p = path.empty() ? key : path + "." + key;
    if (!dst.contains(key)) throw ValidationError(p + ": unknown key");
    json& slot = dst[key];
    if (slot.is_object() && v.is_object()) {
      merge_checked(slot, v, p);
      continue;
    }
    if (!type_compatible(slot, v))
      throw ValidationError(p + ": expected " + std::string(slot.is_null() ? "number or null" : slot.type_name()) +
                            ", got " + std::string(v.type_name()));
    slot = v;
  }
}

json expand_dotted(const json& flat) {
  json out = json::object();
  for (const auto& [key, v] : flat.items()) {
    json* cur = &out;
    std::size_t start = 0;
    for (std::size_t dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
      cur = &(*cur)[key.substr(start, dot - start)];
      start = dot + 1;
    }
    (*cur)[key.substr(start)] = v;
  }
  return out;
}

json trainer_part(const json& params) {
  json j = params;
  for (const auto& [key, v] : train_extras().items()) j.erase(key);
  return j;
}

void require_positive(const json& params, const std::string& key) {
  if (params.at(key).get<double>() < 1) throw ValidationError(key + ": must be >= 1");
}

void validate(const std::string& command, const json& p) {
  if (command == "solve-matrix" || command == "regret-audit") {
    require_positive(p, "T");
    const std::string game = p.at("game");
    const std::vector<std::string> ok = command == "solve-matrix"
                                            ? std::vector<std::string>{"rps", "matching_pennies", "zero", "random", "csv"}
                                            : std::vector<std::string>{"rps", "matching_pennies", "zero", "random",
                                                                       "csv", "bilinear"};
    if (std::find(ok.begin(), ok.end(), game) == ok.end()) throw ValidationError("game: unknown game '" + game + "'");
    if (game == "csv" && p.at("csv").get<std::string>().empty()) throw ValidationError("csv: required when game is csv");
    require_positive(p, "rows");
    require_positive(p, "cols");
    if (command == "regret-audit") {
      require_positive(p, "dim_u");
      require_positive(p, "dim_v");
    }
  } else if (command == "solve-semiconcave") {
    require_positive(p, "T");
    require_positive(p, "dim_u");
    require_positive(p, "dim_v");
    require_positive(p, "max_stored_points");
  } else if (command == "check-concavity") {
    require_positive(p, "trials");
    require_positive(p, "batch");
    if (!(p.at("radius").get<double>() > 0.0)) throw ValidationError("radius: must be positive");
    for (const auto& l : p.at("links")) {
      if (!l.is_string() || (l != "sigmoid" && l != "probit"))
        throw ValidationError("links: entries must be \"sigmoid\" or \"probit\"");
    }
  } else if (command == "train-toy") {
    try {
      trainer::config_from_json(trainer_part(p)).validate();
    } catch (const trainer::ConfigError& e) {
      throw ValidationError(e.what());
    }
    require_positive(p, "heatmap_bins");
  } else if (command == "eval" || command == "heatmap") {
    if (p.at("checkpoint").get<std::string>().empty()) throw ValidationError("checkpoint: required field is missing");
    require_positive(p, "samples");
    if (command == "heatmap") require_positive(p, "bins");
  }
}

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects artifacts written into one run directory.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void text(const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir_) / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw Error("cannot write " + path.string());
    add(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  // Registers a file some other component already wrote.
  void add(const std::string& name) {
    const fs::path path = fs::path(dir_) / name;
    artifacts_.push_back({name, file_checksum(path.string()), fs::file_size(path)});
  }
  const std::string& dir() const { return dir_; }
  std::vector<Artifact> take() { return std::move(artifacts_); }

 private:
  std::string dir_;
  std::vector<Artifact> artifacts_;
};

struct CommandResult {
  json summary;
  std::vector<std::string> failures;
};

games::MatrixGame make_matrix_game(const json& p) {
  const std::string g = p.at("game");
  if (g == "rps") return games::rps_game();
  if (g == "matching_pennies") return games::matching_pennies();
  if (g == "zero") return games::zero_game(p.at("rows").get<Eigen::Index>(), p.at("cols").get<Eigen::Index>());
  if (g == "csv") return games::load_matrix_csv(p.at("csv").get<std::string>());
  return games::random_game(p.at("rows").get<Eigen::Index>(), p.at("cols").get<Eigen::Index>(),
                            p.at("seed").get<std::uint64_t>());
}

json exploit_json(const games::Exploitability& e) { return {{"eps1", e.eps1}, {"eps2", e.eps2}}; }

// Every audited exploitability must sit under the measured-regret
// certificate.
void check_certificates(const solver::EquilibriumReport& r, std::vector<std::string>& failures) {
  std::vector<solver::AuditPoint> points = r.audits;
  points.push_back({r.T, r.regret_min, r.regret_max, r.eps_certificate, r.exploitability});
  for (const auto& a : points) {
    if (a.exploitability && a.exploitability->max() > a.eps_certificate + 1e-9) {
      std::ostringstream os;
      os << "exploitability " << a.exploitability->max() << " exceeds certificate " << a.eps_certificate << " at t="
         << a.t;
      failures.push_back(os.str());
    }
  }
}

CommandResult run_solve_matrix(const json& p, ArtifactWriter& out) {
  const auto game = make_matrix_game(p);
  solver::SolveOptions opt;
  opt.audit_at = p.at("audit_at").get<std::vector<std::int64_t>>();
  opt.keep_ledger = p.at("ledger").get<bool>();
  if (!p.at("eta").is_null()) opt.eta = p.at("eta").get<double>();
  const auto rep = solver::solve_matrix(game, p.at("T").get<std::int64_t>(), opt);

  CommandResult res;
  check_certificates(rep, res.failures);
  const auto bound = solver::check_minimax_bound(game, *rep.d1_strategy, rep.eps_certificate);
  if (!bound.pass) res.failures.push_back("minimax check failed with margin " + std::to_string(bound.margin));

  json report = solver::to_json(rep);
  report["minimax_check"] = {{"pass", bound.pass}, {"margin", bound.margin}, {"lhs", bound.lhs}, {"rhs", bound.rhs}};
  report["pure_minimax_value"] = games::pure_minimax_value(game);
  out.json_file("report.json", report);
  if (rep.ledger) out.text("ledger.csv", learners::ledger_to_csv(*rep.ledger));
  res.summary = {{"value", *rep.value},
                 {"eps_certificate", rep.eps_certificate},
                 {"exploitability", exploit_json(*rep.exploitability)}};
  return res;
}

games::SemiConcaveGame make_bilinear(const json& p) {
  return games::make_bilinear_semiconcave(p.at("seed").get<std::uint64_t>(), p.at("dim_u").get<Eigen::Index>(),
                                          p.at("dim_v").get<Eigen::Index>());
}

CommandResult run_solve_semiconcave(const json& p, ArtifactWriter& out) {
  const auto game = make_bilinear(p);
  const std::int64_t T = p.at("T");
  solver::SolveOptions opt;
  opt.audit_at = p.at("audit_at").get<std::vector<std::int64_t>>();
  opt.max_stored_points = p.at("max_stored_points");
  const auto rep = solver::solve_semiconcave(game, T, opt);

  CommandResult res;
  check_certificates(rep, res.failures);
  const double d2 = game.k2.diameter();
  const double step_bound = solver::stability_bound(d2, T);
  const double max_step = rep.stability.empty() ? 0.0 : *std::max_element(rep.stability.begin(), rep.stability.end());
  const auto violations =
      std::count_if(rep.stability.begin(), rep.stability.end(), [&](double s) { return s > step_bound + 1e-12; });
  if (violations > 0) res.failures.push_back(std::to_string(violations) + " iterate steps exceed the stability bound");
  const double max_bound = solver::ftrl_regret_bound(game.lipschitz, d2, T);
  const double min_bound = solver::ftl_regret_bound(game.lipschitz, d2, game.payoff_bound, T);
  if (rep.regret_max > max_bound) res.failures.push_back("max-player regret exceeds its bound");
  if (rep.regret_min > min_bound) res.failures.push_back("min-player regret exceeds its bound");

  json report = solver::to_json(rep);
  report["bounds"] = {{"stability", step_bound}, {"regret_max", max_bound}, {"regret_min", min_bound},
                      {"lipschitz", game.lipschitz}, {"payoff_bound", game.payoff_bound}, {"diameter", d2}};
  report["iterates"] = "iterates.csv";
  out.text("iterates.csv", solver::iterates_to_csv(rep));
  out.json_file("report.json", report);
  res.summary = {{"eps_certificate", rep.eps_certificate},
                 {"exploitability", exploit_json(*rep.exploitability)},
                 {"max_step", max_step},
                 {"stability_bound", step_bound},
                 {"regret_min", rep.regret_min},
                 {"regret_max", rep.regret_max}};
  return res;
}

CommandResult run_regret_audit(const json& p, ArtifactWriter& out) {
  const std::int64_t T = p.at("T");
  solver::SolveOptions opt;
  opt.keep_ledger = true;
  const auto rep = p.at("game") == "bilinear" ? solver::solve_semiconcave(make_bilinear(p), T, opt)
                                              : solver::solve_matrix(make_matrix_game(p), T, opt);
  CommandResult res;
  check_certificates(rep, res.failures);
  out.text("ledger.csv", learners::ledger_to_csv(*rep.ledger));
  const auto audit = learners::regret_audit(*rep.ledger);
  res.summary = {{"regret_min", audit.regret_min},
                 {"regret_max", audit.regret_max},
                 {"eps_certificate", solver::epsilon_from_regrets(audit.regret_min, audit.regret_max, T)},
                 {"exploitability", rep.exploitability ? exploit_json(*rep.exploitability) : json(nullptr)}};
  return res;
}

CommandResult run_check_concavity(const json& p, ArtifactWriter& out) {
  const std::uint64_t seed = p.at("seed");
  const int trials = p.at("trials");
  const Eigen::Index batch = p.at("batch");
  const games::BallDomain domain(Vec::Zero(2), p.at("radius").get<double>());
  const Mat real = evaluation::sample_ring_mixture(evaluation::RingMixtureSpec::uniform(7), batch,
                                                   Rng::stream(seed, "concavity_real").next_u64());

  // Three fixed generators: raw Gaussian noise, a random affine map, and a
  // deep tanh network.
  std::vector<std::pair<std::string, Mat>> fakes;
  Rng rng = Rng::stream(seed, "concavity_gen");
  fakes.emplace_back("gaussian", rng.normal_matrix(batch, 2));
  {
    const Mat z = rng.normal_matrix(batch, 4);
    const Mat w = rng.normal_matrix(4, 2);
    fakes.emplace_back("affine", (z * w).rowwise() + Eigen::RowVector2d(0.3, -0.2));
  }
  {
    const auto spec = nn::MlpSpec::dense(16, {64, 64}, nn::Activation::kTanh, 2, nn::Activation::kLinear,
                                         nn::InitKind::kOrthogonal, 0.8);
    const auto params = nn::init_params(spec, rng.next_u64());
    fakes.emplace_back("deep_tanh", nn::mlp_forward(spec, params, rng.normal_matrix(batch, 16)).output());
  }

  CommandResult res;
  json rows = json::array();
  int total = 0;
  for (const auto& link_name : p.at("links")) {
    const gan::Link link = link_name == "probit" ? gan::Link::kProbit : gan::Link::kSigmoid;
    for (const auto& [name, fake] : fakes) {
      const auto f = [&, link](const Vec& v) { return gan::semi_shallow_payoff({v, link}, real, fake); };
      const auto rep = gan::concavity_probe(f, domain, trials, Rng::stream(seed, name).next_u64());
      total += rep.violations;
      rows.push_back({{"link", link_name}, {"generator", name}, {"trials", rep.trials},
                      {"violations", rep.violations}, {"worst_margin", rep.worst_margin}});
    }
  }
  if (total > 0) res.failures.push_back(std::to_string(total) + " concavity violations");
  out.json_file("concavity.json", rows);
  res.summary = {{"violations", total}, {"probes", rows.size()}};
  return res;
}

std::string metrics_csv(const std::vector<trainer::MetricRow>& rows) { return trainer::metrics_to_csv(rows); }

void write_heatmap(ArtifactWriter& out, const std::string& name, const Mat& samples, int bins,
                   const evaluation::GridBounds& bounds) {
  out.text(name, evaluation::grid_to_csv(evaluation::density_grid(samples, bounds, bins)));
}

CommandResult run_train_toy(const json& p, ArtifactWriter& out) {
  const trainer::TrainerConfig config = trainer::config_from_json(trainer_part(p));
  trainer::TrainOptions opt;
  opt.keep_final_state = p.at("save_final_checkpoint").get<bool>();
  if (config.checkpoint_interval > 0) {
    opt.checkpoint_dir = (fs::path(out.dir()) / "checkpoints").string();
    fs::create_directories(opt.checkpoint_dir);
  }
  const auto result = trainer::train(config, opt);

  out.text("metrics.csv", metrics_csv(result.metrics));
  out.json_file("final_eval.json", evaluation::to_json(result.final_report));
  for (const auto& path : result.checkpoints) out.add(fs::relative(path, out.dir()).string());
  if (opt.keep_final_state) {
    const std::string name = "final_checkpoint.json";
    trainer::Trainer::from_checkpoint_json(result.final_checkpoint).save_checkpoint((fs::path(out.dir()) / name).string());
    out.add(name);
  }
  // Heatmap and sample dump from the newest generator.
  const auto gen_spec = trainer::generator_spec(config);
  Rng noise = Rng::stream(config.seed, "heatmap");
  const Mat samples = nn::mlp_forward(gen_spec, result.final_gen,
                                      noise.normal_matrix(p.at("heatmap_samples").get<Eigen::Index>(), config.noise_dim))
                          .output();
  write_heatmap(out, "heatmap.csv", samples, p.at("heatmap_bins"), {});
  out.text("samples.csv", evaluation::samples_to_csv(samples, config.data));

  CommandResult res;
  res.summary = {{"method", trainer::to_string(config.method)},
                 {"steps", config.steps},
                 {"modes_covered", result.final_report.modes_covered},
                 {"reverse_kl", result.final_report.reverse_kl}};
  return res;
}

trainer::Trainer load_trainer(const json& p) { return trainer::Trainer::load_checkpoint(p.at("checkpoint")); }

CommandResult run_eval(const json& p, ArtifactWriter& out) {
  const auto tr = load_trainer(p);
  const std::uint64_t seed = p.at("seed");
  const Mat samples = tr.sample(p.at("samples").get<Eigen::Index>(), Rng::stream(seed, "eval_cmd").next_u64());
  auto report = evaluation::evaluate_samples(samples, tr.config().data);
  if (p.at("inference").get<bool>()) {
    const Mat targets = evaluation::sample_ring_mixture(tr.config().data, p.at("inference_targets").get<Eigen::Index>(),
                                                        Rng::stream(seed, "eval_targets").next_u64());
    evaluation::InferenceOptions io;
    io.seed = Rng::stream(seed, "eval_inference").next_u64();
    report.mse = evaluation::inference_via_opt(tr.gen().spec, tr.gen().params, targets, io).mean_mse;
  }
  json j = evaluation::to_json(report);
  j["step"] = tr.t();
  out.json_file("eval.json", j);
  out.text("samples.csv", evaluation::samples_to_csv(samples, tr.config().data));
  CommandResult res;
  res.summary = j;
  return res;
}

CommandResult run_heatmap(const json& p, ArtifactWriter& out) {
  const auto tr = load_trainer(p);
  const Mat samples = tr.sample(p.at("samples").get<Eigen::Index>(), Rng::stream(p.at("seed"), "heatmap_cmd").next_u64());
  evaluation::GridBounds b{p.at("x_min"), p.at("x_max"), p.at("y_min"), p.at("y_max")};
  write_heatmap(out, "heatmap.csv", samples, p.at("bins"), b);
  CommandResult res;
  res.summary = {{"bins", p.at("bins")}, {"samples", samples.rows()}};
  return res;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"solve-matrix", "solve-semiconcave", "regret-audit", "check-concavity",
                                              "train-toy",    "eval",              "heatmap"};
  return names;
}

std::string command_summary(const std::string& command) {
  if (command == "solve-matrix") return "Equilibrium of a matrix game by multiplicative-weights self-play";
  if (command == "solve-semiconcave") return "Equilibrium of a synthetic semi-concave game (FTL vs. linearized FTRL)";
  if (command == "regret-audit") return "Per-round regret ledger of a self-play run";
  if (command == "check-concavity") return "Midpoint-concavity probe of shallow discriminator payoffs";
  if (command == "train-toy") return "Train a vanilla or Chekhov GAN on the Gaussian ring";
  if (command == "eval") return "Mode coverage and reverse KL of a saved generator";
  if (command == "heatmap") return "Sample-density grid of a saved generator";
  throw ValidationError("unknown command '" + command + "'");
}

json default_params(const std::string& command) {
  if (command == "solve-matrix")
    return {{"game", "rps"}, {"csv", ""},  {"rows", 5}, {"cols", 5}, {"T", 10000},
            {"eta", nullptr}, {"audit_at", {10, 100, 1000}}, {"ledger", false}, {"seed", 0}};
  if (command == "solve-semiconcave")
    return {{"dim_u", 1}, {"dim_v", 1}, {"T", 1024}, {"audit_at", json::array()}, {"max_stored_points", 100000},
            {"seed", 0}};
  if (command == "regret-audit")
    return {{"game", "bilinear"}, {"csv", ""}, {"rows", 5}, {"cols", 5}, {"dim_u", 1}, {"dim_v", 1}, {"T", 1000},
            {"seed", 0}};
  if (command == "check-concavity")
    return {{"trials", 1000}, {"links", {"sigmoid", "probit"}}, {"radius", 3.0}, {"batch", 256}, {"seed", 0}};
  if (command == "train-toy") {
    json j = trainer::to_json(trainer::TrainerConfig{});
    j.update(train_extras());
    return j;
  }
  if (command == "eval")
    return {{"checkpoint", ""}, {"samples", 2000}, {"inference", false}, {"inference_targets", 100}, {"seed", 0}};
  if (command == "heatmap")
    return {{"checkpoint", ""}, {"bins", 100}, {"samples", 10000}, {"x_min", -1.5}, {"x_max", 1.5},
            {"y_min", -1.5},    {"y_max", 1.5}, {"seed", 0}};
  throw ValidationError("unknown command '" + command + "'");
}

json parse_flag_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file " + path + ": " + e.what());
  }
}

std::string default_out_dir() {
  const char* env = std::getenv("CHEKHOV_OUT_DIR");
  return env && *env ? std::string(env) : std::string("chekhov_out");
}

RunConfig parse_config(const std::string& command, const std::optional<json>& file, const json& overrides,
                       const std::string& out_dir) {
  RunConfig rc;
  rc.command = command;
  rc.params = default_params(command);
  if (file) merge_checked(rc.params, *file, "");
  merge_checked(rc.params, expand_dotted(overrides), "");
  validate(command, rc.params);
  rc.out_dir = out_dir.empty() ? (fs::path(default_out_dir()) / command).string() : out_dir;
  return rc;
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return hex64(fnv1a64(bytes));
}

json RunManifest::to_json() const {
  json arts = json::array();
  for (const auto& a : artifacts) arts.push_back({{"path", a.path}, {"checksum", a.checksum}, {"bytes", a.bytes}});
  return {{"command", command},   {"config", config},        {"tool_version", tool_version},
          {"started_at", started_at}, {"finished_at", finished_at}, {"exit_code", exit_code},
          {"failures", failures}, {"checksum_algorithm", "fnv1a64"}, {"artifacts", arts}};
}

RunOutcome run(const std::string& command, const json& params, const std::string& run_dir) {
  RunOutcome outcome;
  outcome.run_dir = run_dir;
  RunManifest& m = outcome.manifest;
  m.command = command;
  m.config = params;
  m.tool_version = CHEKHOV_VERSION;
  m.started_at = now_iso();

  ArtifactWriter out(run_dir);
  CommandResult res;
  if (command == "solve-matrix") res = run_solve_matrix(params, out);
  else if (command == "solve-semiconcave") res = run_solve_semiconcave(params, out);
  else if (command == "regret-audit") res = run_regret_audit(params, out);
  else if (command == "check-concavity") res = run_check_concavity(params, out);
  else if (command == "train-toy") res = run_train_toy(params, out);
  else if (command == "eval") res = run_eval(params, out);
  else if (command == "heatmap") res = run_heatmap(params, out);
  else throw ValidationError("unknown command '" + command + "'");

  res.summary["failures"] = res.failures;
  out.json_file("summary.json", res.summary);
  m.failures = res.failures;
  m.exit_code = res.failures.empty() ? kOk : kAcceptanceFailure;
  m.artifacts = out.take();
  m.finished_at = now_iso();
  std::ofstream mf(fs::path(run_dir) / "manifest.json");
  mf << m.to_json().dump(2) << '\n';
  if (!mf) throw Error("cannot write manifest in " + run_dir);

  outcome.exit_code = m.exit_code;
  outcome.summary = std::move(res.summary);
  return outcome;
}

namespace {
struct SeedRun {
  int code = kOk;
  std::string message;
};

SeedRun guarded_run(const std::string& command, const json& params, const std::string& dir) {
  try {
    const auto outcome = run(command, params, dir);
    return {outcome.exit_code, outcome.summary.dump() + "  (" + dir + ")"};
  } catch (const ValidationError& e) {
    return {kValidationError, std::string("validation error: ") + e.what()};
  } catch (const trainer::ConfigError& e) {
    return {kValidationError, std::string("validation error: ") + e.what()};
  } catch (const std::exception& e) {
    return {kRuntimeError, std::string("error: ") + e.what()};
  }
}
}  // namespace

int execute(const RunConfig& config, std::ostream& log) {
  if (config.seeds.empty()) {
    const auto r = guarded_run(config.command, config.params, config.out_dir);
    log << r.message << '\n';
    return r.code;
  }
  std::vector<std::future<SeedRun>> jobs;
  for (const auto seed : config.seeds) {
    json p = config.params;
    p["seed"] = seed;
    const std::string dir = (fs::path(config.out_dir) / ("seed_" + std::to_string(seed))).string();
    jobs.push_back(std::async(std::launch::async, guarded_run, config.command, p, dir));
  }
  int worst = kOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto r = jobs[i].get();
    log << "seed " << config.seeds[i] << ": " << r.message << '\n';
    worst = std::max(worst, r.code);
  }
  return worst;
}

bool verify_manifest(const std::string& manifest_path, std::string* problem) {
  auto fail = [&](const std::string& why) {
    if (problem) *problem = why;
    return false;
  };
  std::ifstream in(manifest_path);
  if (!in) return fail("cannot read " + manifest_path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::parse_error& e) {
    return fail(e.what());
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  for (const auto& a : m.at("artifacts")) {
    const fs::path p = dir / a.at("path").get<std::string>();
    if (!fs::exists(p)) return fail("missing artifact " + p.string());
    if (file_checksum(p.string()) != a.at("checksum").get<std::string>()) return fail("checksum mismatch for " + p.string());
  }
  return true;
}

}  // namespace chekhov::cli
