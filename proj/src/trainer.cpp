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

#include "chekhov/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chekhov::trainer {

using nlohmann::json;

namespace {
constexpr int kCheckpointVersion = 1;
constexpr const char* kCheckpointFormat = "chekhov-checkpoint";

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec vec_from_json(const json& j) {
  const auto xs = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}
}  // namespace

// ---------------------------------------------------------------------------
// ModelQueue

ModelQueue::ModelQueue(int capacity, std::int64_t spacing, std::int64_t increment, bool literal)
    : capacity_(capacity), spacing_(spacing), increment_(increment), literal_(literal) {
  if (capacity < 1) throw ConfigError("queue capacity must be >= 1");
  if (spacing < 1) throw ConfigError("queue spacing must be >= 1");
  if (increment < 0) throw ConfigError("queue spacing increment must be >= 0");
}

void ModelQueue::reset(Snapshot initial) {
  items_.clear();
  items_.push_back(std::move(initial));
}

bool ModelQueue::update(Snapshot snapshot, std::int64_t t) {
  if (t < 1) throw Error("queue update needs t >= 1");
  if (items_.empty()) {
    items_.push_back(std::move(snapshot));
    return false;
  }
  const bool full = static_cast<int>(items_.size()) == capacity_;
  const bool is_switch = literal_ ? (t % spacing_ == 0 && full) : (t - last_switch_ == spacing_);
  if (!is_switch) {
    items_.front() = std::move(snapshot);
    return false;
  }
  if (full) items_.pop_back();
  items_.push_front(std::move(snapshot));
  spacing_ += increment_;
  last_switch_ = t;
  ++switches_;
  return true;
}

json ModelQueue::to_json() const {
  json snaps = json::array();
  for (const auto& s : items_) snaps.push_back({{"step", s.step}, {"flat", vec_json(s.params.flat)}});
  return {{"capacity", capacity_},  {"spacing", spacing_},         {"increment", increment_},
          {"literal", literal_},    {"switches", switches_},       {"last_switch", last_switch_},
          {"snapshots", snaps}};
}

ModelQueue ModelQueue::from_json(const json& j, const nn::ParamVector& shape) {
  ModelQueue q(j.at("capacity").get<int>(), j.at("spacing").get<std::int64_t>(),
               j.at("increment").get<std::int64_t>(), j.at("literal").get<bool>());
  q.switches_ = j.at("switches").get<std::int64_t>();
  q.last_switch_ = j.at("last_switch").get<std::int64_t>();
  for (const auto& s : j.at("snapshots")) {
    Snapshot snap{shape.zeros_like(), s.at("step").get<std::int64_t>()};
    snap.params.flat = vec_from_json(s.at("flat"));
    require_dims(snap.params.flat.size() == shape.size(), "queue snapshot has the wrong parameter count");
    q.items_.push_back(std::move(snap));
  }
  if (q.items_.empty() || static_cast<int>(q.items_.size()) > q.capacity_)
    throw Error("queue snapshot count outside [1, capacity]");
  return q;
}

// ---------------------------------------------------------------------------
// Config

std::string to_string(Method m) { return m == Method::kVanilla ? "vanilla" : "chekhov"; }

Method method_from_string(const std::string& s) {
  if (s == "vanilla") return Method::kVanilla;
  if (s == "chekhov") return Method::kChekhov;
  throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(GenerationMode g) { return g == GenerationMode::kNewestOnly ? "newest_only" : "mixture"; }

GenerationMode generation_mode_from_string(const std::string& s) {
  if (s == "newest_only") return GenerationMode::kNewestOnly;
  if (s == "mixture") return GenerationMode::kMixture;
  throw ConfigError("unknown generation mode '" + s + "'");
}

std::int64_t TrainerConfig::initial_spacing() const {
  if (m_init > 0) return m_init;
  return std::max<std::int64_t>(1, updates_per_epoch / std::max(1, capacity));
}

void TrainerConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
  if (capacity < 1) fail("K", "capacity must be >= 1");
  if (m_init < 0) fail("m_init", "must be >= 1 (or 0 for N/K)");
  if (updates_per_epoch < 1) fail("updates_per_epoch", "must be >= 1");
  if (inc < 0) fail("inc", "must be >= 0");
  if (!(reg_coefficient >= 0.0)) fail("reg_coefficient", "must be >= 0");
  if (!(lr > 0.0)) fail("lr", "must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) fail("beta1", "must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) fail("beta2", "must be in [0, 1)");
  if (batch_size < 1) fail("batch_size", "must be >= 1");
  if (steps < 0) fail("steps", "must be >= 0");
  if (noise_dim < 1) fail("noise_dim", "must be >= 1");
  if (hidden_units < 1) fail("hidden_units", "must be >= 1");
  if (hidden_layers < 0) fail("hidden_layers", "must be >= 0");
  if (!(init_scale > 0.0)) fail("init_scale", "must be > 0");
  if (eval_interval < 0) fail("eval_interval", "must be >= 0");
  if (eval_samples < 1) fail("eval_samples", "must be >= 1");
  if (checkpoint_interval < 0) fail("checkpoint_interval", "must be >= 0");
  try {
    data.validate();
  } catch (const Error& e) {
    fail("data", e.what());
  }
}

json to_json(const TrainerConfig& c) {
  json data{{"n_modes", c.data.n_modes},
            {"radius", c.data.radius},
            {"stddev", c.data.stddev},
            {"probs", vec_json(c.data.probs)},
            {"phase", c.data.phase}};
  return {{"method", to_string(c.method)},
          {"K", c.capacity},
          {"updates_per_epoch", c.updates_per_epoch},
          {"m_init", c.m_init},
          {"inc", c.inc},
          {"reg_coefficient", c.reg_coefficient},
          {"literal_queue", c.literal_queue},
          {"lr", c.lr},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"batch_size", c.batch_size},
          {"steps", c.steps},
          {"noise_dim", c.noise_dim},
          {"hidden_units", c.hidden_units},
          {"hidden_layers", c.hidden_layers},
          {"init_scale", c.init_scale},
          {"variant", gan::to_string(c.variant)},
          {"data", data},
          {"generation", to_string(c.generation)},
          {"eval_interval", c.eval_interval},
          {"eval_samples", c.eval_samples},
          {"checkpoint_interval", c.checkpoint_interval},
          {"seed", c.seed}};
}

namespace {
template <typename T>
T field(const json& v, const std::string& path) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + ": wrong type (got " + std::string(v.type_name()) + ")");
  }
}
}  // namespace

TrainerConfig config_from_json(const json& j, const TrainerConfig& defaults) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  TrainerConfig c = defaults;
  for (const auto& [key, v] : j.items()) {
    if (key == "method") c.method = method_from_string(field<std::string>(v, key));
    else if (key == "K") c.capacity = field<int>(v, key);
    else if (key == "updates_per_epoch") c.updates_per_epoch = field<std::int64_t>(v, key);
    else if (key == "m_init") c.m_init = field<std::int64_t>(v, key);
    else if (key == "inc") c.inc = field<std::int64_t>(v, key);
    else if (key == "reg_coefficient") c.reg_coefficient = field<double>(v, key);
    else if (key == "literal_queue") c.literal_queue = field<bool>(v, key);
    else if (key == "lr") c.lr = field<double>(v, key);
    else if (key == "beta1") c.beta1 = field<double>(v, key);
    else if (key == "beta2") c.beta2 = field<double>(v, key);
    else if (key == "batch_size") c.batch_size = field<int>(v, key);
    else if (key == "steps") c.steps = field<std::int64_t>(v, key);
    else if (key == "noise_dim") c.noise_dim = field<int>(v, key);
    else if (key == "hidden_units") c.hidden_units = field<int>(v, key);
    else if (key == "hidden_layers") c.hidden_layers = field<int>(v, key);
    else if (key == "init_scale") c.init_scale = field<double>(v, key);
    else if (key == "variant") {
      try {
        c.variant = gan::variant_from_string(field<std::string>(v, key));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(std::string("variant: ") + e.what());
      }
    } else if (key == "generation") c.generation = generation_mode_from_string(field<std::string>(v, key));
    else if (key == "eval_interval") c.eval_interval = field<std::int64_t>(v, key);
    else if (key == "eval_samples") c.eval_samples = field<int>(v, key);
    else if (key == "checkpoint_interval") c.checkpoint_interval = field<std::int64_t>(v, key);
    else if (key == "seed") c.seed = field<std::uint64_t>(v, key);
    else if (key == "data") {
      if (!v.is_object()) throw ConfigError("data: expected an object");
      bool probs_given = false;
      for (const auto& [dk, dv] : v.items()) {
        const std::string path = "data." + dk;
        if (dk == "n_modes") c.data.n_modes = field<int>(dv, path);
        else if (dk == "radius") c.data.radius = field<double>(dv, path);
        else if (dk == "stddev") c.data.stddev = field<double>(dv, path);
        else if (dk == "phase") c.data.phase = field<double>(dv, path);
        else if (dk == "probs") {
          const auto p = field<std::vector<double>>(dv, path);
          c.data.probs = Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size()));
          probs_given = true;
        } else throw ConfigError(path + ": unknown key");
      }
      if (probs_given && c.data.probs.size() > 0 && !v.contains("n_modes"))
        c.data.n_modes = static_cast<int>(c.data.probs.size());
    } else throw ConfigError(key + ": unknown key");
  }
  c.validate();
  return c;
}

nn::MlpSpec generator_spec(const TrainerConfig& c) {
  return nn::MlpSpec::dense(c.noise_dim, std::vector<int>(static_cast<std::size_t>(c.hidden_layers), c.hidden_units),
                            nn::Activation::kTanh, 2, nn::Activation::kLinear, nn::InitKind::kOrthogonal,
                            c.init_scale);
}

nn::MlpSpec discriminator_spec(const TrainerConfig& c) {
  return nn::MlpSpec::dense(2, std::vector<int>(static_cast<std::size_t>(c.hidden_layers), c.hidden_units),
                            nn::Activation::kTanh, 1, nn::Activation::kLinear, nn::InitKind::kOrthogonal,
                            c.init_scale);
}

// ---------------------------------------------------------------------------
// Steps

namespace {
constexpr gan::Link kLink = gan::Link::kSigmoid;

void check_finite(const nn::ParamVector& g, const char* who) {
  if (!g.flat.allFinite()) throw NonFiniteError(std::string("non-finite ") + who + " gradient");
}
}  // namespace

StepGradients chekhov_gradients(const PlayerState& gen, const PlayerState& disc, const ModelQueue& disc_history,
                                const ModelQueue& gen_history, const StepBatches& batches, std::int64_t t,
                                double reg_coefficient, gan::ObjectiveVariant variant) {
  if (disc_history.size() == 0 || gen_history.size() == 0) throw Error("chekhov step needs non-empty queues");
  if (t < 1) throw Error("chekhov step needs t >= 1");

  // Generator: mean over discriminator snapshots of dM/du. The payoff is
  // linear in the per-sample gradient, so the snapshots are averaged at
  // the generator output and pulled back once.
  const auto gen_pass = nn::mlp_forward(gen.spec, gen.params, batches.noise);
  const Mat& fake = gen_pass.output();
  Mat sample_grad;
  for (const auto& snap : disc_history.snapshots()) {
    Mat g = gan::fake_sample_grad(disc.spec, snap.params, fake, variant, kLink);
    if (sample_grad.size() == 0) sample_grad = std::move(g);
    else sample_grad += g;
  }
  sample_grad /= static_cast<double>(disc_history.size());
  StepGradients out{gan::gen_grad_from_sample_grad(gen.spec, gen.params, gen_pass, sample_grad), {}};

  // Discriminator: mean over generator snapshots of dM/dv, negated for descent.
  nn::ParamVector fake_sum;
  for (const auto& snap : gen_history.snapshots()) {
    const Mat snap_fake = nn::mlp_forward(gen.spec, snap.params, batches.noise).output();
    nn::ParamVector g = gan::disc_fake_grad(disc.spec, disc.params, snap_fake, variant, kLink);
    if (fake_sum.size() == 0) fake_sum = std::move(g);
    else fake_sum.flat += g.flat;
  }
  fake_sum.flat /= static_cast<double>(gen_history.size());
  out.disc = gan::disc_real_grad(disc.spec, disc.params, batches.data, variant, kLink);
  out.disc.flat += fake_sum.flat;
  out.disc.flat = -out.disc.flat;

  if (reg_coefficient != 0.0) {
    const double scale = 2.0 * reg_coefficient / std::sqrt(static_cast<double>(t));
    out.gen.flat += scale * gen.params.flat;
    out.disc.flat += scale * disc.params.flat;
  }
  check_finite(out.gen, "generator");
  check_finite(out.disc, "discriminator");
  return out;
}

void chekhov_step(PlayerState& gen, PlayerState& disc, ModelQueue& disc_history, ModelQueue& gen_history,
                  const StepBatches& batches, std::int64_t t, double reg_coefficient, gan::ObjectiveVariant variant) {
  const StepGradients g =
      chekhov_gradients(gen, disc, disc_history, gen_history, batches, t, reg_coefficient, variant);
  nn::adam_step(gen.adam, gen.params, g.gen);
  nn::adam_step(disc.adam, disc.params, g.disc);
  disc_history.update({disc.params, t}, t);
  gen_history.update({gen.params, t}, t);
}

StepGradients vanilla_gradients(const PlayerState& gen, const PlayerState& disc, const StepBatches& batches,
                                gan::ObjectiveVariant variant) {
  const auto gen_pass = nn::mlp_forward(gen.spec, gen.params, batches.noise);
  const Mat& fake = gen_pass.output();
  const Mat sample_grad = gan::fake_sample_grad(disc.spec, disc.params, fake, variant, kLink);
  StepGradients out{gan::gen_grad_from_sample_grad(gen.spec, gen.params, gen_pass, sample_grad), {}};
  const nn::ParamVector fake_grad = gan::disc_fake_grad(disc.spec, disc.params, fake, variant, kLink);
  out.disc = gan::disc_real_grad(disc.spec, disc.params, batches.data, variant, kLink);
  out.disc.flat += fake_grad.flat;
  out.disc.flat = -out.disc.flat;
  check_finite(out.gen, "generator");
  check_finite(out.disc, "discriminator");
  return out;
}

void vanilla_step(PlayerState& gen, PlayerState& disc, const StepBatches& batches, gan::ObjectiveVariant variant) {
  const StepGradients g = vanilla_gradients(gen, disc, batches, variant);
  nn::adam_step(gen.adam, gen.params, g.gen);
  nn::adam_step(disc.adam, disc.params, g.disc);
}

std::string metrics_to_csv(const std::vector<MetricRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "step,gan_value,reverse_kl,modes_covered\n";
  for (const auto& r : rows) os << r.step << ',' << r.gan_value << ',' << r.reverse_kl << ',' << r.modes_covered << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Trainer

namespace {
PlayerState make_player(const nn::MlpSpec& spec, std::uint64_t seed, const TrainerConfig& c) {
  PlayerState p{spec, nn::init_params(spec, seed), {}};
  p.adam = nn::AdamState::for_params(p.params.size(), c.lr, c.beta1, c.beta2);
  return p;
}
}  // namespace

Trainer::Trainer(TrainerConfig config)
    : config_((config.validate(), std::move(config))),
      gen_(make_player(generator_spec(config_), Rng::stream(config_.seed, "init_gen").next_u64(), config_)),
      disc_(make_player(discriminator_spec(config_), Rng::stream(config_.seed, "init_disc").next_u64(), config_)),
      disc_history_(config_.capacity, config_.initial_spacing(), config_.inc, config_.literal_queue),
      gen_history_(config_.capacity, config_.initial_spacing(), config_.inc, config_.literal_queue),
      data_(config_.data, Rng::stream(config_.seed, "data")),
      noise_rng_(Rng::stream(config_.seed, "noise")) {
  disc_history_.reset({disc_.params, 0});
  gen_history_.reset({gen_.params, 0});
}

void Trainer::step() {
  const std::int64_t t = t_ + 1;
  StepBatches batches{data_.next_batch(config_.batch_size), noise_rng_.normal_matrix(config_.batch_size, config_.noise_dim)};
  try {
    if (config_.method == Method::kVanilla)
      vanilla_step(gen_, disc_, batches, config_.variant);
    else
      chekhov_step(gen_, disc_, disc_history_, gen_history_, batches, t, config_.reg_coefficient, config_.variant);
  } catch (const NonFiniteError& e) {
    throw NonFiniteError("training aborted at step " + std::to_string(t) + ": " + e.what());
  }
  t_ = t;
}

void Trainer::run_until(std::int64_t step) {
  while (t_ < step) this->step();
}

Mat Trainer::sample(Eigen::Index n, std::uint64_t seed) const {
  Rng rng(seed);
  const Mat z = rng.normal_matrix(n, config_.noise_dim);
  if (config_.generation == GenerationMode::kNewestOnly || config_.method == Method::kVanilla)
    return nn::mlp_forward(gen_.spec, gen_.params, z).output();
  // Mixture: each row is drawn from a uniformly chosen stored generator.
  const auto& snaps = gen_history_.snapshots();
  Mat out(n, 2);
  std::vector<std::vector<Eigen::Index>> rows_for(snaps.size());
  for (Eigen::Index i = 0; i < n; ++i) rows_for[rng.next_u64() % snaps.size()].push_back(i);
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    if (rows_for[s].empty()) continue;
    Mat zs(static_cast<Eigen::Index>(rows_for[s].size()), config_.noise_dim);
    for (std::size_t k = 0; k < rows_for[s].size(); ++k) zs.row(static_cast<Eigen::Index>(k)) = z.row(rows_for[s][k]);
    const Mat xs = nn::mlp_forward(gen_.spec, snaps[s].params, zs).output();
    for (std::size_t k = 0; k < rows_for[s].size(); ++k) out.row(rows_for[s][k]) = xs.row(static_cast<Eigen::Index>(k));
  }
  return out;
}

MetricRow Trainer::evaluate() const {
  const std::uint64_t eval_seed = Rng::stream(config_.seed, "eval").next_u64();
  const Mat samples = sample(config_.eval_samples, eval_seed);
  const auto report = evaluation::evaluate_samples(samples, config_.data);
  Rng data_rng = Rng::stream(config_.seed, "eval_data");
  evaluation::RingSampler data(config_.data, data_rng);
  const Mat real = data.next_batch(config_.eval_samples);
  Rng noise_rng = Rng::stream(config_.seed, "eval_noise");
  const Mat z = noise_rng.normal_matrix(config_.eval_samples, config_.noise_dim);
  gan::GanObjectiveConfig obj{gen_.spec, gen_.params, disc_.spec, disc_.params, config_.variant, kLink};
  return {t_, gan::gan_value(obj, real, z), report.reverse_kl, report.modes_covered};
}

nlohmann::json Trainer::checkpoint_json() const {
  auto adam_json = [](const nn::AdamState& a) {
    return json{{"m", vec_json(a.m)},   {"v", vec_json(a.v)},         {"step", a.step},
                {"lr", a.lr},           {"beta1", a.beta1},           {"beta2", a.beta2},
                {"epsilon", a.epsilon}};
  };
  json payload{{"config", to_json(config_)},
               {"step", t_},
               {"gen", nn::params_to_json(gen_.spec, gen_.params)},
               {"disc", nn::params_to_json(disc_.spec, disc_.params)},
               {"adam_gen", adam_json(gen_.adam)},
               {"adam_disc", adam_json(disc_.adam)},
               {"gen_history", gen_history_.to_json()},
               {"disc_history", disc_history_.to_json()},
               {"rng", {{"data", data_.rng().serialize()}, {"noise", noise_rng_.serialize()}}}};
  const std::string body = payload.dump();
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"checksum", hex64(fnv1a64(body))},
          {"payload", std::move(payload)}};
}

Trainer Trainer::from_checkpoint_json(const json& doc) {
  using Kind = CheckpointError::Kind;
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) throw CheckpointError(Kind::kCorrupt, "not a checkpoint");
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw CheckpointError(Kind::kVersion, "checkpoint version " + std::to_string(version) + " is not supported");
    const json& payload = doc.at("payload");
    if (hex64(fnv1a64(payload.dump())) != doc.at("checksum").get<std::string>())
      throw CheckpointError(Kind::kCorrupt, "checkpoint checksum mismatch");

    Trainer tr(config_from_json(payload.at("config")));
    tr.t_ = payload.at("step").get<std::int64_t>();
    tr.gen_.params = nn::params_from_json(payload.at("gen"));
    tr.disc_.params = nn::params_from_json(payload.at("disc"));
    nn::check_params(tr.gen_.spec, tr.gen_.params);
    nn::check_params(tr.disc_.spec, tr.disc_.params);
    auto load_adam = [](const json& j, nn::AdamState& a) {
      a.m = vec_from_json(j.at("m"));
      a.v = vec_from_json(j.at("v"));
      a.step = j.at("step").get<std::int64_t>();
      a.lr = j.at("lr").get<double>();
      a.beta1 = j.at("beta1").get<double>();
      a.beta2 = j.at("beta2").get<double>();
      a.epsilon = j.at("epsilon").get<double>();
    };
    load_adam(payload.at("adam_gen"), tr.gen_.adam);
    load_adam(payload.at("adam_disc"), tr.disc_.adam);
    tr.gen_history_ = ModelQueue::from_json(payload.at("gen_history"), tr.gen_.params);
    tr.disc_history_ = ModelQueue::from_json(payload.at("disc_history"), tr.disc_.params);
    tr.data_.set_rng(Rng::deserialize(payload.at("rng").at("data").get<std::string>()));
    tr.noise_rng_ = Rng::deserialize(payload.at("rng").at("noise").get<std::string>());
    return tr;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(Kind::kCorrupt, std::string("malformed checkpoint: ") + e.what());
  }
}

void Trainer::save_checkpoint(const std::string& path) const {
  const std::string text = checkpoint_json().dump();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CheckpointError(CheckpointError::Kind::kIo, "cannot write " + tmp);
    f << text;
    if (!f) throw CheckpointError(CheckpointError::Kind::kIo, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(CheckpointError::Kind::kIo, "cannot move checkpoint into place: " + ec.message());
}

Trainer Trainer::load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError(CheckpointError::Kind::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw CheckpointError(CheckpointError::Kind::kCorrupt, std::string("corrupt checkpoint: ") + e.what());
  }
  return from_checkpoint_json(doc);
}

TrainResult train(const TrainerConfig& config, const TrainOptions& options) {
  Trainer tr(config);
  TrainResult result;
  auto record = [&] {
    result.metrics.push_back(tr.evaluate());
    if (options.on_metric) options.on_metric(result.metrics.back());
  };
  while (tr.t() < config.steps) {
    tr.step();
    if (config.eval_interval > 0 && tr.t() % config.eval_interval == 0) record();
    if (!options.checkpoint_dir.empty() && config.checkpoint_interval > 0 && tr.t() % config.checkpoint_interval == 0) {
      const std::string path =
          (std::filesystem::path(options.checkpoint_dir) / ("checkpoint_" + std::to_string(tr.t()) + ".json")).string();
      tr.save_checkpoint(path);
      result.checkpoints.push_back(path);
    }
  }
  if (result.metrics.empty() || result.metrics.back().step != tr.t()) record();
  const Mat samples = tr.sample(config.eval_samples, Rng::stream(config.seed, "eval").next_u64());
  result.final_report = evaluation::evaluate_samples(samples, config.data);
  result.final_gen = tr.gen().params;
  result.final_disc = tr.disc().params;
  if (options.keep_final_state) result.final_checkpoint = tr.checkpoint_json();
  return result;
}

}  // namespace chekhov::trainer
