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

// Practical history-averaged GAN training: each player follows the
// gradient of its average payoff against a short queue of the opponent's
// past parameter snapshots, plus a 1/sqrt(t)-decaying L2 term.

#ifndef CHEKHOV_TRAINER_HPP_
#define CHEKHOV_TRAINER_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chekhov/common.hpp"
#include "chekhov/evaluation.hpp"
#include "chekhov/gan.hpp"
#include "chekhov/nn.hpp"

namespace chekhov::trainer {

struct Snapshot {
  nn::ParamVector params;
  std::int64_t step = 0;
};

// Fixed-capacity history, newest first.
//
// At a switch step the current snapshot is pushed to the front (evicting
// the oldest one only when full) and the spacing grows by `increment`;
// between switches the front slot is overwritten. A switch happens once
// `spacing` steps have passed since the previous one.
//
// With `literal` set the queue follows the printed pseudo-code instead:
// switch iff t mod spacing == 0 AND the queue is already full, which
// keeps a queue that starts with one entry at one entry forever.
class ModelQueue {
 public:
  ModelQueue(int capacity, std::int64_t spacing, std::int64_t increment, bool literal = false);

  // Empties the queue and stores the initial snapshot.
  void reset(Snapshot initial);
  // Returns true when step t was a switch step.
  bool update(Snapshot snapshot, std::int64_t t);

  const std::deque<Snapshot>& snapshots() const { return items_; }
  std::size_t size() const { return items_.size(); }
  int capacity() const { return capacity_; }
  std::int64_t spacing() const { return spacing_; }
  std::int64_t increment() const { return increment_; }
  std::int64_t switches() const { return switches_; }
  std::int64_t last_switch() const { return last_switch_; }
  bool literal() const { return literal_; }

  nlohmann::json to_json() const;
  static ModelQueue from_json(const nlohmann::json& j, const nn::ParamVector& shape);

 private:
  int capacity_;
  std::int64_t spacing_;
  std::int64_t increment_;
  bool literal_;
  std::int64_t switches_ = 0;
  std::int64_t last_switch_ = 0;
  std::deque<Snapshot> items_;
};

enum class Method { kVanilla, kChekhov };
enum class GenerationMode { kNewestOnly, kMixture };

std::string to_string(Method m);
Method method_from_string(const std::string& s);
std::string to_string(GenerationMode g);
GenerationMode generation_mode_from_string(const std::string& s);

struct TrainerConfig {
  Method method = Method::kChekhov;
  int capacity = 5;                      // K
  std::int64_t updates_per_epoch = 100;  // N, used when m_init == 0
  std::int64_t m_init = 0;               // 0 means N / K
  std::int64_t inc = 10;
  double reg_coefficient = 0.01;
  bool literal_queue = false;

  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int batch_size = 64;
  std::int64_t steps = 15000;

  int noise_dim = 256;
  int hidden_units = 128;
  int hidden_layers = 2;
  double init_scale = 0.8;
  gan::ObjectiveVariant variant = gan::ObjectiveVariant::kCrossEntropy;

  evaluation::RingMixtureSpec data = evaluation::RingMixtureSpec::uniform(7);

  GenerationMode generation = GenerationMode::kNewestOnly;
  std::int64_t eval_interval = 1000;
  int eval_samples = 2000;
  std::int64_t checkpoint_interval = 0;  // 0 disables periodic checkpoints
  std::uint64_t seed = 0;

  std::int64_t initial_spacing() const;
  // Throws ConfigError.
  void validate() const;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  enum class Kind { kIo, kCorrupt, kVersion };
  CheckpointError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

nlohmann::json to_json(const TrainerConfig& config);
// Unknown keys and bad values raise ConfigError naming the field path.
TrainerConfig config_from_json(const nlohmann::json& j, const TrainerConfig& defaults = {});

nn::MlpSpec generator_spec(const TrainerConfig& config);
nn::MlpSpec discriminator_spec(const TrainerConfig& config);

struct PlayerState {
  nn::MlpSpec spec;
  nn::ParamVector params;
  nn::AdamState adam;
};

struct StepBatches {
  Mat data;
  Mat noise;
};

struct StepGradients {
  nn::ParamVector gen;   // descent direction for the generator
  nn::ParamVector disc;  // descent direction for the discriminator (negated ascent)
};

// Gradients of one history-averaged step without applying them.
// `disc_history` holds discriminator snapshots (used by the generator) and
// `gen_history` generator snapshots (used by the discriminator).
StepGradients chekhov_gradients(const PlayerState& gen, const PlayerState& disc, const ModelQueue& disc_history,
                                const ModelQueue& gen_history, const StepBatches& batches, std::int64_t t,
                                double reg_coefficient, gan::ObjectiveVariant variant);

// Applies one step and then records the new parameters in both queues.
void chekhov_step(PlayerState& gen, PlayerState& disc, ModelQueue& disc_history, ModelQueue& gen_history,
                  const StepBatches& batches, std::int64_t t, double reg_coefficient, gan::ObjectiveVariant variant);

StepGradients vanilla_gradients(const PlayerState& gen, const PlayerState& disc, const StepBatches& batches,
                                gan::ObjectiveVariant variant);

// Simultaneous single-opponent gradient step for both players.
void vanilla_step(PlayerState& gen, PlayerState& disc, const StepBatches& batches, gan::ObjectiveVariant variant);

struct MetricRow {
  std::int64_t step = 0;
  double gan_value = 0.0;
  double reverse_kl = 0.0;
  int modes_covered = 0;
};

std::string metrics_to_csv(const std::vector<MetricRow>& rows);

class Trainer {
 public:
  explicit Trainer(TrainerConfig config);

  // Runs one training step; non-finite values raise NonFiniteError with
  // the step index.
  void step();
  void run_until(std::int64_t step);

  std::int64_t t() const { return t_; }
  const TrainerConfig& config() const { return config_; }
  const PlayerState& gen() const { return gen_; }
  const PlayerState& disc() const { return disc_; }
  const ModelQueue& disc_history() const { return disc_history_; }
  const ModelQueue& gen_history() const { return gen_history_; }

  // Samples from the newest generator or the snapshot mixture per config.
  Mat sample(Eigen::Index n, std::uint64_t seed) const;
  MetricRow evaluate() const;

  nlohmann::json checkpoint_json() const;
  static Trainer from_checkpoint_json(const nlohmann::json& doc);
  void save_checkpoint(const std::string& path) const;
  static Trainer load_checkpoint(const std::string& path);

 private:
  TrainerConfig config_;
  std::int64_t t_ = 0;
  PlayerState gen_;
  PlayerState disc_;
  ModelQueue disc_history_;
  ModelQueue gen_history_;
  evaluation::RingSampler data_;
  Rng noise_rng_;
};

struct TrainResult {
  std::vector<MetricRow> metrics;
  evaluation::EvalReport final_report;
  nn::ParamVector final_gen;
  nn::ParamVector final_disc;
  std::vector<std::string> checkpoints;
  nlohmann::json final_checkpoint;  // filled when TrainOptions::keep_final_state
};

struct TrainOptions {
  std::string checkpoint_dir;  // empty disables writing checkpoints
  std::function<void(const MetricRow&)> on_metric;
  bool keep_final_state = false;
};

TrainResult train(const TrainerConfig& config, const TrainOptions& options = {});

}  // namespace chekhov::trainer

#endif  // CHEKHOV_TRAINER_HPP_
