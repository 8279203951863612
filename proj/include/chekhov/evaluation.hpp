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

// Toy 2-D Gaussian-ring data and the metrics used to judge mode collapse.

#ifndef CHEKHOV_EVALUATION_HPP_
#define CHEKHOV_EVALUATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chekhov/common.hpp"
#include "chekhov/nn.hpp"

namespace chekhov::evaluation {

struct RingMixtureSpec {
  int n_modes = 7;
  double radius = 1.0;
  double stddev = 0.01;
  Vec probs;           // empty means uniform
  double phase = 0.0;  // rotation of the whole ring, radians

  static RingMixtureSpec uniform(int n_modes, double radius = 1.0, double stddev = 0.01);
  static RingMixtureSpec weighted(Vec probs, double radius = 1.0, double stddev = 0.01);

  void validate() const;
  Vec mode_probs() const;
  // n_modes x 2, mode k at angle phase + 2 pi k / n_modes.
  Mat means() const;
};

// n x 2 samples; `labels` receives the generating mode of each row.
Mat sample_ring_mixture(const RingMixtureSpec& spec, Eigen::Index n, std::uint64_t seed,
                        std::vector<int>* labels = nullptr);

// Streaming sampler used as the training data source.
class RingSampler {
 public:
  RingSampler(RingMixtureSpec spec, Rng rng);
  Mat next_batch(Eigen::Index n);
  const RingMixtureSpec& spec() const { return spec_; }
  const Rng& rng() const { return rng_; }
  void set_rng(Rng rng) { rng_ = rng; }

 private:
  RingMixtureSpec spec_;
  Rng rng_;
  Vec probs_;
  Mat means_;
};

// Index of the nearest mode mean for every sample row (lowest index on ties).
std::vector<int> assign_modes(const Mat& samples, const RingMixtureSpec& spec);

struct CoverageThresholds {
  std::optional<double> dist_threshold;  // default 10 * stddev
  double frac_threshold = 0.02;
};

struct Coverage {
  int covered = 0;
  Vec fractions;
  Vec median_distance;  // NaN for modes with no samples
};

Coverage mode_coverage(const Mat& samples, const RingMixtureSpec& spec, const CoverageThresholds& thresholds = {});

// KL(p_hat || uniform) over modes with p_hat from nearest-mode assignment.
double reverse_kl(const Mat& samples, const RingMixtureSpec& spec);
double reverse_kl_from_fractions(const Vec& fractions);

struct EvalReport {
  int n_modes = 0;
  int modes_covered = 0;
  Vec fractions;
  Vec median_distance;  // NaN for modes with no assigned sample
  double reverse_kl = 0.0;
  std::optional<double> mse;
};

EvalReport evaluate_samples(const Mat& samples, const RingMixtureSpec& spec, const CoverageThresholds& thresholds = {});
nlohmann::json to_json(const EvalReport& report);

struct InferenceResult {
  double mean_mse = 0.0;
  Vec per_target;           // best MSE found per target
  int discarded_restarts = 0;
};

struct InferenceOptions {
  int steps = 200;
  int restarts = 3;
  double lr = 0.05;
  std::uint64_t seed = 0;
};

// For each target x, minimizes ||G(z) - x||^2 / dim over z by Adam from
// `restarts` random starts and keeps the best value.
InferenceResult inference_via_opt(const nn::MlpSpec& gen_spec, const nn::ParamVector& gen, const Mat& targets,
                                  const InferenceOptions& options);

struct GridBounds {
  double x_min = -1.5, x_max = 1.5, y_min = -1.5, y_max = 1.5;
};

// bins x bins counts; row r covers the r-th y interval from y_min upward,
// column c the c-th x interval. The upper edges are inclusive.
Eigen::MatrixXi density_grid(const Mat& samples, const GridBounds& bounds, int bins);

std::string grid_to_csv(const Eigen::MatrixXi& grid);
// Columns x, y, assigned_mode.
std::string samples_to_csv(const Mat& samples, const RingMixtureSpec& spec);

}  // namespace chekhov::evaluation

#endif  // CHEKHOV_EVALUATION_HPP_
