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

#include "chekhov/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chekhov::evaluation {

RingMixtureSpec RingMixtureSpec::uniform(int n_modes, double radius, double stddev) {
  RingMixtureSpec s;
  s.n_modes = n_modes;
  s.radius = radius;
  s.stddev = stddev;
  return s;
}

RingMixtureSpec RingMixtureSpec::weighted(Vec probs, double radius, double stddev) {
  RingMixtureSpec s;
  s.n_modes = static_cast<int>(probs.size());
  s.radius = radius;
  s.stddev = stddev;
  s.probs = std::move(probs);
  return s;
}

void RingMixtureSpec::validate() const {
  if (n_modes < 1) throw DimensionError("ring mixture needs at least one mode");
  if (!(stddev > 0.0)) throw Error("ring mixture stddev must be positive");
  if (!(radius >= 0.0)) throw Error("ring radius must be non-negative");
  if (probs.size() != 0) {
    require_dims(probs.size() == n_modes, "mode probability vector length differs from n_modes");
    if ((probs.array() < 0.0).any() || std::abs(probs.sum() - 1.0) > 1e-9)
      throw Error("mode probabilities must be non-negative and sum to 1");
  }
}

Vec RingMixtureSpec::mode_probs() const {
  if (probs.size() != 0) return probs;
  return Vec::Constant(n_modes, 1.0 / n_modes);
}

Mat RingMixtureSpec::means() const {
  Mat m(n_modes, 2);
  for (int k = 0; k < n_modes; ++k) {
    const double a = phase + 2.0 * M_PI * k / n_modes;
    m(k, 0) = radius * std::cos(a);
    m(k, 1) = radius * std::sin(a);
  }
  return m;
}

RingSampler::RingSampler(RingMixtureSpec spec, Rng rng) : spec_(std::move(spec)), rng_(rng) {
  spec_.validate();
  const Vec p = spec_.mode_probs();
  probs_ = p;
  means_ = spec_.means();
}

Mat RingSampler::next_batch(Eigen::Index n) {
  Mat out(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = rng_.categorical(probs_);
    out(i, 0) = means_(k, 0) + spec_.stddev * rng_.normal();
    out(i, 1) = means_(k, 1) + spec_.stddev * rng_.normal();
  }
  return out;
}

Mat sample_ring_mixture(const RingMixtureSpec& spec, Eigen::Index n, std::uint64_t seed, std::vector<int>* labels) {
  spec.validate();
  if (n < 1) throw EmptyInputError("sample count must be >= 1");
  Rng rng(seed);
  const Vec p = spec.mode_probs();
  const Mat means = spec.means();
  Mat out(n, 2);
  if (labels) labels->assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = rng.categorical(p);
    out(i, 0) = means(k, 0) + spec.stddev * rng.normal();
    out(i, 1) = means(k, 1) + spec.stddev * rng.normal();
    if (labels) (*labels)[static_cast<std::size_t>(i)] = static_cast<int>(k);
  }
  return out;
}

std::vector<int> assign_modes(const Mat& samples, const RingMixtureSpec& spec) {
  require_dims(samples.cols() == 2, "mode assignment expects 2-D samples");
  const Mat means = spec.means();
  std::vector<int> out(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.n_modes; ++k) {
      const double d = (samples.row(i) - means.row(k)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

Coverage mode_coverage(const Mat& samples, const RingMixtureSpec& spec, const CoverageThresholds& thresholds) {
  spec.validate();
  if (samples.rows() == 0) throw EmptyInputError("mode coverage of an empty sample set");
  const auto labels = assign_modes(samples, spec);
  const Mat means = spec.means();
  std::vector<std::vector<double>> dists(static_cast<std::size_t>(spec.n_modes));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const int k = labels[static_cast<std::size_t>(i)];
    dists[static_cast<std::size_t>(k)].push_back((samples.row(i) - means.row(k)).norm());
  }
  const double dist_thr = thresholds.dist_threshold.value_or(10.0 * spec.stddev);
  Coverage c;
  c.fractions = Vec::Zero(spec.n_modes);
  c.median_distance = Vec::Constant(spec.n_modes, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < spec.n_modes; ++k) {
    auto& d = dists[static_cast<std::size_t>(k)];
    c.fractions(k) = static_cast<double>(d.size()) / static_cast<double>(samples.rows());
    if (d.empty()) continue;
    std::sort(d.begin(), d.end());
    const std::size_t n = d.size();
    c.median_distance(k) = n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
    if (c.fractions(k) >= thresholds.frac_threshold && c.median_distance(k) <= dist_thr) ++c.covered;
  }
  return c;
}

double reverse_kl_from_fractions(const Vec& fractions) {
  const double n = static_cast<double>(fractions.size());
  double kl = 0.0;
  for (Eigen::Index i = 0; i < fractions.size(); ++i)
    if (fractions(i) > 0.0) kl += fractions(i) * std::log(fractions(i) * n);
  return std::max(0.0, kl);
}

double reverse_kl(const Mat& samples, const RingMixtureSpec& spec) {
  spec.validate();
  if (samples.rows() == 0) throw EmptyInputError("reverse KL of an empty sample set");
  const auto labels = assign_modes(samples, spec);
  Vec counts = Vec::Zero(spec.n_modes);
  for (int k : labels) counts(k) += 1.0;
  return reverse_kl_from_fractions(counts / static_cast<double>(samples.rows()));
}

EvalReport evaluate_samples(const Mat& samples, const RingMixtureSpec& spec, const CoverageThresholds& thresholds) {
  const Coverage c = mode_coverage(samples, spec, thresholds);
  EvalReport r;
  r.n_modes = spec.n_modes;
  r.modes_covered = c.covered;
  r.fractions = c.fractions;
  r.median_distance = c.median_distance;
  r.reverse_kl = reverse_kl_from_fractions(c.fractions);
  return r;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j{{"n_modes", report.n_modes},
                   {"modes_covered", report.modes_covered},
                   {"fractions", std::vector<double>(report.fractions.data(),
                                                     report.fractions.data() + report.fractions.size())},
                   {"reverse_kl", report.reverse_kl}};
  j["mse"] = report.mse ? nlohmann::json(*report.mse) : nlohmann::json(nullptr);
  return j;
}

InferenceResult inference_via_opt(const nn::MlpSpec& gen_spec, const nn::ParamVector& gen, const Mat& targets,
                                  const InferenceOptions& options) {
  if (targets.rows() == 0) throw EmptyInputError("no inference targets");
  require_dims(targets.cols() == gen_spec.output_dim(), "target width differs from generator output");
  const Eigen::Index n = targets.rows();
  const double dim = static_cast<double>(targets.cols());
  InferenceResult result;
  result.per_target = Vec::Constant(n, std::numeric_limits<double>::infinity());
  Rng rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    Mat z = rng.normal_matrix(n, gen_spec.input_dim);
    Mat m = Mat::Zero(n, gen_spec.input_dim);
    Mat v = Mat::Zero(n, gen_spec.input_dim);
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    Vec best = Vec::Constant(n, std::numeric_limits<double>::infinity());
    bool failed = false;
    try {
      for (int s = 0; s <= options.steps; ++s) {
        const auto pass = nn::mlp_forward(gen_spec, gen, z);
        const Mat diff = pass.output() - targets;
        const Vec mse = diff.rowwise().squaredNorm() / dim;
        best = best.cwiseMin(mse);
        if (s == options.steps) break;
        const Mat g = nn::mlp_backward(gen_spec, gen, pass, Mat(diff * (2.0 / dim))).input_grad;
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        const double c1 = 1.0 - std::pow(b1, s + 1), c2 = 1.0 - std::pow(b2, s + 1);
        z.array() -= options.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
        if (!z.allFinite()) throw NonFiniteError("latent code diverged");
      }
    } catch (const NonFiniteError&) {
      failed = true;
    }
    if (failed) {
      ++result.discarded_restarts;
      continue;
    }
    result.per_target = result.per_target.cwiseMin(best);
  }
  if (!result.per_target.allFinite()) throw NonFiniteError("every inference restart diverged");
  result.mean_mse = result.per_target.mean();
  return result;
}

Eigen::MatrixXi density_grid(const Mat& samples, const GridBounds& b, int bins) {
  if (bins < 1) throw DimensionError("density grid needs at least one bin");
  if (!(b.x_max > b.x_min) || !(b.y_max > b.y_min)) throw Error("degenerate density grid bounds");
  Eigen::MatrixXi grid = Eigen::MatrixXi::Zero(bins, bins);
  if (samples.rows() == 0) return grid;
  require_dims(samples.cols() == 2, "density grid expects 2-D samples");
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const double x = samples(i, 0), y = samples(i, 1);
    if (!(x >= b.x_min && x <= b.x_max && y >= b.y_min && y <= b.y_max)) continue;
    const int c = std::min(bins - 1, static_cast<int>((x - b.x_min) / (b.x_max - b.x_min) * bins));
    const int r = std::min(bins - 1, static_cast<int>((y - b.y_min) / (b.y_max - b.y_min) * bins));
    grid(r, c) += 1;
  }
  return grid;
}

std::string grid_to_csv(const Eigen::MatrixXi& grid) {
  std::ostringstream os;
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (c) os << ',';
      os << grid(r, c);
    }
    os << '\n';
  }
  return os.str();
}

std::string samples_to_csv(const Mat& samples, const RingMixtureSpec& spec) {
  const auto labels = assign_modes(samples, spec);
  std::ostringstream os;
  os.precision(17);
  os << "x,y,assigned_mode\n";
  for (Eigen::Index i = 0; i < samples.rows(); ++i)
    os << samples(i, 0) << ',' << samples(i, 1) << ',' << labels[static_cast<std::size_t>(i)] << '\n';
  return os.str();
}

}  // namespace chekhov::evaluation
