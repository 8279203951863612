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

#include "chekhov/gan.hpp"

#include <algorithm>
#include <cmath>

namespace chekhov::gan {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

void check_batch(const Mat& batch, int width, const char* what) {
  if (batch.rows() == 0) throw EmptyInputError(std::string("empty ") + what + " batch");
  require_dims(batch.cols() == width, std::string(what) + " batch width " + std::to_string(batch.cols()) +
                                          " does not match expected " + std::to_string(width));
}

Mat logits_of(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& x) {
  return nn::mlp_forward(disc_spec, disc, x).output();
}
}  // namespace

std::string to_string(ObjectiveVariant v) { return v == ObjectiveVariant::kHalfMinimax ? "half_minimax" : "cross_entropy"; }

ObjectiveVariant variant_from_string(const std::string& s) {
  if (s == "half_minimax") return ObjectiveVariant::kHalfMinimax;
  if (s == "cross_entropy") return ObjectiveVariant::kCrossEntropy;
  throw Error("unknown objective variant '" + s + "'");
}

double log_sigmoid(double a) { return -std::log1p(std::exp(-std::abs(a))) - std::max(-a, 0.0); }

double sigmoid(double a) { return a >= 0 ? 1.0 / (1.0 + std::exp(-a)) : std::exp(a) / (1.0 + std::exp(a)); }

double ndtr(double a) { return 0.5 * std::erfc(-a / M_SQRT2); }

double log_ndtr(double a) {
  if (a > -20.0) return std::log(ndtr(a));
  // Asymptotic expansion of the Mills ratio.
  const double a2 = a * a;
  const double series = 1.0 - 1.0 / a2 + 3.0 / (a2 * a2) - 15.0 / (a2 * a2 * a2) + 105.0 / (a2 * a2 * a2 * a2);
  return -0.5 * a2 - std::log(-a) - kLogSqrt2Pi + std::log(series);
}

double log_link(Link link, double a) { return link == Link::kSigmoid ? log_sigmoid(a) : log_ndtr(a); }

double dlog_link(Link link, double a) {
  if (link == Link::kSigmoid) return sigmoid(-a);
  return std::exp(-0.5 * a * a - kLogSqrt2Pi - log_ndtr(a));
}

double payoff_weight(ObjectiveVariant v) { return v == ObjectiveVariant::kHalfMinimax ? 0.5 : 1.0; }
double value_sign(ObjectiveVariant v) { return v == ObjectiveVariant::kHalfMinimax ? 1.0 : -1.0; }

void GanObjectiveConfig::validate() const {
  gen_spec.validate();
  disc_spec.validate();
  nn::check_params(gen_spec, gen);
  nn::check_params(disc_spec, disc);
  require_dims(gen_spec.output_dim() == disc_spec.input_dim, "generator output width differs from discriminator input");
  require_dims(disc_spec.output_dim() == 1, "discriminator must emit a single logit");
}

double payoff_from_logits(const Mat& real_logits, const Mat& fake_logits, ObjectiveVariant variant, Link link) {
  if (real_logits.size() == 0 || fake_logits.size() == 0) throw EmptyInputError("empty logit batch");
  double real = 0.0;
  for (Eigen::Index i = 0; i < real_logits.size(); ++i) real += log_link(link, real_logits(i));
  double fake = 0.0;
  for (Eigen::Index i = 0; i < fake_logits.size(); ++i) fake += log_link(link, -fake_logits(i));
  const double m = payoff_weight(variant) * (real / static_cast<double>(real_logits.size()) +
                                             fake / static_cast<double>(fake_logits.size()));
  if (!std::isfinite(m)) throw NonFiniteError("GAN payoff is not finite");
  return m;
}

double gan_value(const GanObjectiveConfig& config, const Mat& data_batch, const Mat& noise_batch) {
  config.validate();
  check_batch(data_batch, config.disc_spec.input_dim, "data");
  check_batch(noise_batch, config.noise_dim(), "noise");
  const Mat fake = nn::mlp_forward(config.gen_spec, config.gen, noise_batch).output();
  const double m = payoff_from_logits(logits_of(config.disc_spec, config.disc, data_batch),
                                      logits_of(config.disc_spec, config.disc, fake), config.variant, config.link);
  return value_sign(config.variant) * m;
}

nn::ParamVector disc_real_grad(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& real,
                               ObjectiveVariant variant, Link link) {
  const auto pass = nn::mlp_forward(disc_spec, disc, real);
  const Mat& l = pass.output();
  const double scale = payoff_weight(variant) / static_cast<double>(l.rows());
  const Mat up = l.unaryExpr([&](double a) { return scale * dlog_link(link, a); });
  return nn::mlp_backward(disc_spec, disc, pass, up).grad;
}

namespace {
nn::BackwardResult<double> fake_backward(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& fake,
                                         ObjectiveVariant variant, Link link) {
  const auto pass = nn::mlp_forward(disc_spec, disc, fake);
  const Mat& l = pass.output();
  const double scale = payoff_weight(variant) / static_cast<double>(l.rows());
  const Mat up = l.unaryExpr([&](double a) { return -scale * dlog_link(link, -a); });
  return nn::mlp_backward(disc_spec, disc, pass, up);
}
}  // namespace

nn::ParamVector disc_fake_grad(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& fake,
                               ObjectiveVariant variant, Link link) {
  return fake_backward(disc_spec, disc, fake, variant, link).grad;
}

Mat fake_sample_grad(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& fake,
                     ObjectiveVariant variant, Link link) {
  return fake_backward(disc_spec, disc, fake, variant, link).input_grad;
}

nn::ParamVector gen_grad_from_sample_grad(const nn::MlpSpec& gen_spec, const nn::ParamVector& gen,
                                          const nn::ForwardPass<double>& gen_pass, const Mat& sample_grad) {
  return nn::mlp_backward(gen_spec, gen, gen_pass, sample_grad).grad;
}

GanGrads gan_grads(const GanObjectiveConfig& config, const Mat& data_batch, const Mat& noise_batch) {
  config.validate();
  check_batch(data_batch, config.disc_spec.input_dim, "data");
  check_batch(noise_batch, config.noise_dim(), "noise");
  const auto gen_pass = nn::mlp_forward(config.gen_spec, config.gen, noise_batch);
  const Mat& fake = gen_pass.output();
  const auto fake_terms = fake_backward(config.disc_spec, config.disc, fake, config.variant, config.link);
  GanGrads out{gen_grad_from_sample_grad(config.gen_spec, config.gen, gen_pass, fake_terms.input_grad),
               disc_real_grad(config.disc_spec, config.disc, data_batch, config.variant, config.link)};
  out.grad_v.flat += fake_terms.grad.flat;
  if (!out.grad_u.flat.allFinite() || !out.grad_v.flat.allFinite())
    throw NonFiniteError("non-finite GAN gradient");
  return out;
}

double semi_shallow_value(const SemiShallowDisc& disc, const Vec& x) {
  require_dims(x.size() == disc.weights.size(), "semi-shallow discriminator width mismatch");
  const double a = disc.weights.dot(x);
  return disc.link == Link::kSigmoid ? sigmoid(a) : ndtr(a);
}

double semi_shallow_payoff(const SemiShallowDisc& disc, const Mat& real, const Mat& fake) {
  require_dims(real.cols() == disc.weights.size() && fake.cols() == disc.weights.size(),
               "semi-shallow discriminator width mismatch");
  return payoff_from_logits(real * disc.weights, fake * disc.weights, ObjectiveVariant::kHalfMinimax, disc.link);
}

Vec semi_shallow_payoff_grad(const SemiShallowDisc& disc, const Mat& real, const Mat& fake) {
  require_dims(real.cols() == disc.weights.size() && fake.cols() == disc.weights.size(),
               "semi-shallow discriminator width mismatch");
  if (real.rows() == 0 || fake.rows() == 0) throw EmptyInputError("empty batch");
  const Vec lr = real * disc.weights;
  const Vec lf = fake * disc.weights;
  const Vec dr = lr.unaryExpr([&](double a) { return dlog_link(disc.link, a); }) / (2.0 * static_cast<double>(lr.size()));
  const Vec df = lf.unaryExpr([&](double a) { return -dlog_link(disc.link, -a); }) / (2.0 * static_cast<double>(lf.size()));
  return real.transpose() * dr + fake.transpose() * df;
}

Vec sample_in_ball(const games::BallDomain& domain, Rng& rng) {
  Vec dir = rng.normal_vector(domain.dim());
  double n = dir.norm();
  while (n == 0.0) {
    dir = rng.normal_vector(domain.dim());
    n = dir.norm();
  }
  const double r = domain.radius() * std::pow(rng.uniform(), 1.0 / static_cast<double>(domain.dim()));
  return domain.center() + dir * (r / n);
}

ConcavityReport concavity_probe(const std::function<double(const Vec&)>& value_in_v, const games::BallDomain& domain,
                                int trials, std::uint64_t seed) {
  Rng rng(seed);
  ConcavityReport report;
  report.trials = trials;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Vec a = sample_in_ball(domain, rng);
    const Vec b = sample_in_ball(domain, rng);
    const double fa = value_in_v(a);
    const double fb = value_in_v(b);
    const double fm = value_in_v(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
      throw NonFiniteError("concavity probe: closure returned a non-finite value");
    const double margin = fm - 0.5 * (fa + fb);
    const double tol = 1e-9 * (1.0 + std::max({std::abs(fa), std::abs(fb), std::abs(fm)}));
    if (margin < -tol) ++report.violations;
    report.worst_margin = std::min(report.worst_margin, margin);
  }
  if (trials == 0) report.worst_margin = 0.0;
  return report;
}

}  // namespace chekhov::gan
