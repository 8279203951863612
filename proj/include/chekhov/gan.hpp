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

// The GAN game M(u, v) and its gradients for both players.
//
// The discriminator emits a logit l; its probability is link(l) with link
// either the logistic sigmoid or the standard normal CDF. Both variants
// below are written as
//
//   M(u, v) = w * ( mean log link(l_real) + mean log(1 - link(l_fake)) )
//
// with w = 1/2 for the minimax objective and w = 1 for the toy-experiment
// loss. The discriminator maximizes M and the generator minimizes it.
// gan_value() reports each variant's objective in its own sign: the
// minimax objective equals M, the toy loss equals -M.

#ifndef CHEKHOV_GAN_HPP_
#define CHEKHOV_GAN_HPP_

#include <functional>

#include "chekhov/common.hpp"
#include "chekhov/games.hpp"
#include "chekhov/nn.hpp"

namespace chekhov::gan {

enum class ObjectiveVariant { kHalfMinimax, kCrossEntropy };
enum class Link { kSigmoid, kProbit };

std::string to_string(ObjectiveVariant v);
ObjectiveVariant variant_from_string(const std::string& s);

// Numerically stable log sigmoid: -log1p(exp(-|a|)) - max(-a, 0).
double log_sigmoid(double a);
double sigmoid(double a);
// log Phi(a) for the standard normal CDF, accurate far into the left tail.
double log_ndtr(double a);
double ndtr(double a);

// log link(a) and d/da log link(a).
double log_link(Link link, double a);
double dlog_link(Link link, double a);

double payoff_weight(ObjectiveVariant v);
// +1 when gan_value() equals M, -1 when it equals -M.
double value_sign(ObjectiveVariant v);

struct GanObjectiveConfig {
  nn::MlpSpec gen_spec;
  nn::ParamVector gen;
  nn::MlpSpec disc_spec;  // last layer emits one logit
  nn::ParamVector disc;
  ObjectiveVariant variant = ObjectiveVariant::kHalfMinimax;
  Link link = Link::kSigmoid;

  int noise_dim() const { return gen_spec.input_dim; }
  void validate() const;
};

// Empirical payoff M from discriminator logits on real and fake samples.
double payoff_from_logits(const Mat& real_logits, const Mat& fake_logits, ObjectiveVariant variant, Link link);

// Variant objective on a minibatch (batches hold one sample per row).
double gan_value(const GanObjectiveConfig& config, const Mat& data_batch, const Mat& noise_batch);

struct GanGrads {
  nn::ParamVector grad_u;  // dM/du
  nn::ParamVector grad_v;  // dM/dv
};

GanGrads gan_grads(const GanObjectiveConfig& config, const Mat& data_batch, const Mat& noise_batch);

// Building blocks shared with the trainer.

// dM/dv from the real-sample term only.
nn::ParamVector disc_real_grad(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& real,
                               ObjectiveVariant variant, Link link);
// dM/dv from the fake-sample term only.
nn::ParamVector disc_fake_grad(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& fake,
                               ObjectiveVariant variant, Link link);
// dM/dx for each fake sample x (one row per sample).
Mat fake_sample_grad(const nn::MlpSpec& disc_spec, const nn::ParamVector& disc, const Mat& fake,
                     ObjectiveVariant variant, Link link);
// Pulls dM/dx back through the generator to dM/du.
nn::ParamVector gen_grad_from_sample_grad(const nn::MlpSpec& gen_spec, const nn::ParamVector& gen,
                                          const nn::ForwardPass<double>& gen_pass, const Mat& sample_grad);

// Single-layer discriminator h_v(x) = link(v^T x), no bias.
struct SemiShallowDisc {
  Vec weights;
  Link link = Link::kSigmoid;
};

double semi_shallow_value(const SemiShallowDisc& disc, const Vec& x);

// Minimax payoff (w = 1/2) of a semi-shallow discriminator against fixed
// real and fake samples.
double semi_shallow_payoff(const SemiShallowDisc& disc, const Mat& real, const Mat& fake);
Vec semi_shallow_payoff_grad(const SemiShallowDisc& disc, const Mat& real, const Mat& fake);

struct ConcavityReport {
  int trials = 0;
  int violations = 0;
  double worst_margin = 0.0;  // min over trials of f(mid) - (f(a) + f(b)) / 2
};

// Midpoint concavity probe on random pairs drawn uniformly from `domain`.
// A trial violates when f(mid) < (f(a) + f(b)) / 2 - 1e-9 (1 + max |f|).
ConcavityReport concavity_probe(const std::function<double(const Vec&)>& value_in_v, const games::BallDomain& domain,
                                int trials, std::uint64_t seed);

// Uniform sample from a ball.
Vec sample_in_ball(const games::BallDomain& domain, Rng& rng);

}  // namespace chekhov::gan

#endif  // CHEKHOV_GAN_HPP_
