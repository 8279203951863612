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

#include <cmath>

#include "chekhov/gan.hpp"
#include "oracles.hpp"

using namespace chekhov;
using namespace chekhov::gan;
using nn::Activation;
using nn::MlpSpec;

namespace {

GanObjectiveConfig small_config(ObjectiveVariant variant, std::uint64_t seed, int noise_dim = 3) {
  GanObjectiveConfig c;
  c.gen_spec = MlpSpec::dense(noise_dim, {6}, Activation::kTanh, 2);
  c.disc_spec = MlpSpec::dense(2, {6}, Activation::kTanh, 1);
  c.gen = nn::init_params(c.gen_spec, seed);
  c.disc = nn::init_params(c.disc_spec, seed + 1);
  c.variant = variant;
  return c;
}

// Config whose discriminator outputs logit 0 everywhere.
GanObjectiveConfig flat_disc(ObjectiveVariant variant) {
  auto c = small_config(variant, 1);
  c.disc = nn::ParamVector::zeros(c.disc_spec);
  return c;
}

}  // namespace

TEST_CASE("value at a maximally confused discriminator") {
  Rng rng(1);
  const Mat data = rng.normal_matrix(10, 2), noise = rng.normal_matrix(12, 3);
  CHECK(gan_value(flat_disc(ObjectiveVariant::kHalfMinimax), data, noise) == doctest::Approx(-std::log(2.0)));
  CHECK(gan_value(flat_disc(ObjectiveVariant::kCrossEntropy), data, noise) == doctest::Approx(2.0 * std::log(2.0)));
  // Oracle: E[-log 1/2] - E[log(1 - 1/2)].
  CHECK(gan_value(flat_disc(ObjectiveVariant::kCrossEntropy), data, noise) ==
        doctest::Approx(-std::log(0.5) - std::log(1.0 - 0.5)));
}

TEST_CASE("payoff from a confident discriminator") {
  const double a = std::log(99.0);
  const Mat real = Mat::Constant(4, 1, a), fake = Mat::Constant(3, 1, -a);
  CHECK(payoff_from_logits(real, fake, ObjectiveVariant::kHalfMinimax, Link::kSigmoid) ==
        doctest::Approx(std::log(0.99)));
  CHECK_THROWS_AS(payoff_from_logits(Mat(0, 1), fake, ObjectiveVariant::kHalfMinimax, Link::kSigmoid), EmptyInputError);
}

TEST_CASE("stable log links") {
  CHECK(std::isfinite(log_sigmoid(-700.0)));
  CHECK(log_sigmoid(-700.0) == doctest::Approx(-700.0));
  CHECK(std::abs(log_sigmoid(700.0)) < 1e-300);
  CHECK(log_sigmoid(0.3) == doctest::Approx(std::log(1.0 / (1.0 + std::exp(-0.3)))).epsilon(1e-14));
  CHECK(ndtr(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(ndtr(-3.0) == doctest::Approx(0.0013498980316300946).epsilon(1e-12));
  CHECK(std::isfinite(log_ndtr(-30.0)));
  for (double x : {-5.0, -0.5, 0.0, 2.0}) {
    for (auto link : {Link::kSigmoid, Link::kProbit}) {
      const double h = 1e-6;
      const double fd = (log_link(link, x + h) - log_link(link, x - h)) / (2 * h);
      CHECK(dlog_link(link, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("gradients match finite differences of the payoff") {
  Rng rng(8);
  for (auto variant : {ObjectiveVariant::kHalfMinimax, ObjectiveVariant::kCrossEntropy}) {
    for (auto link : {Link::kSigmoid, Link::kProbit}) {
      auto c = small_config(variant, rng.next_u64() % 1000);
      c.link = link;
      const Mat data = rng.normal_matrix(9, 2), noise = rng.normal_matrix(7, 3);
      const auto g = gan_grads(c, data, noise);
      const double sign = value_sign(variant);
      const Vec fd_u = oracles::fd_gradient(
          [&](const Vec& w) {
            auto cc = c;
            cc.gen.flat = w;
            return sign * gan_value(cc, data, noise);
          },
          c.gen.flat);
      const Vec fd_v = oracles::fd_gradient(
          [&](const Vec& w) {
            auto cc = c;
            cc.disc.flat = w;
            return sign * gan_value(cc, data, noise);
          },
          c.disc.flat);
      CHECK((g.grad_u.flat - fd_u).cwiseAbs().maxCoeff() <= 1e-7);
      CHECK((g.grad_v.flat - fd_v).cwiseAbs().maxCoeff() <= 1e-7);
    }
  }
}

TEST_CASE("balanced game point has zero discriminator gradient") {
  // Identity generator: fakes equal the noise, which we set to the data.
  GanObjectiveConfig c;
  c.gen_spec = MlpSpec::dense(2, {}, Activation::kLinear, 2);
  c.gen = nn::ParamVector::zeros(c.gen_spec);
  c.gen.weight(0) = Mat::Identity(2, 2);
  c.disc_spec = MlpSpec::dense(2, {5}, Activation::kTanh, 1);
  c.disc = nn::ParamVector::zeros(c.disc_spec);
  const Mat data = Mat::Random(6, 2);
  const auto g = gan_grads(c, data, data);
  CHECK(g.grad_v.flat.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("mean estimator invariances") {
  const auto c = small_config(ObjectiveVariant::kHalfMinimax, 4);
  Rng rng(2);
  const Mat data = rng.normal_matrix(5, 2), noise = rng.normal_matrix(5, 3);
  Mat data2(10, 2), noise2(10, 3);
  data2 << data, data;
  noise2 << noise, noise;
  const auto g1 = gan_grads(c, data, noise), g2 = gan_grads(c, data2, noise2);
  CHECK((g1.grad_u.flat - g2.grad_u.flat).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((g1.grad_v.flat - g2.grad_v.flat).cwiseAbs().maxCoeff() <= 1e-14);

  Mat reversed = data.colwise().reverse();
  CHECK(gan_value(c, reversed, noise) == doctest::Approx(gan_value(c, data, noise)).epsilon(1e-15));
  CHECK_THROWS_AS(gan_value(c, Mat(0, 2), noise), EmptyInputError);
  CHECK_THROWS_AS(gan_value(c, Mat::Zero(3, 4), noise), DimensionError);
}

TEST_CASE("semi-shallow discriminator values") {
  const Vec x = (Vec(2) << 1.0, 0.0).finished();
  for (auto link : {Link::kSigmoid, Link::kProbit}) CHECK(semi_shallow_value({Vec::Zero(2), link}, x) == 0.5);
  CHECK(semi_shallow_value({(Vec(2) << std::log(3.0), 7.0).finished(), Link::kSigmoid}, x) == doctest::Approx(0.75));
  CHECK_THROWS_AS(semi_shallow_value({Vec::Zero(3), Link::kSigmoid}, x), DimensionError);

  Rng rng(6);
  const Mat real = rng.normal_matrix(8, 2), fake = rng.normal_matrix(8, 2);
  for (auto link : {Link::kSigmoid, Link::kProbit}) {
    const SemiShallowDisc d{rng.normal_vector(2), link};
    const Vec fd = oracles::fd_gradient(
        [&](const Vec& w) { return semi_shallow_payoff({w, link}, real, fake); }, d.weights);
    CHECK((semi_shallow_payoff_grad(d, real, fake) - fd).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("concavity probe") {
  const auto ball = games::BallDomain(Vec::Zero(3), 4.0);
  const Vec a = (Vec(3) << 1.0, -2.0, 0.5).finished();
  CHECK(concavity_probe([&](const Vec& v) { return a.dot(v) + 3.0; }, ball, 1000, 1).violations == 0);
  CHECK(concavity_probe([](const Vec& v) { return v.squaredNorm(); }, ball, 1000, 1).violations > 0);

  Rng rng(4);
  const Mat real = rng.normal_matrix(32, 3), fake = 2.0 * rng.normal_matrix(32, 3);
  for (auto link : {Link::kSigmoid, Link::kProbit}) {
    const auto r = concavity_probe([&](const Vec& v) { return semi_shallow_payoff({v, link}, real, fake); }, ball,
                                   1000, 2);
    CHECK(r.trials == 1000);
    CHECK(r.violations == 0);
  }
}
