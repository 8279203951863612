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

#include "chekhov/solver.hpp"
#include "oracles.hpp"

using namespace chekhov;
using namespace chekhov::solver;
using games::MixedStrategy;

TEST_CASE("epsilon from regrets") {
  CHECK(epsilon_from_regrets(10, 6, 8) == 2.0);
  CHECK(epsilon_from_regrets(0, 0, 17) == 0.0);
  CHECK_THROWS(epsilon_from_regrets(1, 1, 0));
  // Plugging both closed-form bounds: L=1, d2=2, C=3, T=50.
  const double eps = epsilon_from_regrets(ftl_regret_bound(1, 2, 3, 50), ftrl_regret_bound(1, 2, 50), 50);
  CHECK(eps == doctest::Approx(0.72));
  CHECK(stability_bound(2.0, 50) == doctest::Approx(0.2));
}

TEST_CASE("rps self-play") {
  const auto r = solve_matrix(games::rps_game(), 10000);
  CHECK(std::abs(*r.value) <= 0.02);
  CHECK((r.d1_strategy->probs().array() - 1.0 / 3).abs().maxCoeff() <= 0.05);
  CHECK(r.exploitability->max() <= 0.05);
  CHECK(r.exploitability->max() <= r.eps_certificate + 1e-9);
}

TEST_CASE("matching pennies and the zero game") {
  const auto r = solve_matrix(games::matching_pennies(), 10000);
  CHECK(std::abs(*r.value) <= 0.02);
  const auto z = solve_matrix(games::zero_game(3, 4), 37);
  CHECK(z.exploitability->eps1 == 0.0);
  CHECK(z.exploitability->eps2 == 0.0);
}

TEST_CASE("self-play value approaches the enumerated equilibrium value") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = games::random_game(4, 5, 200 + seed);
    const auto eq = oracles::enumerate_nash(g.payoff());
    REQUIRE(eq.has_value());
    const auto r = solve_matrix(g, 20000);
    // Any eps-MNE has value within eps of the game value.
    CHECK(std::abs(*r.value - eq->value) <= r.eps_certificate + 1e-9);
    CHECK(r.eps_certificate < 0.05);
  }
}

TEST_CASE("measured-regret certificate on random games") {
  SolveOptions opt;
  opt.audit_at = {10, 100, 1000};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = games::random_game(5, 5, seed);
    const auto r = solve_matrix(g, 1000, opt);
    REQUIRE(r.audits.size() == 3);
    for (const auto& a : r.audits) {
      CHECK(a.eps_certificate == epsilon_from_regrets(a.regret_min, a.regret_max, a.t));
      CHECK(a.exploitability->eps1 <= a.eps_certificate + 1e-9);
      CHECK(a.exploitability->eps2 <= a.eps_certificate + 1e-9);
    }
    CHECK(check_minimax_bound(g, *r.d1_strategy, r.eps_certificate).pass);
  }
}

TEST_CASE("minimax check examples") {
  const auto g = games::rps_game();
  auto c = check_minimax_bound(g, MixedStrategy::uniform(3), 0.0);
  CHECK(c.lhs == doctest::Approx(0.0));
  CHECK(c.margin == doctest::Approx(1.0));
  CHECK(c.pass);
  c = check_minimax_bound(g, MixedStrategy::pure(3, 0), 0.0);
  CHECK(c.lhs == 1.0);
  CHECK(c.margin == 0.0);
  CHECK(c.pass);
  CHECK_FALSE(check_minimax_bound(g, MixedStrategy::pure(3, 0), -0.5).pass);
  CHECK_THROWS_AS(check_minimax_bound(g, MixedStrategy::uniform(2), 0.0), DimensionError);
}

TEST_CASE("semi-concave solver with one round returns the initial points") {
  const auto g = games::make_bilinear_semiconcave(3, 2, 2);
  const auto r = solve_semiconcave(g, 1);
  REQUIRE(r.d1_mixture->points.size() == 1);
  CHECK(r.d1_mixture->points[0] == Vec::Zero(2));
  CHECK(r.d2_mixture->points[0] == g.k2.center());
  CHECK(r.stability.empty());
}

TEST_CASE("semi-concave solver guarantees") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (std::int64_t T : {64, 256}) {
      const auto g = games::make_bilinear_semiconcave(seed, 3, 2);
      const auto r = solve_semiconcave(g, T);
      const double d2 = g.k2.diameter();
      CHECK(*r.eta0 == doctest::Approx(d2 / (std::sqrt(2.0) * g.lipschitz)));
      for (double s : r.stability) CHECK(s <= stability_bound(d2, T) + 1e-12);
      CHECK(r.regret_max <= ftrl_regret_bound(g.lipschitz, d2, T));
      CHECK(r.regret_min <= ftl_regret_bound(g.lipschitz, d2, g.payoff_bound, T));
      CHECK(r.exploitability->max() <= r.eps_certificate + 1e-9);
      CHECK_FALSE(r.regret_max_is_bound);
      // The closed-form report agrees with brute-force evaluation.
      CHECK(*r.value == doctest::Approx(games::evaluate_mixture(g, *r.d1_mixture, *r.d2_mixture)).epsilon(1e-10));
      CHECK(r.exploitability->eps1 == doctest::Approx(games::exploitability(g, *r.d1_mixture, *r.d2_mixture).eps1));
    }
  }
}

TEST_CASE("1-D instance exploitability shrinks with T") {
  const auto g = games::make_bilinear_semiconcave(2, 1, 1);
  const auto small = solve_semiconcave(g, 1024);
  const auto large = solve_semiconcave(g, 4096);
  CHECK(small.exploitability->max() > 0.0);
  CHECK(large.exploitability->max() < small.exploitability->max());
}

TEST_CASE("semi-concave solver is deterministic") {
  const auto g = games::make_bilinear_semiconcave(9, 2, 3);
  const auto a = solve_semiconcave(g, 300);
  const auto b = solve_semiconcave(g, 300);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(iterates_to_csv(a) == iterates_to_csv(b));
}

TEST_CASE("finite min-player domain") {
  const auto base = games::make_bilinear_semiconcave(5, 2, 2);
  games::SemiConcaveGame g = base;
  games::FinitePointSet pts;
  for (int k = 0; k < 8; ++k) pts.points.push_back((Vec(2) << std::cos(k * M_PI / 4), std::sin(k * M_PI / 4)).finished());
  g.k1 = pts;
  const auto r = solve_semiconcave(g, 500);
  CHECK(r.exploitability.has_value());
  CHECK(r.exploitability->max() <= r.eps_certificate + 1e-9);
}

TEST_CASE("games without bilinear structure report a regret bound") {
  auto g = games::make_bilinear_semiconcave(5, 2, 2);
  const Mat a = *g.bilinear;
  g.bilinear.reset();
  g.value = [a](const Vec& u, const Vec& v) { return u.dot(a * v) - 0.25 * v.squaredNorm() * v.squaredNorm(); };
  g.grad_v = [a](const Vec& u, const Vec& v) -> Vec { return a.transpose() * u - v.squaredNorm() * v; };
  g.lipschitz = 10.0;
  const auto r = solve_semiconcave(g, 200);
  CHECK(r.regret_max_is_bound);
  CHECK_FALSE(r.exploitability.has_value());
  CHECK(std::isfinite(r.eps_certificate));
}

TEST_CASE("long runs keep a strided mixture") {
  const auto g = games::make_bilinear_semiconcave(1, 1, 1);
  SolveOptions opt;
  opt.max_stored_points = 100;
  const auto r = solve_semiconcave(g, 250, opt);
  CHECK(r.d1_mixture->stride == 3);
  CHECK(r.d1_mixture->points.size() == 84);
  const auto csv = iterates_to_csv(r);
  CHECK(csv.rfind("index,t,u_0,v_0\n", 0) == 0);
  CHECK(csv.find("\n1,4,") != std::string::npos);
  // Exploitability comes from full running sums, not the strided list.
  const auto full = solve_semiconcave(g, 250);
  CHECK(r.exploitability->eps1 == full.exploitability->eps1);
}
