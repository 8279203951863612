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

// Online learners used by the equilibrium solvers, and exact regret
// accounting for both players.

#ifndef CHEKHOV_LEARNERS_HPP_
#define CHEKHOV_LEARNERS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chekhov/common.hpp"
#include "chekhov/games.hpp"

namespace chekhov::learners {

// Follow-the-leader state: the accumulated loss representation plus the
// number of absorbed rounds. For a ball domain with affine losses the
// accumulator is the summed linear coefficient; for a finite domain it is
// the per-action cumulative loss.
class FtlState {
 public:
  static FtlState for_ball(const games::BallDomain& ball);
  static FtlState for_finite(Eigen::Index n_actions);

  void absorb(const Vec& loss);

  const Vec& accumulated() const { return accumulated_; }
  const Vec& initial_point() const { return initial_; }
  std::int64_t rounds() const { return rounds_; }

 private:
  Vec accumulated_;
  Vec initial_;
  std::int64_t rounds_ = 0;
};

// Exact minimizer of the accumulated loss, given the accumulator.
using FtlOracle = std::function<Vec(const Vec& accumulated)>;

// u = c - r a / ||a||; the center when a == 0.
FtlOracle ball_linear_oracle(const games::BallDomain& ball);

// Lowest index attaining the minimum.
Eigen::Index argmin_lowest(const Vec& cumulative_loss);

// Empty history returns the initial point. Otherwise the oracle's answer;
// a non-finite or empty answer raises OracleError.
Vec ftl_step(const FtlState& state, const FtlOracle& oracle);
// Finite-domain variant returning the chosen action index.
Eigen::Index ftl_step_finite(const FtlState& state);

// Linearized FTRL with quadratic regularization over a ball:
//   v_t = argmax_v  s^T v - sqrt(T) / (2 eta0) ||v - c||^2
//       = Proj_ball(c + eta0 / sqrt(T) * s),
// where s is the sum of absorbed reward gradients.
struct FtrlLinState {
  Vec grad_sum;
  double eta0 = 1.0;
  std::int64_t horizon = 1;
  games::BallDomain domain;
  std::int64_t rounds = 0;

  FtrlLinState(games::BallDomain domain, double eta0, std::int64_t horizon);
  // eta0 = diameter / (sqrt(2) L).
  static FtrlLinState for_lipschitz(const games::BallDomain& domain, double lipschitz, std::int64_t horizon);
};

// Absorbs `new_grad` (if given) and returns the next decision.
Vec ftrl_linearized_step(FtrlLinState& state, const std::optional<Vec>& new_grad);

// Exponential weights over finite actions, stored as log-weights so the
// weights never underflow.
struct MwState {
  Vec log_weights;
  double eta = 0.1;

  MwState(Eigen::Index n_actions, double eta);
  games::MixedStrategy strategy() const;
  // sqrt(8 ln n / T).
  static double default_eta(Eigen::Index n_actions, std::int64_t horizon);
};

// log w_i += eta * payoff_i when maximizing, -= when minimizing.
games::MixedStrategy mw_step(MwState& state, const Vec& payoff, bool maximizing);

// Per-round record sufficient to compute both players' best fixed decision
// in hindsight. Each side is either finite (per-action values every round)
// or continuous over a ball:
//   min player loss   f_t(u) = a_t^T u + k_t
//   max player reward g_t(v) = b_t^T v - q_t/2 ||v||^2 + r_t
class RegretLedger {
 public:
  static RegretLedger finite(Eigen::Index n_min_actions, Eigen::Index n_max_actions);
  static RegretLedger affine_quadratic(games::BallDomain k1, games::BallDomain k2);
  // Finite min player against a continuous max player.
  static RegretLedger finite_quadratic(Eigen::Index n_min_actions, games::BallDomain k2);

  void record_finite(double loss, double reward, Vec action_losses, Vec action_rewards);
  void record_affine(double loss, double reward, Vec loss_coeff, double loss_const, Vec reward_coeff,
                     double reward_curvature, double reward_const);
  void record_finite_quadratic(double loss, double reward, Vec action_losses, Vec reward_coeff,
                               double reward_curvature, double reward_const);

  std::size_t size() const { return rows_.size(); }
  bool is_finite() const { return min_finite_ && max_finite_; }

  struct Row {
    std::int64_t t;
    double loss;
    double reward;
    double cum_regret_min;
    double cum_regret_max;
  };
  // Cumulative regrets after every round, maintained incrementally.
  const std::vector<Row>& series() const { return rows_; }

 private:
  void push(double loss, double reward, Vec min_terms, double min_const, Vec max_terms, double curvature,
            double max_const);

  bool min_finite_ = true, max_finite_ = true;
  Eigen::Index n_min_ = 0, n_max_ = 0;
  std::optional<games::BallDomain> k1_, k2_;
  // Running sums of the per-round terms.
  Vec min_acc_, max_acc_;
  double loss_sum_ = 0.0, reward_sum_ = 0.0, min_const_ = 0.0, curvature_ = 0.0, max_const_ = 0.0;
  std::vector<Row> rows_;
};

struct Regrets {
  double regret_min = 0.0;
  double regret_max = 0.0;
};

// Exact regrets of a non-empty ledger; EmptyInputError otherwise.
Regrets regret_audit(const RegretLedger& ledger);

// Columns t, loss_t, reward_t, cum_regret_min, cum_regret_max.
std::string ledger_to_csv(const RegretLedger& ledger);

}  // namespace chekhov::learners

#endif  // CHEKHOV_LEARNERS_HPP_
