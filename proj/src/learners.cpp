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

#include "chekhov/learners.hpp"

#include <cmath>
#include <sstream>

namespace chekhov::learners {

FtlState FtlState::for_ball(const games::BallDomain& ball) {
  FtlState s;
  s.accumulated_ = Vec::Zero(ball.dim());
  s.initial_ = ball.center();
  return s;
}

FtlState FtlState::for_finite(Eigen::Index n_actions) {
  require_dims(n_actions >= 1, "finite FTL needs at least one action");
  FtlState s;
  s.accumulated_ = Vec::Zero(n_actions);
  s.initial_ = Vec::Zero(1);
  return s;
}

void FtlState::absorb(const Vec& loss) {
  require_dims(loss.size() == accumulated_.size(), "FTL loss size differs from accumulator");
  if (!loss.allFinite()) throw NonFiniteError("FTL received a non-finite loss");
  accumulated_ += loss;
  ++rounds_;
}

FtlOracle ball_linear_oracle(const games::BallDomain& ball) {
  return [ball](const Vec& a) -> Vec {
    const double n = a.norm();
    if (n == 0.0) return ball.center();
    return ball.center() - a * (ball.radius() / n);
  };
}

Eigen::Index argmin_lowest(const Vec& cumulative_loss) {
  if (cumulative_loss.size() == 0) throw EmptyInputError("argmin of an empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < cumulative_loss.size(); ++i)
    if (cumulative_loss(i) < cumulative_loss(best)) best = i;
  return best;
}

Vec ftl_step(const FtlState& state, const FtlOracle& oracle) {
  if (state.rounds() == 0) return state.initial_point();
  Vec u;
  try {
    u = oracle(state.accumulated());
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    throw OracleError(std::string("FTL oracle failed: ") + e.what());
  }
  if (u.size() == 0 || !u.allFinite()) throw OracleError("FTL oracle returned an empty or non-finite decision");
  return u;
}

Eigen::Index ftl_step_finite(const FtlState& state) { return argmin_lowest(state.accumulated()); }

FtrlLinState::FtrlLinState(games::BallDomain d, double eta, std::int64_t t)
    : grad_sum(Vec::Zero(d.dim())), eta0(eta), horizon(t), domain(std::move(d)) {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw Error("FTRL eta0 must be positive and finite");
  if (horizon < 1) throw Error("FTRL horizon must be >= 1");
}

FtrlLinState FtrlLinState::for_lipschitz(const games::BallDomain& domain, double lipschitz, std::int64_t horizon) {
  if (!(lipschitz > 0.0)) throw Error("Lipschitz constant must be positive");
  return FtrlLinState(domain, domain.diameter() / (std::sqrt(2.0) * lipschitz), horizon);
}

Vec ftrl_linearized_step(FtrlLinState& state, const std::optional<Vec>& new_grad) {
  if (new_grad) {
    require_dims(new_grad->size() == state.grad_sum.size(), "FTRL gradient size differs from domain");
    if (!new_grad->allFinite()) throw NonFiniteError("FTRL received a non-finite gradient");
    state.grad_sum += *new_grad;
  }
  ++state.rounds;
  const double step = state.eta0 / std::sqrt(static_cast<double>(state.horizon));
  return games::project_ball(state.domain.center() + step * state.grad_sum, state.domain);
}

MwState::MwState(Eigen::Index n_actions, double step) : log_weights(Vec::Zero(n_actions)), eta(step) {
  require_dims(n_actions >= 1, "multiplicative weights need at least one action");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw Error("MW step size must be finite and >= 0");
}

games::MixedStrategy MwState::strategy() const {
  Vec w = (log_weights.array() - log_weights.maxCoeff()).exp();
  return games::MixedStrategy(w / w.sum());
}

double MwState::default_eta(Eigen::Index n_actions, std::int64_t horizon) {
  return std::sqrt(8.0 * std::log(static_cast<double>(n_actions)) / static_cast<double>(std::max<std::int64_t>(1, horizon)));
}

games::MixedStrategy mw_step(MwState& state, const Vec& payoff, bool maximizing) {
  require_dims(payoff.size() == state.log_weights.size(), "MW payoff size differs from action count");
  if (!payoff.allFinite()) throw NonFiniteError("MW received a non-finite payoff");
  state.log_weights += (maximizing ? state.eta : -state.eta) * payoff;
  // Re-centre so the largest log-weight is 0; the strategy is unchanged.
  state.log_weights.array() -= state.log_weights.maxCoeff();
  return state.strategy();
}

RegretLedger RegretLedger::finite(Eigen::Index n_min_actions, Eigen::Index n_max_actions) {
  require_dims(n_min_actions >= 1 && n_max_actions >= 1, "ledger needs at least one action per player");
  RegretLedger l;
  l.n_min_ = n_min_actions;
  l.n_max_ = n_max_actions;
  return l;
}

RegretLedger RegretLedger::affine_quadratic(games::BallDomain k1, games::BallDomain k2) {
  RegretLedger l;
  l.min_finite_ = l.max_finite_ = false;
  l.n_min_ = k1.dim();
  l.n_max_ = k2.dim();
  l.k1_ = std::move(k1);
  l.k2_ = std::move(k2);
  return l;
}

RegretLedger RegretLedger::finite_quadratic(Eigen::Index n_min_actions, games::BallDomain k2) {
  require_dims(n_min_actions >= 1, "ledger needs at least one min-player action");
  RegretLedger l;
  l.max_finite_ = false;
  l.n_min_ = n_min_actions;
  l.n_max_ = k2.dim();
  l.k2_ = std::move(k2);
  return l;
}

void RegretLedger::push(double loss, double reward, Vec min_terms, double min_const, Vec max_terms,
                        double curvature, double max_const) {
  require_dims(min_terms.size() == n_min_ && max_terms.size() == n_max_, "ledger row has the wrong width");
  if (curvature < 0.0) throw Error("reward curvature must be >= 0 (concave rewards)");
  if (!std::isfinite(loss) || !std::isfinite(reward) || !min_terms.allFinite() || !max_terms.allFinite() ||
      !std::isfinite(min_const) || !std::isfinite(curvature) || !std::isfinite(max_const))
    throw NonFiniteError("non-finite ledger entry at round " + std::to_string(rows_.size() + 1));
  if (rows_.empty()) {
    min_acc_ = Vec::Zero(n_min_);
    max_acc_ = Vec::Zero(n_max_);
  }
  loss_sum_ += loss;
  reward_sum_ += reward;
  min_acc_ += min_terms;
  max_acc_ += max_terms;
  min_const_ += min_const;
  curvature_ += curvature;
  max_const_ += max_const;

  const double best_loss = min_finite_ ? min_acc_.minCoeff()
                                       : min_acc_.dot(k1_->center()) - k1_->radius() * min_acc_.norm() + min_const_;
  double best_reward;
  if (max_finite_) {
    best_reward = max_acc_.maxCoeff();
  } else {
    // argmax of B^T v - Q/2 ||v||^2 over the ball: the projection of B/Q
    // when Q > 0, the boundary point along B otherwise.
    Vec v;
    if (curvature_ > 0.0) {
      v = games::project_ball(max_acc_ / curvature_, *k2_);
    } else {
      const double n = max_acc_.norm();
      v = n > 0.0 ? Vec(k2_->center() + max_acc_ * (k2_->radius() / n)) : k2_->center();
    }
    best_reward = max_acc_.dot(v) - 0.5 * curvature_ * v.squaredNorm() + max_const_;
  }
  rows_.push_back({static_cast<std::int64_t>(rows_.size() + 1), loss, reward, loss_sum_ - best_loss,
                   best_reward - reward_sum_});
}

void RegretLedger::record_finite(double loss, double reward, Vec action_losses, Vec action_rewards) {
  if (!min_finite_ || !max_finite_) throw Error("record_finite on a ledger with a continuous side");
  push(loss, reward, std::move(action_losses), 0.0, std::move(action_rewards), 0.0, 0.0);
}

void RegretLedger::record_affine(double loss, double reward, Vec loss_coeff, double loss_const, Vec reward_coeff,
                                 double reward_curvature, double reward_const) {
  if (min_finite_ || max_finite_) throw Error("record_affine on a ledger with a finite side");
  push(loss, reward, std::move(loss_coeff), loss_const, std::move(reward_coeff), reward_curvature, reward_const);
}

void RegretLedger::record_finite_quadratic(double loss, double reward, Vec action_losses, Vec reward_coeff,
                                           double reward_curvature, double reward_const) {
  if (!min_finite_ || max_finite_) throw Error("record_finite_quadratic on a ledger of another kind");
  push(loss, reward, std::move(action_losses), 0.0, std::move(reward_coeff), reward_curvature, reward_const);
}

Regrets regret_audit(const RegretLedger& ledger) {
  if (ledger.size() == 0) throw EmptyInputError("regret audit of an empty ledger");
  const auto& last = ledger.series().back();
  return {last.cum_regret_min, last.cum_regret_max};
}

std::string ledger_to_csv(const RegretLedger& ledger) {
  std::ostringstream os;
  os.precision(17);
  os << "t,loss_t,reward_t,cum_regret_min,cum_regret_max\n";
  for (const auto& r : ledger.series())
    os << r.t << ',' << r.loss << ',' << r.reward << ',' << r.cum_regret_min << ',' << r.cum_regret_max << '\n';
  return os.str();
}

}  // namespace chekhov::learners
