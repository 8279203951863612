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

#include "chekhov/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chekhov::solver {

namespace {

bool wanted(const std::vector<std::int64_t>& at, std::int64_t t) {
  return std::find(at.begin(), at.end(), t) != at.end();
}

std::int64_t stride_for(std::int64_t T, std::int64_t max_points) {
  if (max_points < 1) throw Error("max_stored_points must be >= 1");
  return T <= max_points ? 1 : (T + max_points - 1) / max_points;
}

void check_finite_value(double x, std::int64_t t) {
  if (!std::isfinite(x)) throw NonFiniteError("non-finite payoff at round " + std::to_string(t));
}

// Exploitability of (Uni{u}, Uni{v}) for M = u^T A v - 1/2 ||v||^2 when
// the min player's domain is a finite point set.
games::Exploitability finite_bilinear_exploitability(const Mat& a, const games::FinitePointSet& k1,
                                                     const games::BallDomain& k2, const Vec& u_bar,
                                                     const Vec& v_bar, double v_sq) {
  const Vec coeff = a * v_bar;
  const double value = u_bar.dot(coeff) - 0.5 * v_sq;
  double min_loss = k1.points.front().dot(coeff);
  for (const auto& p : k1.points) min_loss = std::min(min_loss, p.dot(coeff));
  min_loss -= 0.5 * v_sq;
  const Vec v_star = games::project_ball(a.transpose() * u_bar, k2);
  const double max_reward = u_bar.dot(a * v_star) - 0.5 * v_star.squaredNorm();
  return {std::max(0.0, value - min_loss), std::max(0.0, max_reward - value)};
}

}  // namespace

double epsilon_from_regrets(double regret_min, double regret_max, std::int64_t T) {
  if (T < 1) throw Error("epsilon_from_regrets needs T >= 1");
  return (regret_min + regret_max) / static_cast<double>(T);
}

double ftrl_regret_bound(double lipschitz, double diameter, std::int64_t T) {
  return lipschitz * diameter * std::sqrt(2.0 * static_cast<double>(T));
}

double ftl_regret_bound(double lipschitz, double diameter, double payoff_bound, std::int64_t T) {
  return lipschitz * diameter * std::sqrt(0.5 * static_cast<double>(T)) + 2.0 * payoff_bound;
}

double stability_bound(double diameter, std::int64_t T) {
  return diameter / std::sqrt(2.0 * static_cast<double>(T));
}

EquilibriumReport solve_semiconcave(const games::SemiConcaveGame& game, std::int64_t T, const SolveOptions& options) {
  if (T < 1) throw Error("solver needs T >= 1");
  if (!game.value || !game.grad_v) throw Error("semi-concave game needs value and grad_v");
  if (!(game.lipschitz > 0.0)) throw Error("semi-concave game needs a positive Lipschitz constant");

  const auto* ball_k1 = std::get_if<games::AffineBall>(&game.k1);
  const auto* finite_k1 = std::get_if<games::FinitePointSet>(&game.k1);
  if (finite_k1 && finite_k1->points.empty()) throw EmptyInputError("finite min-player domain is empty");
  if (ball_k1 && !ball_k1->linear_coefficient) throw Error("affine min-player domain needs linear_coefficient");
  const bool bilinear = game.bilinear.has_value();

  EquilibriumReport rep;
  rep.T = T;
  rep.regret_max_is_bound = !bilinear;

  learners::RegretLedger ledger = ball_k1 ? learners::RegretLedger::affine_quadratic(ball_k1->ball, game.k2)
                                          : learners::RegretLedger::finite_quadratic(
                                                static_cast<Eigen::Index>(finite_k1->points.size()), game.k2);
  learners::FtlState ftl = ball_k1 ? learners::FtlState::for_ball(ball_k1->ball)
                                   : learners::FtlState::for_finite(static_cast<Eigen::Index>(finite_k1->points.size()));
  const learners::FtlOracle oracle = ball_k1 ? learners::ball_linear_oracle(ball_k1->ball) : learners::FtlOracle{};
  auto ftrl = learners::FtrlLinState::for_lipschitz(game.k2, game.lipschitz, T);
  rep.eta0 = ftrl.eta0;

  const std::int64_t stride = stride_for(T, options.max_stored_points);
  games::UniformMixture d1, d2;
  d1.stride = d2.stride = stride;

  const Eigen::Index du = ball_k1 ? ball_k1->ball.dim() : finite_k1->points.front().size();
  Vec u_sum = Vec::Zero(du);
  Vec v_sum = Vec::Zero(game.k2.dim());
  double v_sq_sum = 0.0;

  Vec v = learners::ftrl_linearized_step(ftrl, std::nullopt);
  rep.stability.reserve(static_cast<std::size_t>(T - 1));

  for (std::int64_t t = 1; t <= T; ++t) {
    const Vec u = ball_k1 ? learners::ftl_step(ftl, oracle)
                          : finite_k1->points[static_cast<std::size_t>(learners::ftl_step_finite(ftl))];
    const double m = game.value(u, v);
    check_finite_value(m, t);
    const Vec gv = game.grad_v(u, v);
    if (!gv.allFinite()) throw NonFiniteError("non-finite reward gradient at round " + std::to_string(t));

    // Max player's reward g_t(w) = M(u_t, w): exact quadratic when the game
    // is bilinear, otherwise its tangent plane at v_t (an upper bound by
    // concavity, so the audited regret stays an upper bound).
    Vec b;
    double q, r;
    if (bilinear) {
      b = game.bilinear->transpose() * u;
      q = 1.0;
      r = 0.0;
    } else {
      b = gv;
      q = 0.0;
      r = m - gv.dot(v);
    }

    if (ball_k1) {
      Vec a = ball_k1->linear_coefficient(v);
      if (!a.allFinite()) throw NonFiniteError("non-finite loss coefficient at round " + std::to_string(t));
      ledger.record_affine(m, m, a, m - a.dot(u), b, q, r);
      ftl.absorb(a);
    } else {
      Vec losses(static_cast<Eigen::Index>(finite_k1->points.size()));
      for (std::size_t i = 0; i < finite_k1->points.size(); ++i) {
        losses(static_cast<Eigen::Index>(i)) = game.value(finite_k1->points[i], v);
      }
      if (!losses.allFinite()) throw NonFiniteError("non-finite action loss at round " + std::to_string(t));
      ledger.record_finite_quadratic(m, m, losses, b, q, r);
      ftl.absorb(losses);
    }

    u_sum += u;
    v_sum += v;
    v_sq_sum += v.squaredNorm();
    if ((t - 1) % stride == 0) {
      d1.points.push_back(u);
      d2.points.push_back(v);
    }

    if (wanted(options.audit_at, t) || t == T) {
      const auto& row = ledger.series().back();
      AuditPoint ap{t, row.cum_regret_min, row.cum_regret_max,
                    epsilon_from_regrets(row.cum_regret_min, row.cum_regret_max, t), std::nullopt};
      if (bilinear) {
        const double n = static_cast<double>(t);
        const Vec u_bar = u_sum / n, v_bar = v_sum / n;
        ap.exploitability =
            ball_k1 ? games::bilinear_exploitability(*game.bilinear, ball_k1->ball, game.k2, u_bar, v_bar, v_sq_sum / n)
                    : finite_bilinear_exploitability(*game.bilinear, *finite_k1, game.k2, u_bar, v_bar, v_sq_sum / n);
        if (t == T) rep.value = u_bar.dot(*game.bilinear * v_bar) - 0.5 * v_sq_sum / n;
      }
      if (wanted(options.audit_at, t)) rep.audits.push_back(ap);
      if (t == T) {
        rep.regret_min = ap.regret_min;
        rep.regret_max = ap.regret_max;
        rep.eps_certificate = ap.eps_certificate;
        rep.exploitability = ap.exploitability;
      }
    }

    if (t < T) {
      Vec next = learners::ftrl_linearized_step(ftrl, gv);
      rep.stability.push_back((next - v).norm());
      v = std::move(next);
    }
  }

  rep.d1_mixture = std::move(d1);
  rep.d2_mixture = std::move(d2);
  if (options.keep_ledger) rep.ledger = std::move(ledger);
  return rep;
}

EquilibriumReport solve_matrix(const games::MatrixGame& game, std::int64_t T, const SolveOptions& options) {
  if (T < 1) throw Error("solver needs T >= 1");
  const Mat& m = game.payoff();
  const Eigen::Index rows = m.rows(), cols = m.cols();

  EquilibriumReport rep;
  rep.T = T;
  rep.eta_min = options.eta ? *options.eta : learners::MwState::default_eta(rows, T);
  rep.eta_max = options.eta ? *options.eta : learners::MwState::default_eta(cols, T);
  learners::MwState min_player(rows, *rep.eta_min);
  learners::MwState max_player(cols, *rep.eta_max);
  auto ledger = learners::RegretLedger::finite(rows, cols);

  Vec p = min_player.strategy().probs();
  Vec q = max_player.strategy().probs();
  Vec p_sum = Vec::Zero(rows), q_sum = Vec::Zero(cols);
  rep.stability.reserve(static_cast<std::size_t>(T - 1));

  for (std::int64_t t = 1; t <= T; ++t) {
    const Vec row_losses = m * q;
    const Vec col_rewards = m.transpose() * p;
    const double realized = p.dot(row_losses);
    check_finite_value(realized, t);
    ledger.record_finite(realized, realized, row_losses, col_rewards);
    p_sum += p;
    q_sum += q;

    if (wanted(options.audit_at, t) || t == T) {
      const auto& row = ledger.series().back();
      const games::MixedStrategy d1(p_sum / static_cast<double>(t));
      const games::MixedStrategy d2(q_sum / static_cast<double>(t));
      AuditPoint ap{t, row.cum_regret_min, row.cum_regret_max,
                    epsilon_from_regrets(row.cum_regret_min, row.cum_regret_max, t),
                    games::exploitability(game, d1, d2)};
      if (wanted(options.audit_at, t)) rep.audits.push_back(ap);
      if (t == T) {
        rep.regret_min = ap.regret_min;
        rep.regret_max = ap.regret_max;
        rep.eps_certificate = ap.eps_certificate;
        rep.exploitability = ap.exploitability;
        rep.value = games::evaluate_mixed(game, d1, d2);
        rep.d1_strategy = d1;
        rep.d2_strategy = d2;
      }
    }

    if (t < T) {
      p = learners::mw_step(min_player, row_losses, false).probs();
      Vec next = learners::mw_step(max_player, col_rewards, true).probs();
      rep.stability.push_back((next - q).norm());
      q = std::move(next);
    }
  }
  if (options.keep_ledger) rep.ledger = std::move(ledger);
  return rep;
}

MinimaxCheck check_minimax_bound(const games::MatrixGame& game, const games::MixedStrategy& d1, double eps) {
  require_dims(d1.size() == game.rows(), "strategy length differs from the number of rows");
  MinimaxCheck c;
  c.lhs = (d1.probs().transpose() * game.payoff()).maxCoeff();
  c.rhs = games::pure_minimax_value(game) + eps;
  c.margin = c.rhs - c.lhs;
  c.pass = c.margin >= -1e-9;
  return c;
}

namespace {
nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json exploit_json(const std::optional<games::Exploitability>& e) {
  if (!e) return nullptr;
  return {{"eps1", e->eps1}, {"eps2", e->eps2}};
}
}  // namespace

nlohmann::json to_json(const EquilibriumReport& r) {
  nlohmann::json j;
  j["T"] = r.T;
  j["eps_certificate"] = r.eps_certificate;
  j["regrets"] = {{"min", r.regret_min}, {"max", r.regret_max}, {"max_is_bound", r.regret_max_is_bound}};
  j["exploitability"] = exploit_json(r.exploitability);
  j["value"] = r.value ? nlohmann::json(*r.value) : nlohmann::json(nullptr);
  if (r.eta0) j["eta0"] = *r.eta0;
  if (r.eta_min) j["eta"] = {{"min", *r.eta_min}, {"max", *r.eta_max}};
  if (r.d1_strategy) {
    j["d1"] = vec_json(r.d1_strategy->probs());
    j["d2"] = vec_json(r.d2_strategy->probs());
  }
  if (r.d1_mixture) {
    j["mixture_size"] = r.d1_mixture->points.size();
    j["stride"] = r.d1_mixture->stride;
  }
  j["max_stability_step"] = r.stability.empty() ? 0.0 : *std::max_element(r.stability.begin(), r.stability.end());
  nlohmann::json audits = nlohmann::json::array();
  for (const auto& a : r.audits)
    audits.push_back({{"t", a.t},
                      {"regret_min", a.regret_min},
                      {"regret_max", a.regret_max},
                      {"eps_certificate", a.eps_certificate},
                      {"exploitability", exploit_json(a.exploitability)}});
  j["audits"] = audits;
  return j;
}

std::string iterates_to_csv(const EquilibriumReport& r) {
  if (!r.d1_mixture || !r.d2_mixture) throw Error("report has no stored iterates");
  const auto& u = r.d1_mixture->points;
  const auto& v = r.d2_mixture->points;
  std::ostringstream os;
  os.precision(17);
  os << "index,t";
  for (Eigen::Index i = 0; i < u.front().size(); ++i) os << ",u_" << i;
  for (Eigen::Index i = 0; i < v.front().size(); ++i) os << ",v_" << i;
  os << '\n';
  for (std::size_t k = 0; k < u.size(); ++k) {
    os << k << ',' << 1 + static_cast<std::int64_t>(k) * r.d1_mixture->stride;
    for (Eigen::Index i = 0; i < u[k].size(); ++i) os << ',' << u[k](i);
    for (Eigen::Index i = 0; i < v[k].size(); ++i) os << ',' << v[k](i);
    os << '\n';
  }
  return os.str();
}

}  // namespace chekhov::solver
