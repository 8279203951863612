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

// Self-play equilibrium solvers with measured-regret certificates.
//
// The semi-concave solver pits follow-the-leader (min player) against
// linearized FTRL (max player) and returns the uniform mixtures over the
// iterates. The matrix solver runs exponential weights for both players
// and returns the time-averaged strategies. Both record the exact regrets
// of the realized play, which bound the exploitability of the output.

#ifndef CHEKHOV_SOLVER_HPP_
#define CHEKHOV_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chekhov/common.hpp"
#include "chekhov/games.hpp"
#include "chekhov/learners.hpp"

namespace chekhov::solver {

struct AuditPoint {
  std::int64_t t = 0;
  double regret_min = 0.0;
  double regret_max = 0.0;
  double eps_certificate = 0.0;
  std::optional<games::Exploitability> exploitability;
};

struct EquilibriumReport {
  std::int64_t T = 0;

  // Matrix games: time-averaged strategies.
  std::optional<games::MixedStrategy> d1_strategy, d2_strategy;
  // Semi-concave games: uniform mixtures over (possibly strided) iterates.
  std::optional<games::UniformMixture> d1_mixture, d2_mixture;

  double regret_min = 0.0;
  double regret_max = 0.0;
  // True when the max player's regret is the linearization upper bound
  // rather than the exact value (games without bilinear structure).
  bool regret_max_is_bound = false;
  double eps_certificate = 0.0;
  std::optional<games::Exploitability> exploitability;
  std::optional<double> value;  // E_{D1 x D2} M when computable

  // ||v_{t+1} - v_t|| for t = 1..T-1.
  std::vector<double> stability;
  std::optional<double> eta0;            // FTRL scale (semi-concave)
  std::optional<double> eta_min, eta_max;  // MW step sizes (matrix)

  std::vector<AuditPoint> audits;
  std::optional<learners::RegretLedger> ledger;
};

struct SolveOptions {
  // Rounds at which regrets, certificate and exploitability are recorded.
  std::vector<std::int64_t> audit_at;
  bool keep_ledger = false;
  // MW step size for both players; default sqrt(8 ln n / T) per player.
  std::optional<double> eta;
  // Above this many iterates the mixtures keep every stride-th point.
  std::int64_t max_stored_points = 100000;
};

EquilibriumReport solve_semiconcave(const games::SemiConcaveGame& game, std::int64_t T, const SolveOptions& options = {});
EquilibriumReport solve_matrix(const games::MatrixGame& game, std::int64_t T, const SolveOptions& options = {});

// (r1 + r2) / T; T < 1 is an error.
double epsilon_from_regrets(double regret_min, double regret_max, std::int64_t T);

// Max-player regret bound for linearized FTRL: L d2 sqrt(2T).
double ftrl_regret_bound(double lipschitz, double diameter, std::int64_t T);
// Min-player regret bound for FTL against a stable opponent: L d2 sqrt(T/2) + 2C.
double ftl_regret_bound(double lipschitz, double diameter, double payoff_bound, std::int64_t T);
// Per-round movement bound of the FTRL iterates: d2 / sqrt(2T).
double stability_bound(double diameter, std::int64_t T);

struct MinimaxCheck {
  bool pass = false;
  double margin = 0.0;  // (pure minimax + eps) - max_j E_{u~d1} M(u, j)
  double lhs = 0.0;
  double rhs = 0.0;
};

// Whether d1 is eps-optimal against the pure minimax value; pass iff the
// margin is at least -1e-9.
MinimaxCheck check_minimax_bound(const games::MatrixGame& game, const games::MixedStrategy& d1, double eps);

nlohmann::json to_json(const EquilibriumReport& report);
// One row per stored iterate: index, t, u_0.., v_0.. (semi-concave only).
std::string iterates_to_csv(const EquilibriumReport& report);

}  // namespace chekhov::solver

#endif  // CHEKHOV_SOLVER_HPP_
