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

// Finite matrix games, continuous semi-concave games over Euclidean balls,
// and exact evaluation of pure and mixed strategies.
//
// Convention: the min player (rows / u) minimizes M, the max player
// (columns / v) maximizes it.

#ifndef CHEKHOV_GAMES_HPP_
#define CHEKHOV_GAMES_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chekhov/common.hpp"

namespace chekhov::games {

class MatrixGame {
 public:
  // Throws DimensionError when empty, NonFiniteError on a non-finite entry.
  explicit MatrixGame(Mat payoff);

  const Mat& payoff() const { return payoff_; }
  Eigen::Index rows() const { return payoff_.rows(); }
  Eigen::Index cols() const { return payoff_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return payoff_(i, j); }
  // Max absolute entry.
  double payoff_bound() const { return bound_; }

 private:
  Mat payoff_;
  double bound_ = 0.0;
};

// Probability vector over finite actions.
class MixedStrategy {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit MixedStrategy(Vec probs);
  static MixedStrategy uniform(Eigen::Index n);
  static MixedStrategy pure(Eigen::Index n, Eigen::Index action);

  const Vec& probs() const { return probs_; }
  Eigen::Index size() const { return probs_.size(); }
  double operator[](Eigen::Index i) const { return probs_(i); }

 private:
  Vec probs_;
};

class BallDomain {
 public:
  BallDomain(Vec center, double radius);
  static BallDomain unit(Eigen::Index dim) { return BallDomain(Vec::Zero(dim), 1.0); }

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  double diameter() const { return 2.0 * radius_; }
  Eigen::Index dim() const { return center_.size(); }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x, double slack = 1e-12) const {
    return (x - center_).norm() <= radius_ * (1.0 + slack) + slack;
  }

 private:
  Vec center_;
  double radius_;
};

// Euclidean projection onto a ball. Points already inside are returned
// unchanged, so the map is exactly idempotent.
template <typename Derived>
Vec project_ball(const Eigen::MatrixBase<Derived>& point, const BallDomain& domain) {
  require_dims(point.size() == domain.dim(), "projection: point and ball dimensions differ");
  Vec offset = point - domain.center();
  const double n = offset.norm();
  if (n <= domain.radius()) return point;
  return domain.center() + offset * (domain.radius() / n);
}

// Finite point set for the min player.
struct FinitePointSet {
  std::vector<Vec> points;
};

// Ball for the min player whose loss is affine in u:
//   M(u, v) = linear_coefficient(v)^T u + (terms independent of u),
// which makes the follow-the-leader minimizer closed form.
struct AffineBall {
  BallDomain ball;
  std::function<Vec(const Vec& v)> linear_coefficient;
};

using MinDomain = std::variant<FinitePointSet, AffineBall>;

// Zero-sum game that is concave in the max player's variable v for every
// fixed u. K2 is always a ball.
struct SemiConcaveGame {
  std::function<double(const Vec& u, const Vec& v)> value;
  std::function<Vec(const Vec& u, const Vec& v)> grad_v;
  std::function<Vec(const Vec& u, const Vec& v)> grad_u;  // optional
  MinDomain k1;
  BallDomain k2;
  double lipschitz = 1.0;      // bound on ||grad_v|| over K1 x K2
  double payoff_bound = 1.0;   // bound on |M| over K1 x K2
  // Present for M(u, v) = u^T A v - 1/2 ||v||^2, enabling closed-form best
  // responses against mixtures.
  std::optional<Mat> bilinear;
};

// Uniform distribution over an ordered list of pure decisions. `stride`
// records the subsampling applied when the full iterate list was too long.
struct UniformMixture {
  std::vector<Vec> points;
  Eigen::Index stride = 1;

  Vec mean() const;
};

MatrixGame rps_game();
MatrixGame matching_pennies();
MatrixGame zero_game(Eigen::Index rows, Eigen::Index cols);
// Entries uniform in [lo, hi].
MatrixGame random_game(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo = -1.0, double hi = 1.0);

// min over rows of the max over columns.
double pure_minimax_value(const MatrixGame& game);

double evaluate_mixed(const MatrixGame& game, const MixedStrategy& d1, const MixedStrategy& d2);

struct Exploitability {
  double eps1 = 0.0;  // gain of the min player's best response
  double eps2 = 0.0;  // gain of the max player's best response
  double max() const { return std::max(eps1, eps2); }
};

Exploitability exploitability(const MatrixGame& game, const MixedStrategy& d1, const MixedStrategy& d2);

// M(u, v) = u^T A v - 1/2 ||v||^2 with A uniform in [-1, 1], K1 the unit
// ball at the origin and K2 a unit ball whose center (norm <= 1/2) is also
// drawn from the seed.
SemiConcaveGame make_bilinear_semiconcave(std::uint64_t seed, Eigen::Index dim_u, Eigen::Index dim_v);
SemiConcaveGame make_bilinear_semiconcave(const Mat& a, const BallDomain& k1, const BallDomain& k2);

// Exploitability of a pair of uniform mixtures on a game with bilinear
// structure. Throws OracleError when the game has no closed form.
Exploitability exploitability(const SemiConcaveGame& game, const UniformMixture& d1, const UniformMixture& d2);

// Same quantity from the sufficient statistics of the two mixtures: the
// mean of D1, the mean of D2, and the mean squared norm under D2.
Exploitability bilinear_exploitability(const Mat& a, const BallDomain& k1, const BallDomain& k2, const Vec& u_mean,
                                       const Vec& v_mean, double v_sq_mean);

// E_{u~D1, v~D2} M(u, v) by exhaustive double sum (O(|D1| |D2|)).
double evaluate_mixture(const SemiConcaveGame& game, const UniformMixture& d1, const UniformMixture& d2);

// Plain decimal CSV, one payoff row per line.
MatrixGame load_matrix_csv(const std::string& path);
MatrixGame parse_matrix_csv(const std::string& text);

}  // namespace chekhov::games

#endif  // CHEKHOV_GAMES_HPP_
