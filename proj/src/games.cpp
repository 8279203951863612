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

#include "chekhov/games.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace chekhov::games {

MatrixGame::MatrixGame(Mat payoff) : payoff_(std::move(payoff)) {
  if (payoff_.rows() < 1 || payoff_.cols() < 1) throw DimensionError("matrix game needs at least one row and column");
  if (!payoff_.allFinite()) throw NonFiniteError("matrix game has a non-finite payoff");
  bound_ = payoff_.cwiseAbs().maxCoeff();
}

MixedStrategy::MixedStrategy(Vec probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw DimensionError("mixed strategy over zero actions");
  if (!probs_.allFinite() || (probs_.array() < 0.0).any())
    throw Error("mixed strategy has a negative or non-finite probability");
  if (std::abs(probs_.sum() - 1.0) > kSumTolerance) throw Error("mixed strategy does not sum to 1");
}

MixedStrategy MixedStrategy::uniform(Eigen::Index n) {
  return MixedStrategy(Vec::Constant(n, 1.0 / static_cast<double>(n)));
}

MixedStrategy MixedStrategy::pure(Eigen::Index n, Eigen::Index action) {
  require_dims(action >= 0 && action < n, "pure action index out of range");
  Vec p = Vec::Zero(n);
  p(action) = 1.0;
  return MixedStrategy(std::move(p));
}

BallDomain::BallDomain(Vec center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw Error("ball radius must be positive and finite");
  if (center_.size() < 1) throw DimensionError("ball dimension must be >= 1");
  if (!center_.allFinite()) throw NonFiniteError("ball center is not finite");
}

Vec UniformMixture::mean() const {
  if (points.empty()) throw EmptyInputError("empty mixture");
  Vec s = Vec::Zero(points.front().size());
  for (const auto& p : points) s += p;
  return s / static_cast<double>(points.size());
}

MatrixGame rps_game() {
  Mat m(3, 3);
  m << 0, -1, 1,
       1, 0, -1,
      -1, 1, 0;
  return MatrixGame(std::move(m));
}

MatrixGame matching_pennies() {
  Mat m(2, 2);
  m << 1, -1,
      -1, 1;
  return MatrixGame(std::move(m));
}

MatrixGame zero_game(Eigen::Index rows, Eigen::Index cols) { return MatrixGame(Mat::Zero(rows, cols)); }

MatrixGame random_game(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return MatrixGame(std::move(m));
}

double pure_minimax_value(const MatrixGame& game) { return game.payoff().rowwise().maxCoeff().minCoeff(); }

namespace {
void check_strategy_dims(const MatrixGame& game, const MixedStrategy& d1, const MixedStrategy& d2) {
  require_dims(d1.size() == game.rows() && d2.size() == game.cols(),
               "strategy lengths (" + std::to_string(d1.size()) + ", " + std::to_string(d2.size()) +
                   ") do not match a " + std::to_string(game.rows()) + "x" + std::to_string(game.cols()) + " game");
}
}  // namespace

double evaluate_mixed(const MatrixGame& game, const MixedStrategy& d1, const MixedStrategy& d2) {
  check_strategy_dims(game, d1, d2);
  return d1.probs().dot(game.payoff() * d2.probs());
}

Exploitability exploitability(const MatrixGame& game, const MixedStrategy& d1, const MixedStrategy& d2) {
  check_strategy_dims(game, d1, d2);
  const Vec row_losses = game.payoff() * d2.probs();
  const Vec col_rewards = game.payoff().transpose() * d1.probs();
  const double value = d1.probs().dot(row_losses);
  return {std::max(0.0, value - row_losses.minCoeff()), std::max(0.0, col_rewards.maxCoeff() - value)};
}

SemiConcaveGame make_bilinear_semiconcave(const Mat& a, const BallDomain& k1, const BallDomain& k2) {
  require_dims(a.rows() == k1.dim() && a.cols() == k2.dim(), "bilinear matrix does not match domain dimensions");
  if (!a.allFinite()) throw NonFiniteError("bilinear matrix is not finite");
  const double a_norm = a.size() == 0 ? 0.0 : Eigen::JacobiSVD<Mat>(a).singularValues()(0);
  const double u_max = k1.center().norm() + k1.radius();
  const double v_max = k2.center().norm() + k2.radius();

  SemiConcaveGame g{
      .value = [a](const Vec& u, const Vec& v) { return u.dot(a * v) - 0.5 * v.squaredNorm(); },
      .grad_v = [a](const Vec& u, const Vec& v) -> Vec { return a.transpose() * u - v; },
      .grad_u = [a](const Vec&, const Vec& v) -> Vec { return a * v; },
      .k1 = AffineBall{k1, [a](const Vec& v) -> Vec { return a * v; }},
      .k2 = k2,
      .lipschitz = a_norm * u_max + v_max,
      .payoff_bound = a_norm * u_max * v_max + 0.5 * v_max * v_max,
      .bilinear = a,
  };
  return g;
}

SemiConcaveGame make_bilinear_semiconcave(std::uint64_t seed, Eigen::Index dim_u, Eigen::Index dim_v) {
  require_dims(dim_u >= 1 && dim_v >= 1, "bilinear game dimensions must be >= 1");
  Rng rng = Rng::stream(seed, "bilinear");
  Mat a(dim_u, dim_v);
  for (Eigen::Index i = 0; i < dim_u; ++i)
    for (Eigen::Index j = 0; j < dim_v; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  // Off-origin K2 center (norm <= 1/2): with both balls at the origin the
  // center start is already the equilibrium and self-play never moves.
  Vec c2(dim_v);
  const double half_width = 0.5 / std::sqrt(static_cast<double>(dim_v));
  for (Eigen::Index j = 0; j < dim_v; ++j) c2(j) = rng.uniform(-half_width, half_width);
  return make_bilinear_semiconcave(a, BallDomain::unit(dim_u), BallDomain(c2, 1.0));
}

double evaluate_mixture(const SemiConcaveGame& game, const UniformMixture& d1, const UniformMixture& d2) {
  if (d1.points.empty() || d2.points.empty()) throw EmptyInputError("empty mixture");
  double total = 0.0;
  for (const auto& u : d1.points)
    for (const auto& v : d2.points) total += game.value(u, v);
  return total / (static_cast<double>(d1.points.size()) * static_cast<double>(d2.points.size()));
}

Exploitability exploitability(const SemiConcaveGame& game, const UniformMixture& d1, const UniformMixture& d2) {
  if (!game.bilinear) throw OracleError("exploitability needs closed-form best responses (bilinear game)");
  const auto* k1 = std::get_if<AffineBall>(&game.k1);
  if (!k1) throw OracleError("bilinear exploitability expects a ball for the min player");
  double v_sq = 0.0;
  for (const auto& v : d2.points) v_sq += v.squaredNorm();
  v_sq /= static_cast<double>(d2.points.size());
  return bilinear_exploitability(*game.bilinear, k1->ball, game.k2, d1.mean(), d2.mean(), v_sq);
}

Exploitability bilinear_exploitability(const Mat& a, const BallDomain& k1, const BallDomain& k2, const Vec& u_bar,
                                       const Vec& v_bar, double v_sq) {
  require_dims(a.rows() == k1.dim() && a.cols() == k2.dim(), "bilinear matrix does not match the domains");
  require_dims(u_bar.size() == k1.dim() && v_bar.size() == k2.dim(), "mixture means do not match the domains");
  const Vec coeff = a * v_bar;
  const double value = u_bar.dot(coeff) - 0.5 * v_sq;

  const double cn = coeff.norm();
  const Vec u_star = cn > 0.0 ? Vec(k1.center() - coeff * (k1.radius() / cn)) : k1.center();
  const double min_loss = u_star.dot(coeff) - 0.5 * v_sq;

  const Vec v_star = project_ball(a.transpose() * u_bar, k2);
  const double max_reward = u_bar.dot(a * v_star) - 0.5 * v_star.squaredNorm();

  return {std::max(0.0, value - min_loss), std::max(0.0, max_reward - value)};
}

MatrixGame parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) throw Error("empty cell on line " + std::to_string(line_no));
      cell = cell.substr(b, e - b + 1);
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) throw Error("bad number '" + cell + "' on line " + std::to_string(line_no));
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DimensionError("ragged payoff row on line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DimensionError("payoff CSV has no rows");
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return MatrixGame(std::move(m));
}

MatrixGame load_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open payoff file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_matrix_csv(ss.str());
}

}  // namespace chekhov::games
