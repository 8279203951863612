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

// Independent reference computations used only by the tests.

#ifndef CHEKHOV_TESTS_ORACLES_HPP_
#define CHEKHOV_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// E_{i~p, j~q} M[i][j] by an explicit double loop.
inline double double_sum(const Mat& m, const Vec& p, const Vec& q) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s += p(i) * q(j) * m(i, j);
  return s;
}

// Best-response gains by enumerating every pure deviation.
inline std::pair<double, double> enumerate_exploitability(const Mat& m, const Vec& p, const Vec& q) {
  const double e = double_sum(m, p, q);
  double best_row = INFINITY, best_col = -INFINITY;
  for (int i = 0; i < m.rows(); ++i) {
    double r = 0.0;
    for (int j = 0; j < m.cols(); ++j) r += q(j) * m(i, j);
    best_row = std::min(best_row, r);
  }
  for (int j = 0; j < m.cols(); ++j) {
    double c = 0.0;
    for (int i = 0; i < m.rows(); ++i) c += p(i) * m(i, j);
    best_col = std::max(best_col, c);
  }
  return {std::max(0.0, e - best_row), std::max(0.0, best_col - e)};
}

struct Equilibrium {
  Vec p, q;
  double value;
};

// Support enumeration for small zero-sum games (rows minimize). Tries every
// pair of equal-size supports, solves the indifference equations and keeps
// the first pair that is a Nash equilibrium.
inline std::optional<Equilibrium> enumerate_nash(const Mat& m, double tol = 1e-9) {
  const int r = static_cast<int>(m.rows()), c = static_cast<int>(m.cols());
  for (int k = 1; k <= std::min(r, c); ++k) {
    for (int rs = 0; rs < (1 << r); ++rs) {
      if (__builtin_popcount(rs) != k) continue;
      for (int cs = 0; cs < (1 << c); ++cs) {
        if (__builtin_popcount(cs) != k) continue;
        std::vector<int> ri, ci;
        for (int i = 0; i < r; ++i)
          if (rs >> i & 1) ri.push_back(i);
        for (int j = 0; j < c; ++j)
          if (cs >> j & 1) ci.push_back(j);
        // Unknowns (q on ci, w): M[ri, ci] q - w = 0, sum q = 1.
        Mat a = Mat::Zero(k + 1, k + 1);
        Vec b = Vec::Zero(k + 1);
        for (int x = 0; x < k; ++x) {
          for (int y = 0; y < k; ++y) a(x, y) = m(ri[x], ci[y]);
          a(x, k) = -1.0;
        }
        a.row(k).head(k).setOnes();
        b(k) = 1.0;
        Eigen::FullPivLU<Mat> lu_q(a);
        if (!lu_q.isInvertible()) continue;
        const Vec sq = lu_q.solve(b);
        Mat a2 = Mat::Zero(k + 1, k + 1);
        for (int y = 0; y < k; ++y) {
          for (int x = 0; x < k; ++x) a2(y, x) = m(ri[x], ci[y]);
          a2(y, k) = -1.0;
        }
        a2.row(k).head(k).setOnes();
        Eigen::FullPivLU<Mat> lu_p(a2);
        if (!lu_p.isInvertible()) continue;
        const Vec sp = lu_p.solve(b);
        if (sq.head(k).minCoeff() < -tol || sp.head(k).minCoeff() < -tol) continue;
        Vec p = Vec::Zero(r), q = Vec::Zero(c);
        for (int x = 0; x < k; ++x) p(ri[x]) = sp(x);
        for (int y = 0; y < k; ++y) q(ci[y]) = sq(y);
        const double w = double_sum(m, p, q);
        const Vec rows = m * q;
        const Vec cols = m.transpose() * p;
        if (rows.minCoeff() < w - 1e-7 || cols.maxCoeff() > w + 1e-7) continue;
        return Equilibrium{p, q, w};
      }
    }
  }
  return std::nullopt;
}

// Central finite-difference gradient of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  Vec y = x;
  for (int i = 0; i < x.size(); ++i) {
    y(i) = x(i) + h;
    const double up = f(y);
    y(i) = x(i) - h;
    const double down = f(y);
    y(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace oracles

#endif  // CHEKHOV_TESTS_ORACLES_HPP_
