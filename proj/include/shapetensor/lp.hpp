// Copyright 2026 The shapetensor Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPETENSOR_LP_HPP
#define SHAPETENSOR_LP_HPP

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "shapetensor/common.hpp"

namespace shapetensor {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vec x;     // primal solution of the standard-form problem
  Vec dual;  // simplex multipliers, one per equality row
};

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex for
//     min c'x   s.t.  A x = b,  x >= 0.
//
// Sized for problems with few rows and up to a few thousand columns, which is
// how the distance computations in this library are posed (the metric LPs are
// solved through their duals, so the row count stays at the number of free
// primal variables). Dantzig pricing with a switch to Bland's rule after a
// run of degenerate pivots.
// ---------------------------------------------------------------------------
inline LpResult lp_solve_standard(const Mat& A, const Vec& b, const Vec& c) {
  const int m = int(A.rows());
  const int n = int(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("lp_solve_standard: inconsistent dimensions");

  const int total = n + m;               // real columns + artificials
  Mat T(m, total + 1);                   // constraint rows, last col = rhs
  T.setZero();
  for (int i = 0; i < m; ++i) {
    double s = b[i] < 0 ? -1.0 : 1.0;
    T.row(i).head(n) = s * A.row(i);
    T(i, n + i) = 1.0;
    T(i, total) = s * b[i];
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const double tol = 1e-9;
  const int max_iters = 200 * (m + n + 10);

  // Runs the simplex for the given cost vector; columns with blocked[j] set
  // never enter the basis. Returns false on unboundedness.
  auto run_phase = [&](const Vec& cost, const std::vector<bool>& blocked,
                       double* obj_out) -> bool {
    Vec red(total + 1);
    for (int j = 0; j <= total; ++j) {
      double v = (j < total) ? cost[j] : 0.0;
      for (int i = 0; i < m; ++i) v -= cost[basis[i]] * T(i, j);
      red[j] = v;
    }
    int degenerate_run = 0;
    bool bland = false;
    for (int iter = 0; iter < max_iters; ++iter) {
      int enter = -1;
      if (!bland) {
        double best = -tol;
        for (int j = 0; j < total; ++j)
          if (!blocked[j] && red[j] < best) { best = red[j]; enter = j; }
      } else {
        for (int j = 0; j < total; ++j)
          if (!blocked[j] && red[j] < -tol) { enter = j; break; }
      }
      if (enter < 0) { *obj_out = -red[total]; return true; }  // optimal

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double a = T(i, enter);
        if (a > tol) {
          double ratio = T(i, total) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) { *obj_out = -std::numeric_limits<double>::infinity(); return false; }

      if (best_ratio < 1e-12) {
        if (++degenerate_run > 2 * (m + 2)) bland = true;
      } else {
        degenerate_run = 0;
      }

      double piv = T(leave, enter);
      T.row(leave) /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        double f = T(i, enter);
        if (f != 0.0) T.row(i) -= f * T.row(leave);
      }
      double fr = red[enter];
      if (fr != 0.0) red -= fr * T.row(leave).transpose();
      basis[leave] = enter;
    }
    throw std::runtime_error("lp_solve_standard: iteration limit exceeded");
  };

  // Phase 1: minimize the sum of artificials.
  Vec phase1_cost = Vec::Zero(total);
  for (int j = n; j < total; ++j) phase1_cost[j] = 1.0;
  std::vector<bool> none(total, false);
  double obj1 = 0.0;
  if (!run_phase(phase1_cost, none, &obj1))
    throw std::runtime_error("lp_solve_standard: phase 1 unbounded");
  LpResult res;
  if (obj1 > 1e-7 * (1.0 + b.cwiseAbs().maxCoeff())) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis where possible; rows where
  // that fails are redundant and are wiped so they cannot perturb phase 2.
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      int enter = -1;
      for (int j = 0; j < n; ++j)
        if (std::abs(T(i, j)) > 1e-8) { enter = j; break; }
      if (enter >= 0) {
        double piv = T(i, enter);
        T.row(i) /= piv;
        for (int k = 0; k < m; ++k) {
          if (k == i) continue;
          double f = T(k, enter);
          if (f != 0.0) T.row(k) -= f * T.row(i);
        }
        basis[i] = enter;
      } else {
        T.row(i).setZero();
        T(i, basis[i]) = 1.0;
      }
    }
  }

  Vec phase2_cost = Vec::Zero(total);
  phase2_cost.head(n) = c;
  std::vector<bool> blocked(total, false);
  for (int j = n; j < total; ++j) blocked[j] = true;
  double obj2 = 0.0;
  if (!run_phase(phase2_cost, blocked, &obj2)) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T(i, total);
  res.objective = c.dot(res.x);

  // Multipliers from the original basis columns: solve B' pi = c_B.
  Mat B(m, m);
  Vec cb(m);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) {
      B.col(i) = A.col(basis[i]);
      cb[i] = c[basis[i]];
    } else {
      B.col(i) = Vec::Unit(m, basis[i] - n);
      cb[i] = 0.0;
    }
  }
  res.dual = B.transpose().fullPivLu().solve(cb);
  return res;
}

// ---------------------------------------------------------------------------
// min c'x  s.t.  A x >= b,  x free.
// Solved through the dual  max b'y, A'y = c, y >= 0, which keeps the tableau
// row count at dim(x). The primal solution is read off the multipliers.
// ---------------------------------------------------------------------------
inline LpResult lp_min_free(const Mat& A, const Vec& b, const Vec& c) {
  LpResult dual = lp_solve_standard(A.transpose(), c, -b);
  LpResult res;
  if (dual.status == LpStatus::Infeasible) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  if (dual.status == LpStatus::Unbounded) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.objective = -dual.objective;  // dual max == primal min
  res.x = -dual.dual;               // multipliers of A'y = c give -x
  res.dual = dual.x;
  return res;
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_LP_HPP
