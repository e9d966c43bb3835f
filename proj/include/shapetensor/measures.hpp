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

#ifndef SHAPETENSOR_MEASURES_HPP
#define SHAPETENSOR_MEASURES_HPP

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "shapetensor/common.hpp"
#include "shapetensor/lp.hpp"
#include "shapetensor/quadrature.hpp"

namespace shapetensor {

/// Finitely supported nonnegative measure on S^{n-1}: unit-vector atoms with
/// nonnegative weights.
struct DiscreteMeasure {
  int dim = 0;
  std::vector<Vec> atoms;
  std::vector<double> weights;

  DiscreteMeasure() = default;
  explicit DiscreteMeasure(int n) : dim(n) {}

  int size() const { return int(atoms.size()); }

  double mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  void add(const Vec& u, double w) {
    if (u.size() != dim) throw std::invalid_argument("DiscreteMeasure::add: wrong dimension");
    if (std::abs(u.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("DiscreteMeasure::add: atom is not a unit vector");
    if (w < 0.0) throw std::invalid_argument("DiscreteMeasure::add: negative weight");
    atoms.push_back(u);
    weights.push_back(w);
  }

  static DiscreteMeasure dirac(const Vec& u, double w = 1.0) {
    DiscreteMeasure m(int(u.size()));
    m.add(u, w);
    return m;
  }
};

inline Vec first_moment(const DiscreteMeasure& mu) {
  Vec m = Vec::Zero(mu.dim);
  for (int i = 0; i < mu.size(); ++i) m += mu.weights[i] * mu.atoms[i];
  return m;
}

/// Matrix of second order moments with its spectral decomposition
/// (eigenvalues ascending).
struct MomentMatrix {
  Mat M;
  Vec eigenvalues;
  Mat eigenvectors;
};

inline MomentMatrix moment_matrix(const DiscreteMeasure& mu) {
  MomentMatrix mm;
  mm.M = Mat::Zero(mu.dim, mu.dim);
  for (int i = 0; i < mu.size(); ++i)
    mm.M += mu.weights[i] * (mu.atoms[i] * mu.atoms[i].transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(mm.M);
  mm.eigenvalues = es.eigenvalues();
  mm.eigenvectors = es.eigenvectors();
  return mm;
}

enum class MeasureClassTag { FullDim, RankOne, NotSurfaceArea, Zero };

struct MeasureClass {
  MeasureClassTag tag = MeasureClassTag::Zero;
  Vec axis;                  // RankOne: unit eigenvector of the positive eigenvalue
  double surface_area = 0.0; // RankOne: mass/2
};

/// Decides whether the measure is a surface area measure: first moments must
/// vanish, and the second-moment matrix must be either positive definite
/// (a full-dimensional body) or have a single positive eigenvalue (a
/// lower-dimensional body, mass split over an antipodal pair).
inline MeasureClass classify(const DiscreteMeasure& mu, double tol_abs = 1e-12,
                             double tol_rel = 1e-8) {
  MeasureClass out;
  double mass = mu.mass();
  if (mass <= tol_abs) {
    out.tag = MeasureClassTag::Zero;
    return out;
  }
  if (first_moment(mu).norm() > tol_rel * mass) {
    out.tag = MeasureClassTag::NotSurfaceArea;
    return out;
  }
  MomentMatrix mm = moment_matrix(mu);
  int n = mu.dim;
  double lmin = mm.eigenvalues[0];
  double lsecond = mm.eigenvalues[n - 2];
  double lmax = mm.eigenvalues[n - 1];
  if (lmin > tol_rel * mass) {
    out.tag = MeasureClassTag::FullDim;
    return out;
  }
  if (lsecond <= tol_rel * mass && lmax > tol_rel * mass) {
    out.tag = MeasureClassTag::RankOne;
    out.axis = mm.eigenvectors.col(n - 1);
    out.surface_area = 0.5 * mass;
    return out;
  }
  out.tag = MeasureClassTag::NotSurfaceArea;
  return out;
}

// ---------------------------------------------------------------------------
// Dudley distance between discrete measures:
//     sup { |Int f d(mu - nu)| : sup|f| + Lip(f) <= 1 }.
//
// For finitely supported measures the sup is an exact finite LP over the
// values f_i at the atoms of mu - nu together with (s, t):
//     max sum c_i f_i   s.t. |f_i| <= s, |f_i - f_j| <= t |x_i - x_j|,
//                            s + t <= 1.
// Any feasible (f, s, t) extends to the whole sphere with the same constants
// (McShane extension clipped to [-s, s]), and any admissible f restricts to a
// feasible point, so the LP value equals the metric. The LP is solved in its
// dual, which has one equality row per atom plus two.
// ---------------------------------------------------------------------------
inline double dudley(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim != nu.dim) throw std::invalid_argument("dudley: dimension mismatch");
  // Signed weights of mu - nu on the merged support.
  std::vector<Vec> pts;
  std::vector<double> c;
  auto absorb = [&](const DiscreteMeasure& m, double sign) {
    for (int i = 0; i < m.size(); ++i) {
      bool found = false;
      for (size_t p = 0; p < pts.size(); ++p) {
        if ((pts[p] - m.atoms[i]).norm() < 1e-12) {
          c[p] += sign * m.weights[i];
          found = true;
          break;
        }
      }
      if (!found) {
        pts.push_back(m.atoms[i]);
        c.push_back(sign * m.weights[i]);
      }
    }
  };
  absorb(mu, 1.0);
  absorb(nu, -1.0);
  // Atoms where the signed difference vanishes do not affect the optimum.
  {
    std::vector<Vec> fp;
    std::vector<double> fc;
    for (size_t p = 0; p < pts.size(); ++p)
      if (std::abs(c[p]) > 0.0) {
        fp.push_back(pts[p]);
        fc.push_back(c[p]);
      }
    pts.swap(fp);
    c.swap(fc);
  }
  const int N = int(pts.size());
  if (N == 0) return 0.0;

  const int P = N * (N - 1) / 2;
  const int nv = 2 * N + 2 * P + 3;  // r+, r-, q+, q-, rho, w1, w2
  const int rows = N + 2;
  Mat A = Mat::Zero(rows, nv);
  Vec b = Vec::Zero(rows);
  Vec cost = Vec::Zero(nv);
  const int q_base = 2 * N;
  const int rho = 2 * N + 2 * P;
  cost[rho] = 1.0;

  for (int i = 0; i < N; ++i) {
    A(i, i) = 1.0;           // y_{r_i+}
    A(i, N + i) = -1.0;      // y_{r_i-}
    b[i] = c[i];
  }
  int p = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j, ++p) {
      A(i, q_base + 2 * p) = 1.0;       // q+ : f_i - f_j <= t d
      A(j, q_base + 2 * p) = -1.0;
      A(i, q_base + 2 * p + 1) = -1.0;  // q- : f_j - f_i <= t d
      A(j, q_base + 2 * p + 1) = 1.0;
    }
  }
  // s row: -(sum of box multipliers) + rho - w1 = 0
  int srow = N, trow = N + 1;
  for (int i = 0; i < N; ++i) {
    A(srow, i) = -1.0;
    A(srow, N + i) = -1.0;
  }
  A(srow, rho) = 1.0;
  A(srow, rho + 1) = -1.0;
  // t row: -(sum d_p (q+ + q-)) + rho - w2 = 0
  p = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j, ++p) {
      double d = (pts[i] - pts[j]).norm();
      A(trow, q_base + 2 * p) = -d;
      A(trow, q_base + 2 * p + 1) = -d;
    }
  }
  A(trow, rho) = 1.0;
  A(trow, rho + 2) = -1.0;

  LpResult res = lp_solve_standard(A, b, cost);
  if (res.status != LpStatus::Optimal)
    throw std::runtime_error("dudley: LP did not reach an optimum");
  return res.objective;
}

/// Spherical Lebesgue measure scaled by a constant factor, discretized on a
/// quadrature rule of the requested exactness.
inline DiscreteMeasure discretize_sphere(int n, double scale, int exact_degree) {
  QuadratureRule rule = sphere_quadrature(n, exact_degree);
  DiscreteMeasure mu(n);
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    mu.add(rule.nodes[i], scale * rule.weights[i]);
  return mu;
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_MEASURES_HPP
