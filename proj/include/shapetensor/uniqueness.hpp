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

#ifndef SHAPETENSOR_UNIQUENESS_HPP
#define SHAPETENSOR_UNIQUENESS_HPP

#include <stdexcept>
#include <vector>

#include "shapetensor/bodies.hpp"
#include "shapetensor/measures.hpp"

namespace shapetensor {

// ---------------------------------------------------------------------------
// Certificate polynomials witnessing that a finitely supported measure is
// determined by finitely many moments: p >= 0 on the sphere, vanishing
// exactly on the support. In full-dimensional mode the degree is m - n + 2
// (a sum of squared hyperplane terms times linear factors); in general mode
// it is the plain product of the m linear factors.
// ---------------------------------------------------------------------------
struct CertificatePolynomial {
  std::vector<Vec> support;          // u_1 .. u_m
  bool general = false;
  int degree = 0;
  std::vector<int> selected;         // n+1 affinely spanning indices
  std::vector<Vec> plane_normals;    // v^j for the hyperplane through the others
  std::vector<double> plane_offsets; // beta_j

  double operator()(const Vec& u) const {
    if (general) {
      double p = 1.0;
      for (const Vec& s : support) p *= (1.0 - u.dot(s));
      return p;
    }
    double common = 1.0;
    std::vector<bool> in_selected(support.size(), false);
    for (int idx : selected) in_selected[idx] = true;
    for (size_t l = 0; l < support.size(); ++l)
      if (!in_selected[l]) common *= (1.0 - u.dot(support[l]));
    double total = 0.0;
    for (size_t j = 0; j < selected.size(); ++j) {
      double lin = u.dot(plane_normals[j]) - plane_offsets[j];
      total += lin * lin * (1.0 - u.dot(support[selected[j]]));
    }
    return total * common;
  }
};

enum class CertificateMode { FullDim, General };

inline CertificatePolynomial build_certificate(const std::vector<Vec>& support,
                                               CertificateMode mode) {
  if (support.empty()) throw std::invalid_argument("build_certificate: empty support");
  const int n = int(support[0].size());
  const int m = int(support.size());
  CertificatePolynomial cert;
  cert.support = support;
  if (mode == CertificateMode::General) {
    cert.general = true;
    cert.degree = m;
    return cert;
  }

  // greedy affinely spanning subset of n+1 vectors, deterministic scan order
  std::vector<int> sel = {0};
  Mat dirs(n, 0);
  for (int i = 1; i < m && int(sel.size()) < n + 1; ++i) {
    Mat trial(n, dirs.cols() + 1);
    trial << dirs, (support[i] - support[sel[0]]);
    if (Eigen::ColPivHouseholderQR<Mat>(trial).rank() == trial.cols()) {
      dirs = trial;
      sel.push_back(i);
    }
  }
  if (int(sel.size()) < n + 1)
    throw std::invalid_argument("build_certificate: support is not affinely spanning");
  cert.selected = sel;
  cert.degree = m - n + 2;

  // hyperplane through the selected vectors other than sel[j]
  for (int j = 0; j <= n; ++j) {
    Mat pts(n, n);
    int col = 0;
    for (int i = 0; i <= n; ++i)
      if (i != j) pts.col(col++) = support[sel[i]];
    Vec base = pts.col(0);
    Mat centered(n, n - 1);
    for (int c = 1; c < n; ++c) centered.col(c - 1) = pts.col(c) - base;
    // unit normal of the affine hull
    Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullU);
    Vec v = svd.matrixU().col(n - 1);
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0) v = -v;  // deterministic sign
    cert.plane_normals.push_back(v);
    cert.plane_offsets.push_back(v.dot(base));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// The regular m-gon with facet lengths 2 pi / m shares all surface tensors
// with the unit disc up to rank m-1 and differs at rank m. The pair is the
// base case of the cone-lift family below.
// ---------------------------------------------------------------------------
struct CounterexamplePair {
  DiscreteMeasure polytope_measure;
  DiscreteMeasure body_measure;  // not a polytope measure
};

inline CounterexamplePair polygon_disc_pair(int m, int disc_exactness = 0) {
  if (m < 3) throw std::invalid_argument("polygon_disc_pair: m must be >= 3");
  CounterexamplePair pair;
  pair.polytope_measure = DiscreteMeasure(2);
  for (int j = 0; j < m; ++j) {
    double t = 2 * kPi * j / m;
    Vec u(2);
    u << std::cos(t), std::sin(t);
    pair.polytope_measure.add(u, 2 * kPi / m);
  }
  int exact = std::max(disc_exactness, 2 * m + 4);
  pair.body_measure = discretize_sphere(2, 1.0, exact);
  return pair;
}

/// Lifts a measure on S^{n-2} with vanishing first moments to one on S^{n-1}:
/// atoms are pushed to latitude alpha and balanced by an atom at -e_n of
/// weight alpha * S_prev. First moments vanish again by construction.
inline DiscreteMeasure cone_lift(const DiscreteMeasure& prev, double S_prev, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("cone_lift: alpha must be in (0,1)");
  if (first_moment(prev).norm() > 1e-9 * std::max(1.0, prev.mass()))
    throw std::invalid_argument("cone_lift: input first moments do not vanish");
  const int n = prev.dim + 1;
  DiscreteMeasure out(n);
  double c = std::sqrt(1.0 - alpha * alpha);
  for (int i = 0; i < prev.size(); ++i) {
    Vec u(n);
    u.head(n - 1) = c * prev.atoms[i];
    u[n - 1] = alpha;
    out.add(u, prev.weights[i]);
  }
  out.add(-Vec::Unit(n, n - 1), alpha * S_prev);
  if (first_moment(out).norm() > 1e-9 * out.mass())
    throw std::runtime_error("cone_lift: output first moments do not vanish");
  return out;
}

/// Polytope-vs-nonpolytope measures with identical surface tensors up to
/// rank m-n+1 and distinct ones at m-n+2. n=2 is the polygon/disc pair; n=3
/// lifts the (m-1)-facet planar pair with alpha = 1/2.
inline CounterexamplePair counterexample_pair(int n, int m) {
  if (m < n + 1) throw std::invalid_argument("counterexample_pair: need m >= n+1");
  if (n == 2) return polygon_disc_pair(m);
  if (n != 3) throw std::invalid_argument("counterexample_pair: only n=2 and n=3");
  CounterexamplePair base = polygon_disc_pair(m - 1);
  double alpha = 0.5;
  CounterexamplePair out;
  out.polytope_measure =
      cone_lift(base.polytope_measure, base.polytope_measure.mass(), alpha);
  out.body_measure = cone_lift(base.body_measure, base.body_measure.mass(), alpha);
  return out;
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_UNIQUENESS_HPP
