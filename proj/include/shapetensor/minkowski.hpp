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

#ifndef SHAPETENSOR_MINKOWSKI_HPP
#define SHAPETENSOR_MINKOWSKI_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "shapetensor/bodies.hpp"
#include "shapetensor/measures.hpp"

namespace shapetensor {

/// Merges atoms that lie within the angular tolerance of each other
/// (weights summed, direction weight-averaged and renormalized) and drops
/// atoms with weight <= drop_tol. Antipodal atoms never merge.
inline DiscreteMeasure merge_atoms(const DiscreteMeasure& mu, double angular_tol = 1e-6,
                                   double drop_tol = 0.0) {
  DiscreteMeasure out(mu.dim);
  double cos_tol = std::cos(angular_tol);
  std::vector<Vec> dirs;    // weighted direction sums
  std::vector<double> wts;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu.weights[i] <= drop_tol) continue;
    bool merged = false;
    for (size_t g = 0; g < dirs.size(); ++g) {
      Vec rep = dirs[g].normalized();
      if (rep.dot(mu.atoms[i]) >= cos_tol) {
        dirs[g] += mu.weights[i] * mu.atoms[i];
        wts[g] += mu.weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      dirs.push_back(mu.weights[i] * mu.atoms[i]);
      wts.push_back(mu.weights[i]);
    }
  }
  for (size_t g = 0; g < dirs.size(); ++g) {
    if (wts[g] <= drop_tol) continue;
    out.add(dirs[g].normalized(), wts[g]);
  }
  return out;
}

struct MinkProblem {
  DiscreteMeasure measure;   // distinct normals with positive target areas
  double closedness_tol = 1e-8;
  double area_tol = 1e-6;    // relative facet-area match required of the output
  int max_iterations = 1200;

  explicit MinkProblem(DiscreteMeasure mu) : measure(std::move(mu)) {}
};

namespace detail {

struct MinkState {
  double volume = 0.0;
  Vec areas;       // per input normal; zero where the facet vanished
  bool valid = false;
  Polytope body;
};

inline MinkState mink_evaluate(const std::vector<Vec>& normals, const Vec& h) {
  MinkState st;
  const int m = int(normals.size());
  st.areas = Vec::Zero(m);
  std::vector<double> hv(h.data(), h.data() + m);
  try {
    st.body = halfspace_intersection(normals, hv);
  } catch (const std::exception&) {
    return st;
  }
  // map facet areas back to input normal indices (construction preserves order)
  size_t fi = 0;
  for (int i = 0; i < m && fi < st.body.normals.size(); ++i) {
    if ((st.body.normals[fi] - normals[i]).norm() < 1e-12) {
      st.areas[i] = st.body.areas[fi];
      ++fi;
    }
  }
  st.volume = st.body.volume;
  st.valid = st.volume > 0.0;
  return st;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reconstructs the polytope with prescribed facet normals u_i and areas a_i.
// The support vector minimizes the convex functional
//     J(h) = <a, h> - c log V(h),
// whose stationarity condition is a_i = (c/V) A_i(h), i.e. facet areas
// proportional to the targets (the gradient identity dV/dh_i = A_i drives
// everything); the output is then rescaled so the areas match exactly and
// recentered at its centroid. BFGS with a finite-difference Newton polish.
// ---------------------------------------------------------------------------
inline Polytope mink_reconstruct(const MinkProblem& problem) {
  const DiscreteMeasure& mu = problem.measure;
  const int n = mu.dim;
  const int m = mu.size();
  if (m < n + 1) throw std::invalid_argument("mink_reconstruct: too few facets");
  double total = mu.mass();
  if (first_moment(mu).norm() > problem.closedness_tol * total)
    throw std::invalid_argument("mink_reconstruct: measure is not closed (first moments)");
  if (classify(mu).tag != MeasureClassTag::FullDim)
    throw std::invalid_argument("mink_reconstruct: measure is not full-dimensional");

  const std::vector<Vec>& normals = mu.atoms;
  Vec a(m);
  for (int i = 0; i < m; ++i) a[i] = mu.weights[i];

  // ball heuristic start
  double h0 = std::pow(total / sphere_area(n), 1.0 / (n - 1));
  Vec h = Vec::Constant(m, h0);
  detail::MinkState st = detail::mink_evaluate(normals, h);
  if (!st.valid) throw std::runtime_error("mink_reconstruct: infeasible start");

  const double c_log = a.dot(h) / double(n);
  auto objective = [&](const detail::MinkState& s, const Vec& hh) {
    return a.dot(hh) - c_log * std::log(s.volume);
  };
  auto gradient = [&](const detail::MinkState& s) -> Vec {
    return a - (c_log / s.volume) * s.areas;
  };

  double J = objective(st, h);
  Vec g = gradient(st);
  Mat Hinv = Mat::Identity(m, m) * (h0 / std::max(1e-12, g.cwiseAbs().maxCoeff() + 1.0));
  double gtol = 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff());

  int iter = 0;
  for (; iter < problem.max_iterations; ++iter) {
    if (g.cwiseAbs().maxCoeff() <= gtol) break;
    Vec d = -(Hinv * g);
    if (d.dot(g) > 0) d = -g * (h0 / (1.0 + g.norm()));  // reset on a bad direction
    double step = 1.0;
    detail::MinkState next;
    Vec hn;
    double Jn = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      hn = h + step * d;
      next = detail::mink_evaluate(normals, hn);
      if (next.valid) {
        Jn = objective(next, hn);
        if (Jn <= J + 1e-4 * step * g.dot(d)) {
          ok = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!ok) break;
    Vec gn = gradient(next);
    Vec s = hn - h, y = gn - g;
    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      Mat I = Mat::Identity(m, m);
      Mat V = I - (s * y.transpose()) / sy;
      Hinv = V * Hinv * V.transpose() + (s * s.transpose()) / sy;
    }
    h = hn;
    st = next;
    J = Jn;
    g = gn;
  }

  // Newton polish on the stationarity system with finite-difference Jacobian.
  for (int round = 0; round < 12; ++round) {
    g = gradient(st);
    if (g.cwiseAbs().maxCoeff() <= gtol) break;
    double eps = 1e-6 * std::max(1.0, h.cwiseAbs().maxCoeff());
    Mat Jac(m, m);
    bool fd_ok = true;
    for (int i = 0; i < m; ++i) {
      Vec hp = h;
      hp[i] += eps;
      detail::MinkState sp = detail::mink_evaluate(normals, hp);
      if (!sp.valid) {
        fd_ok = false;
        break;
      }
      Jac.col(i) = (gradient(sp) - g) / eps;
    }
    if (!fd_ok) break;
    // translations span the null space; a small ridge keeps the solve stable
    double ridge = 1e-10 * std::max(1.0, Jac.cwiseAbs().maxCoeff());
    Vec delta = (Jac + ridge * Mat::Identity(m, m)).partialPivLu().solve(-g);
    double step = 1.0;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vec hn = h + step * delta;
      detail::MinkState next = detail::mink_evaluate(normals, hn);
      if (next.valid && gradient(next).norm() < g.norm() * (1.0 - 0.1 * step)) {
        h = hn;
        st = next;
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) break;
  }

  // rescale so the areas match the targets, then recenter
  double ratio = a.sum() / st.areas.sum();
  double t = std::pow(ratio, 1.0 / (n - 1));
  h *= t;
  st = detail::mink_evaluate(normals, h);
  if (!st.valid) throw std::runtime_error("mink_reconstruct: lost feasibility at rescale");

  double worst = (st.areas - a).cwiseAbs().maxCoeff() / total;
  if (worst > problem.area_tol)
    throw std::runtime_error("mink_reconstruct: did not converge (area mismatch " +
                             std::to_string(worst) + ")");

  return st.body.translated(-st.body.centroid);
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_MINKOWSKI_HPP
