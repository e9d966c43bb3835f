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

#ifndef SHAPETENSOR_QUADRATURE_HPP
#define SHAPETENSOR_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "shapetensor/common.hpp"

namespace shapetensor {

/// Nodes and positive weights on S^{n-1}; integrates every spherical
/// polynomial of degree <= exact_degree exactly.
struct QuadratureRule {
  int dim = 0;
  int exact_degree = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  double integrate(const std::function<double(const Vec&)>& f) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss-Legendre nodes/weights on [-1,1], exact for polynomials of degree
/// 2*count-1. Newton iteration from the Chebyshev initial guess.
inline void gauss_legendre(int count, std::vector<double>* nodes,
                           std::vector<double>* weights) {
  nodes->assign(count, 0.0);
  weights->assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (count == 1) { p1 = x; }
      for (int l = 2; l <= count; ++l) {
        double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      double pl = (count == 1) ? x : p1;
      double plm1 = (count == 1) ? 1.0 : p0;
      dp = count * (plm1 - x * pl) / (1.0 - x * x);
      double dx = pl / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    (*nodes)[i] = x;
    (*weights)[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

/// Product rule on the sphere. n=2: uniform angles (exact for trigonometric
/// polynomials); n=3: Gauss-Legendre in cos(theta) times uniform in phi.
inline QuadratureRule sphere_quadrature(int n, int exact_degree) {
  if (exact_degree < 0) throw std::invalid_argument("sphere_quadrature: negative degree");
  QuadratureRule rule;
  rule.dim = n;
  rule.exact_degree = exact_degree;
  if (n == 2) {
    int count = exact_degree + 1;
    if (count < 1) count = 1;
    double w = 2.0 * kPi / count;
    for (int i = 0; i < count; ++i) {
      double th = 2.0 * kPi * i / count;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      rule.nodes.push_back(u);
      rule.weights.push_back(w);
    }
  } else if (n == 3) {
    int lcount = exact_degree / 2 + 1;
    int pcount = exact_degree + 1;
    std::vector<double> t, wt;
    gauss_legendre(lcount, &t, &wt);
    double wphi = 2.0 * kPi / pcount;
    for (int i = 0; i < lcount; ++i) {
      double ct = t[i];
      double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int p = 0; p < pcount; ++p) {
        double phi = 2.0 * kPi * p / pcount;
        Vec u(3);
        u << st * std::sin(phi), st * std::cos(phi), ct;
        rule.nodes.push_back(u);
        rule.weights.push_back(wt[i] * wphi);
      }
    }
  } else {
    throw std::invalid_argument("sphere_quadrature: only n=2 and n=3 are supported");
  }
  return rule;
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_QUADRATURE_HPP
