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

#ifndef SHAPETENSOR_HARMONICS_HPP
#define SHAPETENSOR_HARMONICS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "shapetensor/common.hpp"
#include "shapetensor/quadrature.hpp"

namespace shapetensor {

/// Gegenbauer polynomial C_l^lambda(x) by the three-term recurrence.
inline double gegenbauer(int l, double lambda, double x) {
  if (l < 0) throw std::invalid_argument("gegenbauer: negative degree");
  if (l == 0) return 1.0;
  double cm2 = 1.0;
  double cm1 = 2.0 * lambda * x;
  for (int i = 2; i <= l; ++i) {
    double c = (2.0 * (i + lambda - 1.0) * x * cm1 - (i + 2.0 * lambda - 2.0) * cm2) / i;
    cm2 = cm1;
    cm1 = c;
  }
  return cm1;
}

/// d/dx C_l^lambda(x) = 2 lambda C_{l-1}^{lambda+1}(x).
inline double gegenbauer_derivative(int l, double lambda, double x) {
  if (l == 0) return 0.0;
  return 2.0 * lambda * gegenbauer(l - 1, lambda + 1.0, x);
}

/// Dimension N(n,k) of the space of spherical harmonics of degree k.
inline int basis_dim(int n, int k) {
  if (k < 0) throw std::invalid_argument("basis_dim: negative degree");
  if (n == 2) return k == 0 ? 1 : 2;
  if (n == 3) return 2 * k + 1;
  throw std::invalid_argument("basis_dim: only n=2 and n=3 are supported");
}

/// m_s = sum_{k<=s} N(n,k) = C(s+n-2,n-1) + C(s+n-1,n-1).
inline int total_dim(int n, int s) {
  if (n != 2 && n != 3) throw std::invalid_argument("total_dim: only n=2 and n=3");
  if (s < 0) throw std::invalid_argument("total_dim: negative degree");
  return int(binomial(s + n - 2, n - 1) + binomial(s + n - 1, n - 1));
}

struct ProjectionConstants {
  double E = 0.0;          // normalizer E_{nk}
  double logE = 0.0;
  std::vector<double> a;   // a_{nkj}, j = 0..k
};

/// E_{nk} = (k+n-2)! / ((4 pi)^{(n-1)/2} Gamma(k+(n-1)/2)) and
/// a_{nkj} = k!(k+n-2)! / ((k-j)!(k+n+j-2)!), evaluated in the log domain.
inline ProjectionConstants projection_constants(int n, int k) {
  if (k < 1) throw std::invalid_argument("projection_constants: k must be >= 1");
  ProjectionConstants pc;
  pc.logE = std::lgamma(double(k + n - 1)) - 0.5 * (n - 1) * std::log(4.0 * kPi) -
            std::lgamma(k + 0.5 * (n - 1));
  pc.E = std::exp(pc.logE);
  pc.a.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    pc.a[j] = std::exp(log_factorial(k) + std::lgamma(double(k + n - 1)) -
                       log_factorial(k - j) - std::lgamma(double(k + n + j - 1)));
  }
  return pc;
}

// ---------------------------------------------------------------------------
// Real orthonormal spherical harmonics for n = 2, 3 up to a maximum degree.
//
// For n=3 the basis of degree k is built from Gegenbauer polynomials in
// cos(theta) with sin/cos azimuthal factors, where the sphere is parametrized
// as u(theta,phi) = (sin t sin p, sin t cos p, cos t). Per-degree indices j
// run 1..2k+1: odd j carries cos(m phi) with m = (j-1)/2, even j carries
// sin(m phi) with m = j/2.
//
// For n=2 the basis is the standard circle family: 1/sqrt(2 pi), then
// cos(k t)/sqrt(pi) (j=1) and sin(k t)/sqrt(pi) (j=2).
//
// Normalizers come from the closed-form Gegenbauer L2 norm and are checked
// against quadrature at construction; a numeric normalization is substituted
// if the closed form ever disagrees beyond 1e-10.
// ---------------------------------------------------------------------------
class HarmonicBasis {
 public:
  HarmonicBasis(int n, int max_degree) : n_(n), max_degree_(max_degree) {
    if (n != 2 && n != 3) throw std::invalid_argument("HarmonicBasis: only n=2 and n=3");
    if (max_degree < 0) throw std::invalid_argument("HarmonicBasis: negative degree");
    offsets_.resize(max_degree + 2, 0);
    for (int k = 0; k <= max_degree; ++k)
      offsets_[k + 1] = offsets_[k] + basis_dim(n, k);
    if (n_ == 3) {
      alpha_.assign(max_degree + 1, {});
      for (int k = 0; k <= max_degree; ++k) {
        alpha_[k].resize(k + 1);
        for (int m = 0; m <= k; ++m) alpha_[k][m] = closed_form_alpha(k, m);
      }
      validate_normalizers();
    }
  }

  int dim() const { return n_; }
  int max_degree() const { return max_degree_; }
  int size() const { return offsets_[max_degree_ + 1]; }
  int offset(int k) const { return offsets_[k]; }

  /// Value of H_{nkj}(u) for a unit vector u, 1 <= j <= N(n,k).
  double eval(int k, int j, const Vec& u) const {
    check_index(k, j);
    if (std::abs(u.squaredNorm() - 1.0) > 1e-10)
      throw std::invalid_argument("HarmonicBasis::eval: u is not a unit vector");
    if (n_ == 2) return eval2(k, j, std::atan2(u[1], u[0]));
    double theta = std::acos(std::clamp(u[2], -1.0, 1.0));
    double phi = (std::abs(u[0]) + std::abs(u[1]) > 0.0) ? std::atan2(u[0], u[1]) : 0.0;
    return eval3(k, j, theta, phi);
  }

  /// All values up to max_degree, ordered by (k ascending, j ascending).
  Vec eval_all(const Vec& u) const {
    Vec out(size());
    if (n_ == 2) {
      double t = std::atan2(u[1], u[0]);
      for (int k = 0; k <= max_degree_; ++k)
        for (int j = 1; j <= basis_dim(2, k); ++j)
          out[offsets_[k] + j - 1] = eval2(k, j, t);
    } else {
      double theta = std::acos(std::clamp(u[2], -1.0, 1.0));
      double phi = (std::abs(u[0]) + std::abs(u[1]) > 0.0) ? std::atan2(u[0], u[1]) : 0.0;
      for (int k = 0; k <= max_degree_; ++k)
        for (int j = 1; j <= basis_dim(3, k); ++j)
          out[offsets_[k] + j - 1] = eval3(k, j, theta, phi);
    }
    return out;
  }

  /// n=3: values and partial derivatives with respect to the angles at
  /// u(theta, phi). Used by the fitting optimizer.
  void eval_all_grad3(double theta, double phi, Vec* values, Vec* dtheta,
                      Vec* dphi) const {
    values->resize(size());
    dtheta->resize(size());
    dphi->resize(size());
    double ct = std::cos(theta), st = std::sin(theta);
    for (int k = 0; k <= max_degree_; ++k) {
      for (int j = 1; j <= 2 * k + 1; ++j) {
        int m = (j % 2 == 1) ? (j - 1) / 2 : j / 2;
        bool is_cos = (j % 2 == 1);
        double lam = m + 0.5;
        double geg = gegenbauer(k - m, lam, ct);
        double dgeg = gegenbauer_derivative(k - m, lam, ct);
        double stm = std::pow(st, m);
        double az = is_cos ? std::cos(m * phi) : std::sin(m * phi);
        double daz = is_cos ? -m * std::sin(m * phi) : m * std::cos(m * phi);
        double a = alpha_[k][m];
        int idx = offsets_[k] + j - 1;
        (*values)[idx] = a * stm * geg * az;
        double dpolar = a * az *
            ((m > 0 ? m * std::pow(st, m - 1) * ct * geg : 0.0) - stm * st * dgeg);
        (*dtheta)[idx] = dpolar;
        (*dphi)[idx] = a * stm * geg * daz;
      }
    }
  }

  /// n=2 analogue: values and d/dtheta.
  void eval_all_grad2(double theta, Vec* values, Vec* dtheta) const {
    values->resize(size());
    dtheta->resize(size());
    (*values)[0] = 1.0 / std::sqrt(2.0 * kPi);
    (*dtheta)[0] = 0.0;
    for (int k = 1; k <= max_degree_; ++k) {
      double c = std::cos(k * theta), s = std::sin(k * theta);
      double inv = 1.0 / std::sqrt(kPi);
      (*values)[offsets_[k]] = inv * c;
      (*dtheta)[offsets_[k]] = -inv * k * s;
      (*values)[offsets_[k] + 1] = inv * s;
      (*dtheta)[offsets_[k] + 1] = inv * k * c;
    }
  }

 private:
  void check_index(int k, int j) const {
    if (k < 0 || k > max_degree_ || j < 1 || j > basis_dim(n_, k))
      throw std::out_of_range("HarmonicBasis: index out of range");
  }

  double eval2(int k, int j, double theta) const {
    if (k == 0) return 1.0 / std::sqrt(2.0 * kPi);
    double v = (j == 1) ? std::cos(k * theta) : std::sin(k * theta);
    return v / std::sqrt(kPi);
  }

  double eval3(int k, int j, double theta, double phi) const {
    int m = (j % 2 == 1) ? (j - 1) / 2 : j / 2;
    double base = alpha_[k][m] * std::pow(std::sin(theta), m) *
                  gegenbauer(k - m, m + 0.5, std::cos(theta));
    return base * ((j % 2 == 1) ? std::cos(m * phi) : std::sin(m * phi));
  }

  // 1 / L2 norm of sin^m(t) C_{k-m}^{m+1/2}(cos t) {cos,sin}(m p) on S^2.
  double closed_form_alpha(int k, int m) const {
    double azimuthal = (m == 0) ? 2.0 * kPi : kPi;
    double lam = m + 0.5;
    int l = k - m;
    double log_polar = std::log(kPi) + (1.0 - 2.0 * lam) * std::log(2.0) +
                       std::lgamma(l + 2.0 * lam) - log_factorial(l) -
                       std::log(l + lam) - 2.0 * std::lgamma(lam);
    return 1.0 / std::sqrt(azimuthal * std::exp(log_polar));
  }

  void validate_normalizers() {
    QuadratureRule rule = sphere_quadrature(3, 2 * max_degree_ + 2);
    for (int k = 0; k <= max_degree_; ++k) {
      for (int m = 0; m <= k; ++m) {
        int j = 2 * m + 1;  // cos-type member carries the same alpha
        double norm2 = 0.0;
        for (size_t q = 0; q < rule.nodes.size(); ++q)
          norm2 += rule.weights[q] * sq(eval3(k, j, angle_theta(rule.nodes[q]),
                                              angle_phi(rule.nodes[q])));
        if (std::abs(norm2 - 1.0) > 1e-10)
          alpha_[k][m] /= std::sqrt(norm2);
      }
    }
  }

  static double angle_theta(const Vec& u) { return std::acos(std::clamp(u[2], -1.0, 1.0)); }
  static double angle_phi(const Vec& u) {
    return (std::abs(u[0]) + std::abs(u[1]) > 0.0) ? std::atan2(u[0], u[1]) : 0.0;
  }

  int n_;
  int max_degree_;
  std::vector<int> offsets_;
  std::vector<std::vector<double>> alpha_;
};

// ---------------------------------------------------------------------------
// Projection operator: (P_k f)(u) = E_{nk} Int ((1+<u,v>)/2)^k f(v) dv.
// ---------------------------------------------------------------------------

/// Kernel-quadrature evaluation of P_k f at the given points; f is sampled on
/// the rule nodes.
inline std::vector<double> project_kernel(const QuadratureRule& rule,
                                          const std::vector<double>& f, int k,
                                          const std::vector<Vec>& eval_points) {
  ProjectionConstants pc = projection_constants(rule.dim, k);
  std::vector<double> out(eval_points.size(), 0.0);
  for (size_t e = 0; e < eval_points.size(); ++e) {
    double s = 0.0;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      double base = 0.5 * (1.0 + eval_points[e].dot(rule.nodes[q]));
      s += rule.weights[q] * std::pow(base, double(k)) * f[q];
    }
    out[e] = pc.E * s;
  }
  return out;
}

/// Same operator through the expansion P_k f = sum_j a_{nkj} (proj_j f).
inline std::vector<double> project_expansion(const HarmonicBasis& basis,
                                             const QuadratureRule& rule,
                                             const std::vector<double>& f, int k,
                                             const std::vector<Vec>& eval_points) {
  if (basis.max_degree() < k)
    throw std::invalid_argument("project_expansion: basis degree too small");
  ProjectionConstants pc = projection_constants(rule.dim, k);
  // Fourier coefficients of f against the basis, via the rule.
  Vec coeffs = Vec::Zero(basis.offset(k) + basis_dim(basis.dim(), k));
  for (size_t q = 0; q < rule.nodes.size(); ++q) {
    Vec h = basis.eval_all(rule.nodes[q]);
    coeffs += rule.weights[q] * f[q] * h.head(coeffs.size());
  }
  std::vector<double> out(eval_points.size(), 0.0);
  for (size_t e = 0; e < eval_points.size(); ++e) {
    Vec h = basis.eval_all(eval_points[e]);
    double s = 0.0;
    for (int deg = 0; deg <= k; ++deg)
      for (int j = 0; j < basis_dim(basis.dim(), deg); ++j)
        s += pc.a[deg] * coeffs[basis.offset(deg) + j] * h[basis.offset(deg) + j];
    out[e] = s;
  }
  return out;
}

/// P_k f on the rule nodes. Both evaluation paths are computed and must
/// agree; a disagreement signals a broken basis or normalizer.
inline std::vector<double> project(const HarmonicBasis& basis,
                                   const QuadratureRule& rule,
                                   const std::vector<double>& f, int k) {
  if (rule.exact_degree < 2 * k)
    throw std::invalid_argument("project: quadrature exactness below 2k");
  std::vector<double> kernel = project_kernel(rule, f, k, rule.nodes);
  std::vector<double> expansion = project_expansion(basis, rule, f, k, rule.nodes);
  double scale = 1e-8;
  for (double v : f) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < kernel.size(); ++i)
    if (std::abs(kernel[i] - expansion[i]) > 1e-8 * scale * rule.total_weight())
      throw std::runtime_error("project: kernel and expansion paths disagree");
  return kernel;
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_HARMONICS_HPP
